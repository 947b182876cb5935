// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "thick/blocks.hpp"
#include "thick/construct.hpp"
#include "thick/error.hpp"
#include "thick/io.hpp"
#include "thick/knot.hpp"
#include "thick/nerve.hpp"
#include "thick/rng.hpp"
#include "thick/stats.hpp"
#include "thick/sweep.hpp"
#include "thick/width.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace thick;
using Eigen::MatrixXd;
using Eigen::Vector3d;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EmbeddedComplex circle_embedding(int m, double radius) {
  EmbeddedComplex E{cycle_graph(m), MatrixXd::Zero(3, m)};
  for (int i = 0; i < m; ++i) {
    E.coords(0, i) = radius * std::cos(2 * M_PI * i / m);
    E.coords(1, i) = radius * std::sin(2 * M_PI * i / m);
  }
  return E;
}

// Dense pairs of points on the polygon.
double distortion_bruteforce(const PLKnot& K, int per_edge) {
  std::vector<Vector3d> x;
  std::vector<double> s;
  for (int i = 0; i < K.size(); ++i)
    for (int t = 0; t <= per_edge; ++t) {
      const double u = static_cast<double>(t) / per_edge;
      x.push_back((1 - u) * K.segment_start(i) + u * K.segment_end(i));
      s.push_back(K.vertex_arc(i) + u * (K.vertex_arc(i + 1) - K.vertex_arc(i)));
    }
  const double L = K.total_length();
  double best = 0;
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      const double chord = (x[a] - x[b]).norm();
      if (chord < 1e-12) continue;
      const double d = std::abs(s[b] - s[a]);
      best = std::max(best, std::min(d, L - d) / chord);
    }
  return best;
}

Outcome c1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> Ns, med;
  for (int N : {8, 16, 32, 64, 128}) {
    std::vector<double> th;
    for (int s = 0; s < 200; ++s) {
      const auto G = random_bipartite_graph(N, 3, mix_seed(1, N * 1000 + s));
      th.push_back(combinatorial_thickness(random_facewise_linear(G, 3, 10.0, mix_seed(2, N * 1000 + s))));
    }
    Ns.push_back(N);
    med.push_back(median(th));
  }
  const auto f = fit_loglog(Ns, med);
  const double t = seconds_since(t0);
  return {std::abs(f.slope + 2.0) <= 0.4 && t <= 120.0,
          fmt("slope %.3f +- %.3f, %.1f s", f.slope, f.slope_stderr, t)};
}

Outcome c2() {
  bool ok = true;
  std::string detail;
  for (int side : {17, 33}) {
    std::vector<double> two, plain;
    std::size_t edges = 0;
    for (int s = 0; s < 20; ++s) {
      const auto G = random_bipartite_graph(side, 6, 100 + s);
      edges = G.count(1);
      const double R = std::sqrt(static_cast<double>(G.total()));
      two.push_back(two_scale_embedding(G, 3, 200 + s, false).achieved_eps);
      plain.push_back(combinatorial_thickness(random_facewise_linear(G, 3, R, 300 + s)));
    }
    const double ratio = median(two) / median(plain);
    ok = ok && ratio >= 5.0;
    detail += fmt("%zu edges: ratio %.1f; ", edges, ratio);
  }
  return {ok, detail};
}

Outcome c3() {
  int checks = 0, failures = 0;
  double worst = 1e300;
  for (int s = 0; s < 50; ++s) {
    const auto G = random_bipartite_graph(10, 6, s);
    const double bound = expansion_constant(G, ExpansionMode::exact) * G.vertex_count() / 2.0;
    KbOptions kb;
    kb.radius_multiplier = 16;
    const std::vector<EmbeddedComplex> embeddings{random_facewise_linear(G, 3, 10.0, s),
                                                  two_scale_embedding(G, 3, s, false).embedding,
                                                  kb_sphere_embedding(G, s, 1000, kb)};
    for (const auto& E : embeddings) {
      const int got = bisecting_sweep(E, axis_directions(3)).best;
      ++checks;
      if (got < bound) ++failures;
      worst = std::min(worst, got - bound);
    }
  }
  return {failures == 0, fmt("%d of %d embeddings below h*N/2 (worst margin %.2f)", failures, checks, worst)};
}

Outcome c4() {
  std::vector<double> S{4, 8, 16, 32}, est;
  bool verified = true;
  try {
    for (double s : S) est.push_back(fill_constant_estimate(2, 1, static_cast<int>(s), 1, 100, 1));
  } catch (const std::logic_error&) {
    verified = false;
  }
  if (!verified) return {false, "a filling failed GF(2) verification"};
  const auto f = fit_loglog(S, est);
  return {std::abs(f.slope - 1.0) <= 0.3, fmt("slope %.3f; every filling verified", f.slope)};
}

Outcome c5() {
  bool ok = true;
  std::string detail;
  for (int S : {4, 8, 16}) {
    const CubicalComplex X(1, 2, S);
    const double fill = fill_constant_estimate(2, 1, S, 1, 100, 1);
    const double lo = width_lower_bound_filling(X, {fill}).value;
    const int up = pl_map_width_upper(X, lattice_coordinates(X).topRows(1), 1000);
    ok = ok && lo <= up && up == S + 1;
    detail += fmt("S=%d lower %.2f upper %d; ", S, lo, up);
  }
  return {ok, detail};
}

Outcome c6() {
  const auto R = homotopy_invariant_report(circle_embedding(100, 10.0), 0.5, 1);
  auto G = grid_graph(5);
  EmbeddedComplex E{G, MatrixXd::Zero(3, 25)};
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      E.coords(0, i * 5 + j) = i;
      E.coords(1, i * 5 + j) = j;
    }
  const double thick = combinatorial_thickness(E);
  const auto Q = homotopy_invariant_report(E, 0.4, 1);
  const bool ok = R.betti[1] == 1 && R.ratio < 1.0 && thick >= 1.0 && Q.betti[1] == 16;
  return {ok, fmt("circle b1 %d ratio %.4f; grid thickness %.2f b1 %d", R.betti[1], R.ratio, thick, Q.betti[1])};
}

Outcome c7() {
  const std::vector<std::pair<std::string, PLKnot>> suite{{"circle", regular_polygon(10000, 10.0)},
                                                          {"square", unit_square_knot()},
                                                          {"T23", torus_knot(2, 3, 10, 2, 200)},
                                                          {"T25", torus_knot(2, 5, 10, 2, 200)},
                                                          {"T34", torus_knot(3, 4, 10, 2, 200)}};
  int violations = 0;
  double circle_gap = 1;
  for (const auto& [name, K] : suite) {
    const auto c = check_lemma41(K, 1e-3);
    if (!(c.convol_lower <= 4 * c.distor.hi)) ++violations;
    if (name == "circle") circle_gap = std::abs(4 * c.distor.hi - c.convol_lower) / (4 * c.distor.hi);
  }
  return {violations == 0 && circle_gap <= 0.02, fmt("%d violations; circle relative gap %.4f", violations, circle_gap)};
}

Outcome c8() {
  const auto circle = distortion(regular_polygon(10000, 1.0), 1e-4);
  const auto square = distortion(unit_square_knot(), 1e-9);
  const double oracle = distortion_bruteforce(unit_square_knot(), 100);
  bool increasing = true;
  double last = 0;
  std::string qs;
  for (int q : {3, 5, 7, 9}) {
    const double lo = distortion(torus_knot(2, q, 10, 2, 24 * q), 1e-2).lo;
    increasing = increasing && lo > last;
    last = lo;
    qs += fmt(" %.3f", lo);
  }
  const bool ok = std::abs(circle.lo - M_PI / 2) <= 1e-3 && std::abs(square.lo - 2.0) <= 1e-6 &&
                  std::abs(oracle - 2.0) <= 1e-6 && increasing;
  return {ok, fmt("circle %.6f; square %.9f (oracle %.9f); T2q lower bounds%s", circle.lo, square.lo, oracle,
                  qs.c_str())};
}

Outcome c9() {
  const PLKnot K = torus_knot(2, 3, 10, 2, 120);
  const double bound = 1.2 * conformal_length(K, 20000, 1).lower;
  Vector3d lo = K.vertex(0), hi = K.vertex(0);
  for (const auto& p : K.points()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vector3d c = 0.5 * (lo + hi);
  const double half = 0.6 * (hi - lo).maxCoeff();
  const Block Q{c - Vector3d::Constant(half), c + Vector3d::Constant(half)};
  try {
    const auto d = block_decompose(Q, K, bound, 1, 100);
    bool ok = d.blocks.size() >= 8 && d.blocks.size() <= 2000;
    int worst = 0;
    for (std::size_t i = 0; i < d.blocks.size(); ++i) {
      ok = ok && d.blocks[i].eccentricity() < 10;
      for (int x : d.crossings[i]) worst = std::max(worst, x);
      const auto fresh = face_crossings(d.blocks[i], K);
      ok = ok && fresh == d.crossings[i];
    }
    ok = ok && worst <= 1000 * bound;
    return {ok, fmt("%zu blocks after %d attempts, max face crossings %d (bound %.1f)", d.blocks.size(), d.attempts,
                    worst, 1000 * bound)};
  } catch (const DecompositionError& e) {
    return {false, e.what()};
  }
}

Outcome c10() {
  const BlockTree T = nested_block_tree(torus_knot(2, 3, 10, 2, 120), 1);
  const bool ok = T.properties_hold() && T.partition_error() <= 1e-6 && T.max_degree() <= 2001;
  return {ok, fmt("%zu nodes, depth %d, partition error %.2e, degree %d", T.nodes.size(), T.target_depth,
                  T.partition_error(), T.max_degree())};
}

Outcome c11() {
  std::vector<double> eps, pair, fam;
  for (double e = 0.02; e < 0.161; e *= std::sqrt(2.0)) eps.push_back(e);
  std::vector<Probability> fp;
  for (double e : eps) {
    pair.push_back(estimate_bad_probability(Scenario::pair, 1, 3, e, 100000, 5).p_hat);
    fp.push_back(estimate_bad_probability(Scenario::family, 1, 3, e, 100000, 5, 3));
  }
  const double slope = fit_loglog(eps, pair).slope;
  // C fitted at the largest eps; smaller eps must stay below C sqrt(eps)
  // up to sampling error.
  const double C = fp.back().p_hat / std::sqrt(eps.back());
  bool family_ok = true;
  for (std::size_t i = 0; i < eps.size(); ++i) family_ok = family_ok && fp[i].lo <= C * std::sqrt(eps[i]);
  bool tail_ok = true;
  std::string tails;
  for (double d : {0.01, 0.05, 0.1}) {
    const double r = inverse_norm_tail(1, d, 100000, 5).ratio;
    tail_ok = tail_ok && std::abs(r - 1.0) <= 0.05;
    tails += fmt(" %.4f", r);
  }
  return {std::abs(slope - 1.0) <= 0.25 && family_ok && tail_ok,
          fmt("pair slope %.3f; family C %.3f %s; tail ratios%s", slope, C, family_ok ? "holds" : "violated",
              tails.c_str())};
}

Outcome c12() {
  std::vector<std::pair<std::string, std::function<std::string()>>> pipelines{
      {"sweep",
       [] {
         return rows_csv(run_sweep(parse_config("generator = random_bipartite\nN = 8, 16\nseeds = 2\ndegree = 3\n"
                                                "measures = thickness, strong_thickness, bisect\n")));
       }},
      {"two_scale",
       [] { return dump(to_json(two_scale_embedding(random_bipartite_graph(8, 3, 1), 3, 1, false).embedding)); }},
      {"kb_sphere", [] { return dump(to_json(kb_sphere_embedding(cycle_graph(8), 2, 1000))); }},
      {"retraction", [] { return dump(to_json(retraction_embed_graph(cycle_graph(6), 3).embedding)); }},
      {"nerve", [] { return dump(to_json(homotopy_invariant_report(circle_embedding(40, 4.0), 0.5, 3))); }},
      {"fill", [] { return fmt("%.17g", fill_constant_estimate(3, 2, 4, 2, 10, 4)); }},
      {"convol",
       [] {
         const auto c = conformal_length(torus_knot(2, 3, 10, 2, 72), 5000, 5);
         return fmt("%.17g %.17g %.17g %.17g %.17g", c.lower, c.center.x(), c.center.y(), c.center.z(), c.radius);
       }},
      {"tree", [] { return dump(to_json(nested_block_tree(torus_knot(2, 3, 10, 2, 72), 6))); }},
      {"probability",
       [] { return fmt("%zu", estimate_bad_probability(Scenario::family, 1, 3, 0.05, 20000, 7).hits); }},
  };
  std::string bad;
  for (const auto& [name, run] : pipelines)
    if (run() != run()) bad += " " + name;
  return {bad.empty(), bad.empty() ? fmt("%zu pipelines identical on rerun", pipelines.size()) : "differs:" + bad};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu: %s (%s) [%.1f s]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
