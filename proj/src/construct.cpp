#include "thick/construct.hpp"

#include "thick/error.hpp"
#include "thick/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace thick {

using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXd;

double enclosing_radius(const EmbeddedComplex& E) {
  return E.coords.cols() ? E.coords.colwise().norm().maxCoeff() : 0.0;
}

EmbeddedComplex centered(const EmbeddedComplex& E) {
  EmbeddedComplex out = E;
  if (E.coords.cols() == 0) return out;
  const VectorXd mid = 0.5 * (E.coords.rowwise().minCoeff() + E.coords.rowwise().maxCoeff());
  out.coords.colwise() -= mid;
  return out;
}

EmbeddedComplex random_facewise_linear(const SimplicialComplex& X, int n, double R, std::uint64_t seed) {
  if (n < 2 * X.dim() + 1) throw ParameterError("random_facewise_linear needs n >= 2k + 1");
  if (!(R > 0)) throw ParameterError("random_facewise_linear needs R > 0");
  Rng rng(seed);
  for (int attempt = 0; attempt < 10; ++attempt) {
    EmbeddedComplex E{X, MatrixXd(n, X.vertex_count())};
    for (int v = 0; v < X.vertex_count(); ++v) E.coords.col(v) = rng.in_ball(n, R);
    if (X.total() < 2 || combinatorial_thickness(E) > 0) return E;
  }
  throw ConstructionError("random_facewise_linear: 10 consecutive degenerate draws");
}

// ------------------------------------------------------------ two-scale

namespace {

struct Placement {
  const SimplicialComplex& X;
  MatrixXd& pos;
  std::vector<std::vector<int>> incident;  // vertex -> flat simplex ids
  std::vector<FaceRef> refs;
  std::vector<std::vector<int>> near;       // flat id -> non-adjacent simplices within 3
  std::vector<std::vector<std::vector<int>>> families;  // vertex -> families touching it
  double pair_scale = 1.0;  // strong margins count half of a pair distance

  Placement(const SimplicialComplex& X, MatrixXd& pos) : X(X), pos(pos) {
    incident.resize(X.vertex_count());
    for (int j = 0; j <= X.dim(); ++j)
      for (std::size_t i = 0; i < X.count(j); ++i) {
        const int flat = static_cast<int>(refs.size());
        refs.push_back({j, static_cast<int>(i)});
        for (int v : X.simplices(j)[i]) incident[v].push_back(flat);
      }
  }

  Points points(int flat) const {
    const Simplex& s = X.simplex(refs[flat]);
    Points P(pos.rows(), static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) P.col(i) = pos.col(s[i]);
    return P;
  }

  static bool disjoint(const Simplex& a, const Simplex& b) {
    for (int x : a)
      if (std::binary_search(b.begin(), b.end(), x)) return false;
    return true;
  }

  // Pairs (and, when strong, families) whose initial distance is at most 3.
  void build_events(bool strong, int k) {
    pair_scale = strong ? 0.5 : 1.0;
    const int M = static_cast<int>(refs.size());
    std::vector<VectorXd> lo(M), hi(M);
    for (int f = 0; f < M; ++f) {
      const Points P = points(f);
      lo[f] = P.rowwise().minCoeff();
      hi[f] = P.rowwise().maxCoeff();
    }
    std::vector<int> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lo[a][0] < lo[b][0]; });
    near.assign(M, {});
    std::vector<std::vector<int>> close(M);  // any pair within 3, adjacency allowed
    for (int a = 0; a < M; ++a) {
      for (int b = a + 1; b < M; ++b) {
        const int fa = order[a], fb = order[b];
        if (lo[fb][0] > hi[fa][0] + 3) break;
        bool gap_ok = true;
        for (Eigen::Index i = 0; i < pos.rows() && gap_ok; ++i)
          gap_ok = lo[fb][i] <= hi[fa][i] + 3 && lo[fa][i] <= hi[fb][i] + 3;
        if (!gap_ok) continue;
        const bool apart = disjoint(X.simplex(refs[fa]), X.simplex(refs[fb]));
        if (!apart && !strong) continue;
        if (simplex_distance(points(fa), points(fb)) > 3) continue;
        if (apart) {
          near[fa].push_back(fb);
          near[fb].push_back(fa);
        }
        close[std::min(fa, fb)].push_back(std::max(fa, fb));
      }
    }
    if (!strong) return;
    for (auto& c : close) std::sort(c.begin(), c.end());
    families.assign(X.vertex_count(), {});
    std::vector<int> fam;
    std::function<void(int)> grow = [&](int J) {
      if (static_cast<int>(fam.size()) == J) {
        std::vector<FaceRef> members;
        for (int f : fam) members.push_back(refs[f]);
        if (!minimal_vertex_free_family(X, members)) return;
        std::vector<int> verts;
        for (int f : fam)
          for (int v : X.simplex(refs[f])) verts.push_back(v);
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        for (int v : verts) families[v].push_back(fam);
        return;
      }
      for (int c : close[fam.back()]) {
        // Members of a minimal family pairwise share a vertex.
        bool ok = true;
        for (std::size_t i = 0; i < fam.size() && ok; ++i)
          ok = !disjoint(X.simplex(refs[fam[i]]), X.simplex(refs[c])) &&
               (i + 1 == fam.size() || std::binary_search(close[fam[i]].begin(), close[fam[i]].end(), c));
        if (!ok) continue;
        fam.push_back(c);
        grow(J);
        fam.pop_back();
      }
    };
    for (int J = 3; J <= k + 2; ++J)
      for (int f = 0; f < M; ++f) {
        fam = {f};
        grow(J);
      }
  }

  // Smallest event margin involving v, abandoning once it drops below floor.
  double score(int v, double floor) const {
    double worst = kInf;
    for (int f : incident[v]) {
      const Points P = points(f);
      for (int g : near[f]) {
        worst = std::min(worst, pair_scale * simplex_distance(P, points(g)));
        if (worst <= floor) return worst;
      }
    }
    if (!families.empty()) {
      for (const auto& fam : families[v]) {
        std::vector<Points> pts;
        for (int f : fam) pts.push_back(points(f));
        worst = std::min(worst, family_minimax(pts, 1e-7).value);
        if (worst <= floor) return worst;
      }
    }
    return worst;
  }
};

}  // namespace

TwoScaleResult two_scale_embedding(const SimplicialComplex& X, int n, std::uint64_t seed, bool strong) {
  const int k = X.dim();
  if (n < 2 * k + 1) throw ParameterError("two_scale_embedding needs n >= 2k + 1");
  if (X.total() < 2) throw ParameterError("two_scale_embedding needs at least 2 simplices");
  const double N = static_cast<double>(X.total());
  const double R = std::pow(N, 1.0 / (n - k));
  Rng master(seed);
  for (int attempt = 1; attempt <= 5; ++attempt) {
    const std::uint64_t s = mix_seed(seed, attempt);
    const EmbeddedComplex coarse = random_facewise_linear(X, n, R, s);
    RefinedEmbedding fine = refine_by_unit_lattice(coarse, mix_seed(s, 1));
    MatrixXd pos = fine.embedding.coords;
    const MatrixXd initial = pos;
    Placement pl(fine.embedding.complex, pos);
    pl.build_events(strong, k);
    Rng rng(mix_seed(s, 2));
    for (int v = 0; v < fine.embedding.complex.vertex_count(); ++v) {
      double best = -1;
      VectorXd best_y = pos.col(v);
      for (int c = 0; c < 64; ++c) {
        const VectorXd y = initial.col(v) + rng.in_ball(n, 1.0);
        pos.col(v) = y;
        const double sc = pl.score(v, best);
        if (sc > best) {
          best = sc;
          best_y = y;
        }
      }
      pos.col(v) = best_y;
    }
    fine.embedding.coords = pos;
    const double eps = strong ? strong_combinatorial_thickness(fine.embedding)
                              : combinatorial_thickness(fine.embedding);
    if (!(eps > 0)) continue;
    TwoScaleResult out;
    out.refinement = std::move(fine.refinement);
    out.embedding = scaled(fine.embedding, std::isfinite(eps) ? 1.0 / eps : 1.0);
    out.achieved_eps = eps;
    out.initial_radius = R;
    out.radius = enclosing_radius(out.embedding);
    out.attempts = attempt;
    return out;
  }
  throw ConstructionError("two_scale_embedding: placement collided on 5 seeds");
}

// ------------------------------------------------------------ folding

FoldMap::FoldMap(double Ly, double Lz, int runs_y, int runs_z) {
  if (runs_y < 1 || runs_z < 1) throw ParameterError("fold needs at least one run per stage");
  auto make = [](double length, double half_width, int runs) {
    Stage st;
    st.runs = runs;
    st.length = length;
    st.half_width = half_width;
    st.radius = half_width / kBend;
    st.run_length = (length - (runs - 1) * M_PI * st.radius) / runs;
    return st;
  };
  stage1_ = make(Ly, kThickness / 2, runs_y);
  const double width1 = 2 * stage1_.radius * (runs_y - 1) + kThickness;
  stage2_ = make(Lz, width1 / 2, runs_z);
}

Eigen::Vector2d FoldMap::fold(const Stage& st, double u, double s) {
  const double rho = st.radius, ell = st.run_length;
  const double period = ell + M_PI * rho;
  int i = static_cast<int>(std::floor(s / period));
  i = std::clamp(i, 0, st.runs - 1);
  const double local = s - i * period;
  Eigen::Vector2d c, t;
  if (local <= ell || i == st.runs - 1) {
    const bool even = i % 2 == 0;
    c = {2 * rho * i, even ? local : ell - local};
    t = {0.0, even ? 1.0 : -1.0};
  } else {
    const double phi = (local - ell) / rho;
    if (i % 2 == 0) {
      const Eigen::Vector2d centre(2 * rho * i + rho, ell);
      c = centre + rho * Eigen::Vector2d(-std::cos(phi), std::sin(phi));
      t = {std::sin(phi), std::cos(phi)};
    } else {
      const Eigen::Vector2d centre(2 * rho * i + rho, 0.0);
      c = centre + rho * Eigen::Vector2d(-std::cos(phi), -std::sin(phi));
      t = {std::sin(phi), -std::cos(phi)};
    }
  }
  const Eigen::Vector2d normal(-t.y(), t.x());
  return c + u * normal;
}

Vector3d FoldMap::operator()(const Vector3d& p) const {
  const Eigen::Vector2d a = fold(stage1_, p.x() - kThickness / 2, p.y());
  const double mid1 = stage1_.radius * (stage1_.runs - 1);
  // fold() maps the run-0 layer to -u, so the stage-1 layer axis runs from
  // -half_width to 2*rho*(runs-1) + half_width, centred at mid1.
  const Eigen::Vector2d b = fold(stage2_, a.x() - mid1, p.z());
  return {b.x(), a.y(), b.y()};
}

FoldedGrid folded_grid_embedding(int S, int runs_y, int runs_z) {
  if (S < 2) throw ParameterError("folded grid needs S >= 2");
  const double L = 10.0 * S;
  const FoldMap fold(L, L, runs_y, runs_z);
  if (!fold.feasible()) throw ParameterError("fold does not fit the slab");
  FoldedGrid out;
  out.embedding.complex = grid_graph(S);
  out.embedding.coords.resize(3, S * S);
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j)
      out.embedding.coords.col(i * S + j) = fold(Vector3d(5.0, 10.0 * i + 5.0, 10.0 * j + 5.0));
  out.embedding = centered(out.embedding);
  out.radius = enclosing_radius(out.embedding);
  out.runs_y = runs_y;
  out.runs_z = runs_z;
  return out;
}

FoldedGrid folded_grid_embedding(int S, int n) {
  if (n != 3) throw ParameterError("folded grid embedding is defined for n = 3 only");
  if (S < 2) throw ParameterError("folded grid needs S >= 2");
  const double L = 10.0 * S;
  std::vector<std::pair<double, std::pair<int, int>>> options;
  for (int ry = 1; ry <= S; ++ry)
    for (int rz = 1; rz <= S; ++rz) {
      const FoldMap fm(L, L, ry, rz);
      if (!fm.feasible()) continue;
      options.push_back({folded_grid_embedding(S, ry, rz).radius, {ry, rz}});
    }
  std::sort(options.begin(), options.end());
  for (const auto& [radius, runs] : options) {
    FoldedGrid g = folded_grid_embedding(S, runs.first, runs.second);
    if (combinatorial_thickness(g.embedding) >= 1.0) return g;
  }
  throw ConstructionError("no fold of the grid kept thickness 1");
}

// ------------------------------------------------------------ KB sphere

EmbeddedComplex kb_sphere_embedding(const SimplicialComplex& G, std::uint64_t seed, int retries,
                                    const KbOptions& opt) {
  if (G.dim() > 1) throw ParameterError("kb_sphere_embedding needs a graph");
  if (opt.segments < 3) throw ParameterError("kb routes need at least 3 segments");
  const int V = G.vertex_count();
  const int d = std::max(1, G.max_degree());
  const double R = opt.radius_multiplier * std::sqrt(static_cast<double>(d) * V);
  Rng rng(seed);

  std::vector<int> slot(V);
  std::iota(slot.begin(), slot.end(), 0);
  rng.shuffle(slot);
  std::vector<Vector3d> pts;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int v = 0; v < V; ++v) {
    const int i = slot[v];
    const double z = 1.0 - (2.0 * i + 1.0) / V;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    pts.push_back(R * Vector3d(r * std::cos(golden * i), r * std::sin(golden * i), z));
  }
  for (int a = 0; a < V; ++a)
    for (int b = a + 1; b < V; ++b)
      if ((pts[a] - pts[b]).norm() < 4.0) throw ConstructionError("sphere placement closer than 4");

  std::vector<Simplex> segs;  // fine edges over vertex ids into pts
  auto seg_dist = [&](const Simplex& s, const Simplex& t) {
    return segment_segment_distance(pts[s[0]], pts[s[1]], pts[t[0]], pts[t[1]]);
  };
  auto far_enough = [&](int first_new_vertex, std::size_t first_new_seg) {
    const int nv = static_cast<int>(pts.size());
    // vertices vs segments
    for (int v = 0; v < nv; ++v)
      for (std::size_t e = 0; e < segs.size(); ++e) {
        if (v < first_new_vertex && e < first_new_seg) continue;
        const Simplex& s = segs[e];
        if (s[0] == v || s[1] == v) continue;
        if (point_segment_distance(pts[v], pts[s[0]], pts[s[1]]) < 1.0) return false;
      }
    for (int v = first_new_vertex; v < nv; ++v)
      for (int w = 0; w < v; ++w)
        if ((pts[v] - pts[w]).norm() < 1.0) return false;
    for (std::size_t e = first_new_seg; e < segs.size(); ++e)
      for (std::size_t f = 0; f < e; ++f) {
        const Simplex& s = segs[e];
        const Simplex& t = segs[f];
        if (s[0] == t[0] || s[0] == t[1] || s[1] == t[0] || s[1] == t[1]) continue;
        if (seg_dist(s, t) < 1.0) return false;
      }
    return true;
  };
  auto near_endpoint = [&](const Vector3d& p) {
    const Vector3d radial = p.normalized();
    Vector3d off = rng.in_ball(3, 3.0);
    off -= off.dot(radial) * radial;
    return Vector3d(p - rng.uniform(2.0, 6.0) * radial + off);
  };

  const auto& edges = G.simplices(1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    bool placed = false;
    for (int attempt = 0; attempt < retries && !placed; ++attempt) {
      const int nv0 = static_cast<int>(pts.size());
      const std::size_t ns0 = segs.size();
      std::vector<int> chain{edges[e][0]};
      const int interior = opt.segments - 1;
      for (int w = 0; w < interior; ++w) {
        Vector3d p;
        if (w == 0) p = near_endpoint(pts[edges[e][0]]);
        else if (w == interior - 1) p = near_endpoint(pts[edges[e][1]]);
        else p = rng.in_ball(3, 0.8 * R);
        chain.push_back(static_cast<int>(pts.size()));
        pts.push_back(p);
      }
      chain.push_back(edges[e][1]);
      for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        segs.push_back({std::min(chain[i], chain[i + 1]), std::max(chain[i], chain[i + 1])});
      placed = far_enough(nv0, ns0);
      if (!placed) {
        pts.resize(nv0);
        segs.resize(ns0);
      }
    }
    if (!placed)
      throw ConstructionError("kb_sphere_embedding: edge " + std::to_string(e) + " exhausted retries");
  }
  EmbeddedComplex out;
  out.complex = SimplicialComplex::from_simplices(static_cast<int>(pts.size()), segs);
  out.coords.resize(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) out.coords.col(static_cast<Eigen::Index>(i)) = pts[i];
  return out;
}

// ------------------------------------------------------------ retraction

RetractionEmbedding retraction_embed_graph(const SimplicialComplex& G, int n) {
  if (n != 3) throw ParameterError("retraction_embed_graph is defined for n = 3 only");
  if (G.dim() > 1) throw ParameterError("retraction_embed_graph needs a graph");
  if (!G.connected()) throw StructureError("retraction_embed_graph needs a connected graph");
  const auto betti = betti_gf2(G);
  const int b1 = betti.size() > 1 ? betti[1] : 0;
  const int S = std::max(2, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(b1)))) + 1);
  // Comb spanning tree plus the first b1 remaining vertical edges.
  std::vector<Simplex> edges;
  for (int i = 0; i < S; ++i)
    for (int j = 0; j + 1 < S; ++j) edges.push_back({i * S + j, i * S + j + 1});
  for (int i = 0; i + 1 < S; ++i) edges.push_back({i * S, (i + 1) * S});
  int added = 0;
  for (int j = 1; j < S && added < b1; ++j)
    for (int i = 0; i + 1 < S && added < b1; ++i, ++added) edges.push_back({i * S + j, (i + 1) * S + j});
  const FoldedGrid grid = folded_grid_embedding(S, 3);
  RetractionEmbedding out;
  out.embedding.complex = SimplicialComplex::from_simplices(S * S, edges);
  out.embedding.coords = grid.embedding.coords;
  out.b1 = b1;
  out.grid_side = S;
  out.radius = enclosing_radius(out.embedding);
  return out;
}

}  // namespace thick
