#include "thick/geometry.hpp"

#include "thick/error.hpp"
#include "thick/rng.hpp"
#include "thick/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <unordered_map>

namespace thick {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Points EmbeddedComplex::simplex_points(const Simplex& s) const {
  Points P(coords.rows(), static_cast<Eigen::Index>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i) P.col(i) = coords.col(s[i]);
  return P;
}

Points EmbeddedComplex::simplex_points(FaceRef f) const { return simplex_points(complex.simplex(f)); }

void EmbeddedComplex::validate() const {
  if (coords.cols() != complex.vertex_count())
    throw ParameterError("embedding has a coordinate count different from the vertex count");
  if (coords.rows() < 1) throw ParameterError("ambient dimension must be positive");
  if (!coords.allFinite()) throw ParameterError("embedding coordinates must be finite");
}

// ------------------------------------------------------------ distances

double point_segment_distance(const VectorXd& x, const VectorXd& p0, const VectorXd& p1) {
  const VectorXd d = p1 - p0;
  const double len2 = d.squaredNorm();
  double t = len2 > 0 ? (x - p0).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (p0 + t * d - x).norm();
}

double segment_segment_distance(const VectorXd& p0, const VectorXd& p1, const VectorXd& q0,
                                const VectorXd& q1) {
  const VectorXd d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
  const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
  const double eps = 1e-300;
  double s = 0, t = 0;
  if (a <= eps && e <= eps) return r.norm();
  if (a <= eps) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= eps) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 1e-14 * a * e ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0) {
        t = 0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1) {
        t = 1;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return (p0 + s * d1 - q0 - t * d2).norm();
}

namespace {

constexpr double kBaryTol = 1e-12;

std::vector<int> subset_indices(unsigned mask) {
  std::vector<int> idx;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1) idx.push_back(i);
  return idx;
}

// Minimizes |r0 + M z| over z; false when M has dependent columns.
bool least_squares(const MatrixXd& M, const VectorXd& r0, VectorXd& z) {
  if (M.cols() == 0) {
    z.resize(0);
    return true;
  }
  Eigen::ColPivHouseholderQR<MatrixXd> qr(M);
  qr.setThreshold(1e-12);
  if (qr.rank() < M.cols()) return false;
  z = qr.solve(-r0);
  return true;
}

bool barycentric_ok(const VectorXd& s) {
  double sum = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] < -kBaryTol) return false;
    sum += s[i];
  }
  return sum <= 1 + kBaryTol;
}

}  // namespace

VectorXd closest_point(const Points& A, const VectorXd& x) {
  const int m = static_cast<int>(A.cols());
  if (m == 1) return A.col(0);
  if (m == 2) {
    const VectorXd d = A.col(1) - A.col(0);
    const double len2 = d.squaredNorm();
    const double t = len2 > 0 ? std::clamp((x - A.col(0)).dot(d) / len2, 0.0, 1.0) : 0.0;
    return A.col(0) + t * d;
  }
  VectorXd best = A.col(0);
  double best_d = (best - x).squaredNorm();
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    const auto idx = subset_indices(mask);
    const VectorXd a0 = A.col(idx[0]);
    MatrixXd M(A.rows(), idx.size() - 1);
    for (std::size_t i = 1; i < idx.size(); ++i) M.col(i - 1) = A.col(idx[i]) - a0;
    VectorXd z;
    if (!least_squares(M, a0 - x, z) || !barycentric_ok(z)) continue;
    const VectorXd p = a0 + M * z;
    const double d = (p - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = p;
    }
  }
  return best;
}

double point_simplex_distance(const Points& A, const VectorXd& x) {
  if (A.cols() == 1) return (A.col(0) - x).norm();
  if (A.cols() == 2) return point_segment_distance(x, A.col(0), A.col(1));
  return (closest_point(A, x) - x).norm();
}

double simplex_distance(const Points& A, const Points& B) {
  if (A.rows() != B.rows()) throw ParameterError("simplex_distance: ambient dimension mismatch");
  if (A.cols() == 0 || B.cols() == 0) throw ParameterError("simplex_distance: empty point set");
  const int ma = static_cast<int>(A.cols()), mb = static_cast<int>(B.cols());
  if (ma == 1) return point_simplex_distance(B, A.col(0));
  if (mb == 1) return point_simplex_distance(A, B.col(0));
  if (ma == 2 && mb == 2) return segment_segment_distance(A.col(0), A.col(1), B.col(0), B.col(1));
  // The closest pair lies in the relative interiors of some face pair whose
  // affine hulls meet the nearest-point conditions; enumerate all face pairs.
  double best = kInf;
  for (unsigned fa = 1; fa < (1u << ma); ++fa) {
    const auto ia = subset_indices(fa);
    for (unsigned fb = 1; fb < (1u << mb); ++fb) {
      const auto ib = subset_indices(fb);
      const VectorXd a0 = A.col(ia[0]), b0 = B.col(ib[0]);
      const Eigen::Index ka = ia.size() - 1, kb = ib.size() - 1;
      MatrixXd M(A.rows(), ka + kb);
      for (Eigen::Index i = 0; i < ka; ++i) M.col(i) = A.col(ia[i + 1]) - a0;
      for (Eigen::Index i = 0; i < kb; ++i) M.col(ka + i) = b0 - B.col(ib[i + 1]);
      VectorXd z;
      if (!least_squares(M, a0 - b0, z)) continue;
      if (!barycentric_ok(z.head(ka)) || !barycentric_ok(z.tail(kb))) continue;
      best = std::min(best, (a0 - b0 + M * z).norm());
    }
  }
  return best;
}

// ------------------------------------------------------------ enclosing balls

Ball min_enclosing_ball(const Points& P) {
  const int m = static_cast<int>(P.cols());
  if (m == 0) throw ParameterError("enclosing ball of no points");
  Ball best{P.col(0), kInf};
  if (m == 1) return {P.col(0), 0.0};
  const int max_support = std::min<int>(m, static_cast<int>(P.rows()) + 1);
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    if (std::popcount(mask) > max_support) continue;
    const auto idx = subset_indices(mask);
    const VectorXd s0 = P.col(idx[0]);
    const Eigen::Index k = idx.size() - 1;
    VectorXd c = s0;
    if (k > 0) {
      MatrixXd M(P.rows(), k);
      VectorXd rhs(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        M.col(i) = P.col(idx[i + 1]) - s0;
        rhs[i] = 0.5 * M.col(i).squaredNorm();
      }
      const MatrixXd G = M.transpose() * M;
      Eigen::FullPivLU<MatrixXd> lu(G);
      lu.setThreshold(1e-13);
      if (lu.rank() < k) continue;
      c = s0 + M * lu.solve(rhs);
    }
    const double r = (c - s0).norm();
    if (r >= best.radius) continue;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) ok = (P.col(i) - c).norm() <= r * (1 + 1e-12) + 1e-12;
    if (ok) best = {c, r};
  }
  return best;
}

Minimax family_minimax(const std::vector<Points>& family, double tol) {
  if (family.empty()) throw ParameterError("minimax of an empty family");
  const Eigen::Index n = family.front().rows();
  VectorXd x = VectorXd::Zero(n);
  for (const auto& F : family) x += F.rowwise().mean();
  x /= static_cast<double>(family.size());

  auto eval = [&](const VectorXd& y, Points* proj) {
    double f = 0;
    for (std::size_t j = 0; j < family.size(); ++j) {
      const VectorXd p = closest_point(family[j], y);
      if (proj) proj->col(j) = p;
      f = std::max(f, (p - y).norm());
    }
    return f;
  };

  Points proj(n, static_cast<Eigen::Index>(family.size()));
  double f = eval(x, &proj);
  for (int iter = 0; iter < 5000; ++iter) {
    // Majorize: with projections frozen, the enclosing-ball centre is optimal
    // and can only lower the true objective.
    const Ball b = min_enclosing_ball(proj);
    VectorXd step = b.center - x;
    VectorXd best_x = b.center;
    double best_f = eval(b.center, nullptr);
    for (double scale = 2.0; scale <= 64.0; scale *= 2.0) {
      const VectorXd y = x + scale * step;
      const double fy = eval(y, nullptr);
      if (fy >= best_f) break;
      best_f = fy;
      best_x = y;
    }
    if (best_f >= f - tol * std::max(1.0, f)) {
      if (best_f < f) {
        x = best_x;
        f = best_f;
      }
      break;
    }
    x = best_x;
    f = eval(x, &proj);
  }
  return {f, x};
}

// ------------------------------------------------------------ thickness

namespace {

struct Box {
  VectorXd lo, hi;
};

bool share_vertex(const Simplex& a, const Simplex& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) return true;
    if (a[i] < b[j]) ++i;
    else ++j;
  }
  return false;
}

double box_gap(const Box& a, const Box& b) {
  double s = 0;
  for (Eigen::Index i = 0; i < a.lo.size(); ++i) {
    const double g = std::max({0.0, a.lo[i] - b.hi[i], b.lo[i] - a.hi[i]});
    s += g * g;
  }
  return std::sqrt(s);
}

struct SimplexSet {
  std::vector<FaceRef> refs;
  std::vector<Points> pts;
  std::vector<Box> boxes;
  std::vector<int> order;  // sorted by lo[0]
  double diameter = 0;
};

SimplexSet gather(const EmbeddedComplex& E) {
  SimplexSet S;
  for (int j = 0; j <= E.complex.dim(); ++j)
    for (std::size_t i = 0; i < E.complex.count(j); ++i) {
      FaceRef f{j, static_cast<int>(i)};
      S.refs.push_back(f);
      S.pts.push_back(E.simplex_points(f));
      S.boxes.push_back({S.pts.back().rowwise().minCoeff(), S.pts.back().rowwise().maxCoeff()});
    }
  S.order.resize(S.refs.size());
  std::iota(S.order.begin(), S.order.end(), 0);
  std::sort(S.order.begin(), S.order.end(), [&](int a, int b) {
    return S.boxes[a].lo[0] < S.boxes[b].lo[0] || (S.boxes[a].lo[0] == S.boxes[b].lo[0] && a < b);
  });
  if (E.coords.cols() > 0) S.diameter = (E.coords.rowwise().maxCoeff() - E.coords.rowwise().minCoeff()).norm();
  return S;
}

// Calls fn(i, j) for every pair (i < j in sweep order) whose boxes are within r.
template <class Fn>
void for_pairs_within(const SimplexSet& S, double r, Fn&& fn) {
  const auto& ord = S.order;
  for (std::size_t a = 0; a < ord.size(); ++a) {
    const Box& A = S.boxes[ord[a]];
    for (std::size_t b = a + 1; b < ord.size(); ++b) {
      const Box& B = S.boxes[ord[b]];
      if (B.lo[0] > A.hi[0] + r) break;
      if (box_gap(A, B) <= r) fn(ord[a], ord[b]);
    }
  }
}

double pair_distance(const SimplexSet& S, int a, int b) { return simplex_distance(S.pts[a], S.pts[b]); }

}  // namespace

double combinatorial_thickness_bruteforce(const EmbeddedComplex& E) {
  E.validate();
  const SimplexSet S = gather(E);
  double best = kInf;
  for (std::size_t a = 0; a < S.refs.size(); ++a)
    for (std::size_t b = a + 1; b < S.refs.size(); ++b) {
      if (share_vertex(E.complex.simplex(S.refs[a]), E.complex.simplex(S.refs[b]))) continue;
      best = std::min(best, pair_distance(S, static_cast<int>(a), static_cast<int>(b)));
    }
  return best;
}

double combinatorial_thickness(const EmbeddedComplex& E) {
  E.validate();
  const SimplexSet S = gather(E);
  if (S.refs.size() < 2) return kInf;
  double r = S.diameter / std::sqrt(static_cast<double>(S.refs.size()));
  if (!(r > 0)) r = 1.0;
  for (;;) {
    double best = kInf;
    for_pairs_within(S, r, [&](int a, int b) {
      if (share_vertex(E.complex.simplex(S.refs[a]), E.complex.simplex(S.refs[b]))) return;
      best = std::min(best, pair_distance(S, a, b));
    });
    // Unchecked pairs have box gaps above r, hence distances above r.
    if (best <= r || r > S.diameter) return best;
    r = std::isfinite(best) ? best : 2 * r;
  }
}

double strong_combinatorial_thickness(const EmbeddedComplex& E) {
  // Two T-neighbourhoods meet exactly when the simplices are closer than 2T.
  double best = combinatorial_thickness(E) / 2;
  const int k = E.complex.dim();
  if (k + 2 < 3) return best;
  const SimplexSet S = gather(E);
  const double cutoff = std::isfinite(best) ? 2 * best : 2 * S.diameter + 1;
  // Candidate families are cliques in the graph of pairs closer than 2*best,
  // since the minimax is at least half of every pairwise distance. Larger
  // families never bind tighter than a vertex-free subfamily, so only
  // minimal ones are enumerated.
  std::vector<std::vector<std::pair<int, double>>> nbr(S.refs.size());
  for_pairs_within(S, cutoff, [&](int a, int b) {
    const double d = pair_distance(S, a, b);
    if (d < cutoff) {
      nbr[std::min(a, b)].push_back({std::max(a, b), d});
    }
  });
  for (auto& l : nbr) std::sort(l.begin(), l.end());
  auto dist_of = [&](int a, int b) {
    const auto& l = nbr[std::min(a, b)];
    auto it = std::lower_bound(l.begin(), l.end(), std::make_pair(std::max(a, b), -kInf));
    return (it != l.end() && it->first == std::max(a, b)) ? it->second : kInf;
  };
  std::vector<int> family;
  std::function<void(int, double)> grow = [&](int J, double maxpair) {
    if (static_cast<int>(family.size()) == J) {
      std::vector<FaceRef> refs;
      for (int id : family) refs.push_back(S.refs[id]);
      if (maxpair / 2 >= best || !minimal_vertex_free_family(E.complex, refs)) return;
      std::vector<Points> fam;
      for (int id : family) fam.push_back(S.pts[id]);
      best = std::min(best, family_minimax(fam, 1e-10).value);
      return;
    }
    const int last = family.back();
    for (const auto& [cand, d] : nbr[last]) {
      double m = std::max(maxpair, d);
      // Members of a minimal family pairwise share a vertex.
      bool ok = m / 2 < best && share_vertex(E.complex.simplex(S.refs[last]), E.complex.simplex(S.refs[cand]));
      for (std::size_t i = 0; i + 1 < family.size() && ok; ++i) {
        ok = share_vertex(E.complex.simplex(S.refs[family[i]]), E.complex.simplex(S.refs[cand]));
        const double di = dist_of(family[i], cand);
        ok = ok && di < cutoff;
        m = std::max(m, di);
        ok = ok && m / 2 < best;
      }
      if (!ok) continue;
      family.push_back(cand);
      grow(J, m);
      family.pop_back();
    }
  };
  for (int J = 3; J <= k + 2; ++J)
    for (std::size_t start = 0; start < S.refs.size(); ++start) {
      family = {static_cast<int>(start)};
      grow(J, 0.0);
    }
  return best;
}

// ------------------------------------------------------------ crossings

Crossings hyperplane_crossings(const EmbeddedComplex& E, const Hyperplane& H) {
  E.validate();
  if (H.normal.size() != E.ambient_n()) throw ParameterError("hyperplane dimension mismatch");
  if (std::abs(H.normal.norm() - 1.0) > 1e-12) throw ParameterError("hyperplane normal must be unit length");
  const int top = E.complex.dim();
  const VectorXd side = E.coords.transpose() * H.normal - VectorXd::Constant(E.coords.cols(), H.offset);
  Crossings out;
  std::vector<char> used(E.complex.vertex_count(), 0);
  const auto& list = E.complex.simplices(top);
  for (std::size_t id = 0; id < list.size(); ++id) {
    double lo = kInf, hi = -kInf;
    for (int v : list[id]) {
      lo = std::min(lo, side[v]);
      hi = std::max(hi, side[v]);
    }
    if (lo > 0 || hi < 0) continue;
    out.ids.push_back(static_cast<int>(id));
    bool free = true;
    for (int v : list[id]) free = free && !used[v];
    if (free) {
      for (int v : list[id]) used[v] = 1;
      out.independent_ids.push_back(static_cast<int>(id));
    }
  }
  out.total = static_cast<int>(out.ids.size());
  out.independent = static_cast<int>(out.independent_ids.size());
  return out;
}

std::vector<VectorXd> axis_directions(int n) {
  std::vector<VectorXd> dirs;
  for (int i = 0; i < n; ++i) dirs.push_back(VectorXd::Unit(n, i));
  return dirs;
}

SweepResult bisecting_sweep(const EmbeddedComplex& E, const std::vector<VectorXd>& directions) {
  if (directions.empty()) throw ParameterError("bisecting_sweep needs at least one direction");
  E.validate();
  const Eigen::Index V = E.coords.cols();
  if (V == 0) throw ParameterError("bisecting_sweep on an empty complex");
  SweepResult best;
  best.best = -1;
  for (const auto& d : directions) {
    const VectorXd u = d.normalized();
    std::vector<double> proj(V);
    for (Eigen::Index v = 0; v < V; ++v) proj[v] = u.dot(E.coords.col(v));
    std::sort(proj.begin(), proj.end());
    const Hyperplane H{u, proj[(V + 1) / 2 - 1]};
    const Crossings c = hyperplane_crossings(E, H);
    if (c.independent > best.best) {
      best.best = c.independent;
      best.best_total = c.total;
      best.witness = H;
    }
  }
  return best;
}

// ------------------------------------------------------------ volume

double unit_ball_volume(int n) { return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0); }

namespace {

struct CellHash {
  std::size_t operator()(const std::vector<long>& c) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (long x : c) h = (h ^ static_cast<std::uint64_t>(x)) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

VolumeEstimate neighborhood_volume(const EmbeddedComplex& E, double T, std::size_t samples,
                                   std::uint64_t seed) {
  if (!(T > 0)) throw ParameterError("neighborhood_volume needs T > 0");
  if (samples < 1000) throw ParameterError("neighborhood_volume needs at least 1000 samples");
  E.validate();
  const int n = E.ambient_n();
  const auto tops = E.complex.maximal();
  std::vector<Points> pts;
  for (const auto& f : tops) pts.push_back(E.simplex_points(f));
  const VectorXd lo = E.coords.rowwise().minCoeff().array() - T;
  const VectorXd hi = E.coords.rowwise().maxCoeff().array() + T;
  const double box_volume = (hi - lo).prod();

  const double cell = 2 * T;
  auto cell_of = [&](const VectorXd& x) {
    std::vector<long> c(n);
    for (int i = 0; i < n; ++i) c[i] = static_cast<long>(std::floor((x[i] - lo[i]) / cell));
    return c;
  };
  std::unordered_map<std::vector<long>, std::vector<int>, CellHash> grid;
  std::size_t cell_budget = 4'000'000;
  bool use_grid = true;
  for (std::size_t s = 0; s < pts.size() && use_grid; ++s) {
    const VectorXd a = pts[s].rowwise().minCoeff().array() - T;
    const VectorXd b = pts[s].rowwise().maxCoeff().array() + T;
    const auto ca = cell_of(a), cb = cell_of(b);
    std::size_t cells = 1;
    for (int i = 0; i < n; ++i) cells *= static_cast<std::size_t>(cb[i] - ca[i] + 1);
    if (cells > cell_budget) {
      use_grid = false;
      break;
    }
    cell_budget -= cells;
    std::vector<long> c = ca;
    for (;;) {
      grid[c].push_back(static_cast<int>(s));
      int i = 0;
      while (i < n && ++c[i] > cb[i]) {
        c[i] = ca[i];
        ++i;
      }
      if (i == n) break;
    }
  }
  std::vector<int> everything(pts.size());
  std::iota(everything.begin(), everything.end(), 0);

  Rng rng(seed);
  std::size_t hits = 0;
  VectorXd x(n);
  for (std::size_t t = 0; t < samples; ++t) {
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(lo[i], hi[i]);
    const std::vector<int>* cand = &everything;
    if (use_grid) {
      auto it = grid.find(cell_of(x));
      if (it == grid.end()) continue;
      cand = &it->second;
    }
    for (int s : *cand)
      if (point_simplex_distance(pts[s], x) <= T) {
        ++hits;
        break;
      }
  }
  const auto [plo, phi] = wilson95(hits, samples);
  return {box_volume * hits / static_cast<double>(samples), box_volume * plo, box_volume * phi};
}

EmbeddedComplex scaled(const EmbeddedComplex& E, double lambda) {
  EmbeddedComplex out = E;
  out.coords *= lambda;
  return out;
}

}  // namespace thick
