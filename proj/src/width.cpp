#include "thick/width.hpp"

#include "thick/error.hpp"
#include "thick/geometry.hpp"
#include "thick/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace thick {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

std::vector<int> doubled_centre(const Cube& c) {
  std::vector<int> x(c.base.size());
  for (std::size_t a = 0; a < x.size(); ++a) x[a] = 2 * c.base[a] + ((c.dirs >> a) & 1u);
  return x;
}

void check_dual(const DualGrid& Y, const Gf2Chain& a) {
  if (a.dim < 0 || a.dim > Y.D()) throw InputError("dual chain dimension out of range");
  for (int id : a.support)
    if (id < 0 || static_cast<std::size_t>(id) >= Y.count(a.dim)) throw InputError("dual chain id out of range");
}

}  // namespace

DualGrid::DualGrid(int D, int S) : D_(D), S_(S) {
  if (D < 1 || D > 4 || S < 1 || S > 32) throw ParameterError("dual grid needs 1 <= D <= 4 and 1 <= S <= 32");
  primal_ = CubicalComplex(D, D, S);
  dual_of_.resize(D + 1);
  primal_of_.resize(D + 1);
  for (int j = 0; j <= D; ++j) {
    const int n = static_cast<int>(primal_.count(j));
    std::vector<std::vector<int>> keys(n);
    for (int id = 0; id < n; ++id) keys[id] = doubled_centre(primal_.face(j, id));
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return keys[x] < keys[y]; });
    auto& back = primal_of_[D - j];
    back = order;
    dual_of_[j].assign(n, 0);
    for (int pos = 0; pos < n; ++pos) dual_of_[j][order[pos]] = pos;
  }
}

std::size_t DualGrid::count(int m) const { return primal_of_.at(m).size(); }

std::vector<int> DualGrid::centre2(int m, int id) const {
  return doubled_centre(primal_.face(D_ - m, primal_of_[m][id]));
}

Gf2Chain DualGrid::to_dual(const Gf2Chain& cochain) const {
  Gf2Chain out{D_ - cochain.dim, {}};
  for (int id : cochain.support) out.support.push_back(dual_of_[cochain.dim][id]);
  std::sort(out.support.begin(), out.support.end());
  return out;
}

Gf2Chain DualGrid::to_primal(const Gf2Chain& chain) const {
  Gf2Chain out{D_ - chain.dim, {}};
  for (int id : chain.support) out.support.push_back(primal_of_[chain.dim][id]);
  std::sort(out.support.begin(), out.support.end());
  return out;
}

Gf2Chain DualGrid::relative_boundary(const Gf2Chain& chain) const {
  const Gf2Chain alpha = to_primal(chain);
  if (alpha.dim >= D_) return {chain.dim - 1, {}};
  return to_dual({alpha.dim + 1, primal_.coboundary(alpha.dim).apply(alpha.support)});
}

// ------------------------------------------------------------ filling

namespace {

// Primal cochain beta with d(beta) = alpha, via the cone contraction of the
// lattice towards base point p (axes contracted in increasing order).
std::vector<int> cone_fill(const CubicalComplex& X, const std::vector<char>& alpha, int j,
                           const std::vector<int>& p) {
  const int D = X.ambient_dim();
  std::vector<int> beta;
  for (std::size_t g = 0; g < X.count(j - 1); ++g) {
    const Cube c = X.face(j - 1, static_cast<int>(g));
    int parity = 0;
    Cube t;
    t.base = c.base;
    for (int i = 0; i < D; ++i) {
      if (c.dirs & (1u << i)) break;
      t.dirs = c.dirs | (1u << i);
      for (int a = 0; a < i; ++a) t.base[a] = p[a];
      const int lo = std::min(p[i], c.base[i]), hi = std::max(p[i], c.base[i]);
      for (int s = lo; s < hi; ++s) {
        t.base[i] = s;
        parity ^= alpha[X.find(t)];
      }
      t.base[i] = c.base[i];
    }
    if (parity) beta.push_back(static_cast<int>(g));
  }
  return beta;
}

}  // namespace

FillResult ff_fill(const DualGrid& Y, const Gf2Chain& a, std::uint64_t seed) {
  check_dual(Y, a);
  const Gf2Chain alpha = Y.to_primal(a);
  const int j = alpha.dim;
  if (j < 1) throw InputError("filling needs a dual chain of dimension below D");
  const CubicalComplex& X = Y.primal();
  if (j < Y.D() && !X.coboundary(j).apply(alpha.support).empty())
    throw InputError("chain is not a relative cycle");
  FillResult out;
  out.b.dim = a.dim + 1;
  if (alpha.empty()) return out;

  std::vector<char> mark(X.count(j), 0);
  for (int id : alpha.support) mark[id] = 1;
  Rng rng(seed);
  std::vector<int> best;
  bool have = false;
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<int> p(Y.D());
    for (auto& x : p) x = static_cast<int>(rng.below(Y.S() + 1));
    std::vector<int> beta = cone_fill(X, mark, j, p);
    if (!have || beta.size() < best.size()) {
      best = std::move(beta);
      have = true;
    }
  }
  if (X.coboundary(j - 1).apply(best) != alpha.support)
    throw std::logic_error("filling failed the GF(2) boundary check");
  out.b = Y.to_dual({j - 1, best});
  out.constant = static_cast<double>(best.size()) / (static_cast<double>(Y.S()) * alpha.norm());
  return out;
}

std::size_t min_filling_bruteforce(const DualGrid& Y, const Gf2Chain& a) {
  const Gf2Chain alpha = Y.to_primal(a);
  const int j = alpha.dim;
  const CubicalComplex& X = Y.primal();
  if (X.count(j - 1) > 200) throw ParameterError("brute-force filling is limited to 200 faces");
  const std::vector<int> base = Y.to_primal(ff_fill(Y, a, 0).b).support;
  const auto kernel = gf2_kernel_basis(X.coboundary(j - 1));
  if (kernel.size() > 20) throw ParameterError("cocycle space too large to enumerate");
  std::size_t best = base.size();
  for (std::uint32_t mask = 1; mask < (1u << kernel.size()); ++mask) {
    std::vector<int> cur = base;
    for (std::size_t i = 0; i < kernel.size(); ++i)
      if (mask & (1u << i)) cur = gf2_add(cur, kernel[i]);
    best = std::min(best, cur.size());
  }
  return best;
}

Gf2Chain random_relative_cycle(const DualGrid& Y, int j, std::uint64_t seed) {
  if (j < 1 || j > Y.D()) throw ParameterError("random_relative_cycle needs 1 <= j <= D");
  const CubicalComplex& X = Y.primal();
  const int D = Y.D(), S = Y.S();
  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const int boxes = 1 + static_cast<int>(rng.below(2));
    std::vector<char> in(X.count(j - 1), 0);
    for (int b = 0; b < boxes; ++b) {
      std::vector<int> lo(D), hi(D);
      for (int a = 0; a < D; ++a) {
        int x = static_cast<int>(rng.below(S + 1)), y = static_cast<int>(rng.below(S + 1));
        if (x > y) std::swap(x, y);
        if (rng.below(2) == 0) x = 0;
        if (rng.below(2) == 0) y = S;
        lo[a] = x;
        hi[a] = y;
      }
      for (std::size_t id = 0; id < in.size(); ++id) {
        const Cube c = X.face(j - 1, static_cast<int>(id));
        bool inside = true;
        for (int a = 0; a < D && inside; ++a)
          inside = c.base[a] >= lo[a] && c.base[a] + static_cast<int>((c.dirs >> a) & 1u) <= hi[a];
        if (inside) in[id] ^= 1;
      }
    }
    std::vector<int> beta;
    for (std::size_t id = 0; id < in.size(); ++id)
      if (in[id]) beta.push_back(static_cast<int>(id));
    std::vector<int> alpha = X.coboundary(j - 1).apply(beta);
    if (!alpha.empty()) return Y.to_dual({j, alpha});
  }
  throw ConstructionError("could not draw a nonempty relative cycle");
}

double fill_constant_estimate(int D, int k, int S, int j, int samples, std::uint64_t seed) {
  if (!(1 <= j && j <= k && k <= D)) throw ParameterError("fill estimate needs 1 <= j <= k <= D");
  if (samples < 1) throw ParameterError("fill estimate needs at least one sample");
  const DualGrid Y(D, S);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Gf2Chain a = random_relative_cycle(Y, j, mix_seed(seed, 2 * s));
    const FillResult f = ff_fill(Y, a, mix_seed(seed, 2 * s + 1));
    worst = std::max(worst, static_cast<double>(f.b.norm()) / static_cast<double>(a.norm()));
  }
  return worst;
}

// ------------------------------------------------------------ width bounds

WidthBound width_lower_bound_graph(const SimplicialComplex& G, double h) {
  if (G.dim() != 1) throw ParameterError("graph mode needs a 1-dimensional complex");
  if (h < 0) throw ParameterError("expansion constant must be nonnegative");
  return {h * G.vertex_count() / 2.0, "expansion: h*N/2"};
}

namespace {

WidthBound filling_bound(int k, int N, const std::vector<int>& betti, const std::vector<double>& fills) {
  if (static_cast<int>(fills.size()) != k) throw ParameterError("need one filling constant per j = 1..k");
  if (betti.empty() || betti[0] != 1) throw StructureError("filling bound needs a connected complex");
  for (int j = 1; j <= k - 1; ++j)
    if (j < static_cast<int>(betti.size()) && betti[j] != 0)
      throw StructureError("filling bound needs H^j = 0 for 1 <= j <= k-1");
  double prod = 1.0;
  for (double f : fills) {
    if (!(f > 0)) throw ParameterError("filling constants must be positive");
    prod *= f;
  }
  return {N / prod, "filling: N/prod Fill(j), constant normalized to 1"};
}

}  // namespace

WidthBound width_lower_bound_filling(const CubicalComplex& X, const std::vector<double>& fills) {
  return filling_bound(X.dim(), X.vertex_count(), betti_gf2(X), fills);
}

WidthBound width_lower_bound_filling(const SimplicialComplex& X, const std::vector<double>& fills) {
  return filling_bound(X.dim(), X.vertex_count(), betti_gf2(X), fills);
}

namespace {

// Count of faces (given as vertex lists) whose image hull contains a grid point.
int max_fiber_count(const std::vector<std::vector<int>>& faces, const MatrixXd& F, int resolution) {
  if (resolution < 1) throw ParameterError("resolution must be positive");
  const int k = static_cast<int>(F.rows());
  if (k < 1) throw ParameterError("map needs a positive target dimension");
  if (faces.empty()) return 0;
  const VectorXd lo = F.rowwise().minCoeff(), hi = F.rowwise().maxCoeff();
  // An irrational offset keeps samples off the rational vertex values of
  // lattice maps, so only generic fibers are counted.
  const double offset = (std::sqrt(5.0) - 1) / 2;
  std::vector<VectorXd> axes(k);
  for (int r = 0; r < k; ++r) {
    axes[r].resize(resolution);
    for (int i = 0; i < resolution; ++i) axes[r][i] = lo[r] + (i + offset) * (hi[r] - lo[r]) / resolution;
  }
  // Affine data per face: for simplices with k+1 independent vertices a
  // barycentric test; otherwise a hull test through least squares.
  std::vector<int> counts;
  std::size_t total = 1;
  for (int r = 0; r < k; ++r) total *= resolution;
  counts.assign(total, 0);
  const double tol = 1e-9 * std::max(1.0, (hi - lo).cwiseAbs().maxCoeff());
  for (const auto& f : faces) {
    MatrixXd P(k, static_cast<Eigen::Index>(f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) P.col(i) = F.col(f[i]);
    const VectorXd flo = P.rowwise().minCoeff(), fhi = P.rowwise().maxCoeff();
    for (std::size_t g = 0; g < total; ++g) {
      VectorXd y(k);
      std::size_t rest = g;
      bool in_box = true;
      for (int r = 0; r < k; ++r) {
        y[r] = axes[r][rest % resolution];
        rest /= resolution;
        in_box = in_box && y[r] >= flo[r] - tol && y[r] <= fhi[r] + tol;
      }
      if (!in_box) continue;
      bool hit;
      if (k == 1) {
        hit = true;
      } else {
        // Minimum distance from y to the hull of P.
        hit = point_simplex_distance(P, y) <= tol;
      }
      counts[g] += hit;
    }
  }
  return *std::max_element(counts.begin(), counts.end());
}

}  // namespace

int pl_map_width_upper(const SimplicialComplex& X, const MatrixXd& F, int resolution) {
  if (F.cols() != X.vertex_count()) throw ParameterError("map needs one value per vertex");
  const int k = static_cast<int>(F.rows());
  if (k > X.dim()) return 0;
  return max_fiber_count(X.simplices(k), F, resolution);
}

int pl_map_width_upper(const CubicalComplex& X, const MatrixXd& F, int resolution) {
  if (F.cols() != X.vertex_count()) throw ParameterError("map needs one value per vertex");
  const int k = static_cast<int>(F.rows());
  if (k > X.dim()) return 0;
  std::vector<std::vector<int>> faces;
  for (std::size_t id = 0; id < X.count(k); ++id) {
    const Cube c = X.face(k, static_cast<int>(id));
    std::vector<int> verts;
    for (unsigned sub = 0; sub < (1u << X.ambient_dim()); ++sub) {
      if (sub & ~c.dirs) continue;
      Cube v{c.base, 0};
      for (int a = 0; a < X.ambient_dim(); ++a)
        if (sub & (1u << a)) ++v.base[a];
      verts.push_back(X.find(v));
    }
    faces.push_back(std::move(verts));
  }
  return max_fiber_count(faces, F, resolution);
}

MatrixXd lattice_coordinates(const CubicalComplex& X) {
  MatrixXd P(X.ambient_dim(), X.vertex_count());
  for (int v = 0; v < X.vertex_count(); ++v) {
    const Cube c = X.face(0, v);
    for (int a = 0; a < X.ambient_dim(); ++a) P(a, v) = c.base[a];
  }
  return P;
}

}  // namespace thick
