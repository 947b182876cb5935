#include "thick/nerve.hpp"

#include "thick/error.hpp"
#include "thick/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace thick {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int BallCover::multiplicity_bound() const {
  if (separation <= 0) return std::max(1, size());
  const double ratio = (radius + separation / 2) / (separation / 2);
  return static_cast<int>(std::floor(std::pow(ratio, static_cast<double>(centers.rows())) + 1e-9));
}

namespace {

// Hash grid over centres with cell size equal to the query radius.
class CentreGrid {
 public:
  CentreGrid(int n, double cell) : n_(n), cell_(cell), neighbours_(static_cast<int>(std::lround(std::pow(3, n)))) {}

  void add(const VectorXd& x) {
    pts_.push_back(x);
    cells_[pack(key(x))].push_back(static_cast<int>(pts_.size()) - 1);
  }
  bool any_within(const VectorXd& x, double r) const {
    bool found = false;
    visit(x, [&](int i) {
      found = (pts_[i] - x).squaredNorm() < r * r;
      return !found;
    });
    return found;
  }
  // Calls f on centres in the 3^n neighbouring cells until f returns false.
  template <class F>
  void visit(const VectorXd& x, F&& f) const {
    base_.resize(n_);
    k_.resize(n_);
    for (int i = 0; i < n_; ++i) base_[i] = static_cast<long>(std::floor(x[i] / cell_));
    for (int m = 0; m < neighbours_; ++m) {
      int r = m;
      for (int i = 0; i < n_; ++i) {
        k_[i] = base_[i] + (r % 3) - 1;
        r /= 3;
      }
      auto it = cells_.find(pack(k_));
      if (it == cells_.end()) continue;
      for (int i : it->second)
        if (!f(i)) return;
    }
  }
  const std::vector<VectorXd>& points() const { return pts_; }

 private:
  std::vector<long> key(const VectorXd& x) const {
    std::vector<long> k(n_);
    for (int i = 0; i < n_; ++i) k[i] = static_cast<long>(std::floor(x[i] / cell_));
    return k;
  }
  // Colliding cells only cost extra distance checks.
  static std::uint64_t pack(const std::vector<long>& k) {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (long v : k) h = (h ^ static_cast<std::uint64_t>(v)) * 0x100000001b3ull;
    return h;
  }
  int n_;
  double cell_;
  int neighbours_;
  std::vector<VectorXd> pts_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
  mutable std::vector<long> base_, k_;
};

// Barycentric lattice points of a simplex with m subdivisions per edge.
void sample_simplex(const Points& P, int m, std::vector<VectorXd>& out) {
  const int d = static_cast<int>(P.cols());
  std::vector<int> c(d, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == d - 1) {
      c[i] = left;
      VectorXd x = VectorXd::Zero(P.rows());
      for (int a = 0; a < d; ++a) x += (static_cast<double>(c[a]) / m) * P.col(a);
      out.push_back(x);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, m);
}

}  // namespace

BallCover separated_net(const EmbeddedComplex& E, double T, std::uint64_t seed) {
  if (!(T > 0)) throw ParameterError("separated_net needs T > 0");
  E.validate();
  const int n = E.ambient_n();
  const double r = T / 2;
  const double spacing = T / 16;
  CentreGrid grid(n, r);
  auto try_add = [&](const VectorXd& x) {
    if (!grid.any_within(x, r)) grid.add(x);
  };

  std::vector<VectorXd> image;
  for (int j = 0; j <= E.complex.dim(); ++j)
    for (std::size_t id = 0; id < E.complex.count(j); ++id) {
      const Points P = E.simplex_points(FaceRef{j, static_cast<int>(id)});
      double diam = 0;
      for (Eigen::Index a = 0; a < P.cols(); ++a)
        for (Eigen::Index b = a + 1; b < P.cols(); ++b) diam = std::max(diam, (P.col(a) - P.col(b)).norm());
      const int m = std::max(1, static_cast<int>(std::ceil(diam / spacing)));
      if (j == 0) image.push_back(P.col(0));
      else sample_simplex(P, m, image);
    }
  for (const auto& x : image) try_add(x);

  // Exact coverage of edges: add the midpoint of any uncovered stretch.
  if (E.complex.dim() >= 1) {
    for (const auto& e : E.complex.simplices(1)) {
      const VectorXd p = E.coords.col(e[0]), q = E.coords.col(e[1]);
      const VectorXd d = q - p;
      const double len2 = d.squaredNorm();
      const VectorXd mid = 0.5 * (p + q);
      const double half = 0.5 * std::sqrt(len2);
      // Centres farther than r from the segment cannot cover it.
      std::vector<VectorXd> near;
      for (const auto& c : grid.points())
        if ((c - mid).norm() <= half + r) near.push_back(c);
      for (int guard = 0; guard < 100000; ++guard) {
        std::vector<std::pair<double, double>> cover;
        for (const auto& c : near) {
          const double t0 = (c - p).dot(d) / len2;
          const double h2 = (p + t0 * d - c).squaredNorm();
          if (h2 >= r * r) continue;
          const double w = std::sqrt((r * r - h2) / len2);
          cover.push_back({t0 - w, t0 + w});
        }
        std::sort(cover.begin(), cover.end());
        double reach = 0.0;
        double gap = -1;
        for (const auto& [a, b] : cover) {
          if (a > reach) {
            gap = 0.5 * (reach + std::min(a, 1.0));
            break;
          }
          reach = std::max(reach, b);
          if (reach >= 1.0) break;
        }
        if (gap < 0 && reach < 1.0) gap = 0.5 * (reach + 1.0);
        if (gap < 0) break;
        grid.add(p + gap * d);
        near.push_back(p + gap * d);
      }
    }
  }

  // Dense candidates in the neighbourhood: a randomly shifted lattice
  // of spacing T/16 clipped to distance r from the image, taken
  // nearest first. A coarse lattice leaves holes in the cover.
  Rng rng(seed);
  const double h = T / 16;
  VectorXd shift(n);
  for (int i = 0; i < n; ++i) shift[i] = rng.uniform(0.0, h);
  auto lattice_point = [&](const std::vector<long>& z) {
    VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = shift[i] + h * static_cast<double>(z[i]);
    return u;
  };
  struct LatticeHash {
    std::size_t operator()(const std::vector<long>& z) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ull;
      for (long v : z) h = (h ^ static_cast<std::uint64_t>(v)) * 0x100000001b3ull;
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_map<std::vector<long>, double, LatticeHash> lattice;
  // Calls f on every lattice index inside the box [lo, hi].
  auto walk = [&](const VectorXd& lo, const VectorXd& hi, auto&& f) {
    std::vector<long> a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = static_cast<long>(std::ceil((lo[i] - shift[i]) / h));
      b[i] = static_cast<long>(std::floor((hi[i] - shift[i]) / h));
      if (b[i] < a[i]) return;
    }
    std::vector<long> z = a;
    while (true) {
      f(z);
      int i = 0;
      while (i < n && z[i] == b[i]) z[i] = a[i], ++i;
      if (i == n) break;
      ++z[i];
    }
  };
  auto box_count = [&](const VectorXd& lo, const VectorXd& hi) {
    double c = 1;
    for (int i = 0; i < n; ++i) c *= std::max(0.0, (hi[i] - lo[i]) / h + 1);
    return c;
  };
  for (int j = 0; j <= E.complex.dim(); ++j)
    for (std::size_t id = 0; id < E.complex.count(j); ++id) {
      const Points P = E.simplex_points(FaceRef{j, static_cast<int>(id)});
      auto consider = [&](const std::vector<long>& z) {
        const double d = point_simplex_distance(P, lattice_point(z));
        if (d <= r) {
          auto [it, fresh] = lattice.emplace(z, d);
          if (!fresh) it->second = std::min(it->second, d);
        }
      };
      const VectorXd lo = P.rowwise().minCoeff().array() - r, hi = P.rowwise().maxCoeff().array() + r;
      // Long or slanted simplices have mostly empty bounding boxes; there
      // boxes of side 3r around points at most r/2 apart on the simplex are
      // enough, since every point of the simplex is within r/2 of one.
      double diam = 0;
      for (Eigen::Index a = 0; a < P.cols(); ++a)
        for (Eigen::Index b = a + 1; b < P.cols(); ++b) diam = std::max(diam, (P.col(a) - P.col(b)).norm());
      const int m = std::max(1, static_cast<int>(std::ceil(diam / (r / 2))));
      std::vector<VectorXd> centres;
      if (j == 0) centres.push_back(P.col(0));
      else sample_simplex(P, m, centres);
      const VectorXd reach = VectorXd::Constant(n, 1.5 * r);
      if (box_count(lo, hi) <= centres.size() * box_count(-reach, reach)) {
        walk(lo, hi, consider);
        continue;
      }
      std::unordered_set<std::vector<long>, LatticeHash> seen;
      for (const auto& c : centres)
        walk(c - reach, c + reach, [&](const std::vector<long>& z) {
          if (seen.insert(z).second) consider(z);
        });
    }
  std::vector<std::pair<double, const std::vector<long>*>> order;
  order.reserve(lattice.size());
  for (const auto& [z, d] : lattice) order.push_back({d, &z});
  // Hash order is arbitrary, so ties are broken by lattice index.
  std::sort(order.begin(), order.end(),
            [](const auto& x, const auto& y) { return x.first != y.first ? x.first < y.first : *x.second < *y.second; });
  for (const auto& entry : order) try_add(lattice_point(*entry.second));

  BallCover C;
  C.radius = r;
  C.separation = r;
  C.centers.resize(n, static_cast<Eigen::Index>(grid.points().size()));
  for (std::size_t i = 0; i < grid.points().size(); ++i) C.centers.col(static_cast<Eigen::Index>(i)) = grid.points()[i];
  return C;
}

SimplicialComplex nerve_complex(const BallCover& C, int max_dim) {
  const int m = C.size();
  const int cap = std::max(0, C.multiplicity_bound() - 1);
  const int top = max_dim < 0 ? cap : std::min(max_dim, cap);
  if (m == 0) return SimplicialComplex::from_simplices(0, {});
  const int n = static_cast<int>(C.centers.rows());
  // Open balls, with a margin so that tangencies are decided the same way
  // in every dimension.
  const double tol = 1e-9 * C.radius;
  CentreGrid grid(n, 2 * C.radius);
  for (int i = 0; i < m; ++i) grid.add(C.centers.col(i));
  std::vector<std::vector<int>> nbr(m);
  for (int i = 0; i < m; ++i) {
    grid.visit(C.centers.col(i), [&](int j) {
      if (j > i && 0.5 * (C.centers.col(i) - C.centers.col(j)).norm() < C.radius - tol) nbr[i].push_back(j);
      return true;
    });
    std::sort(nbr[i].begin(), nbr[i].end());
    nbr[i].erase(std::unique(nbr[i].begin(), nbr[i].end()), nbr[i].end());
  }
  std::vector<Simplex> out;
  Simplex cur;
  std::function<void(const std::vector<int>&)> grow = [&](const std::vector<int>& cand) {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) - 1 >= top) return;
    for (std::size_t a = 0; a < cand.size(); ++a) {
      const int v = cand[a];
      cur.push_back(v);
      Points P(n, static_cast<Eigen::Index>(cur.size()));
      for (std::size_t i = 0; i < cur.size(); ++i) P.col(i) = C.centers.col(cur[i]);
      if (cur.size() == 2 || min_enclosing_ball(P).radius < C.radius - tol) {
        std::vector<int> next;
        std::set_intersection(cand.begin() + a + 1, cand.end(), nbr[v].begin(), nbr[v].end(),
                              std::back_inserter(next));
        grow(next);
      }
      cur.pop_back();
    }
  };
  for (int i = 0; i < m; ++i) {
    cur = {i};
    grow(nbr[i]);
  }
  return SimplicialComplex::from_simplices(m, out);
}

NerveReport homotopy_invariant_report(const EmbeddedComplex& E, double T, std::uint64_t seed) {
  const int n = E.ambient_n();
  const BallCover C = separated_net(E, T, mix_seed(seed, 0));
  const SimplicialComplex N = nerve_complex(C, n);
  NerveReport R;
  R.ball_count = C.size();
  R.nerve_simplex_count = N.total();
  auto b = betti_gf2(N);
  b.resize(std::min<std::size_t>(b.size(), n));
  R.betti = b;
  R.volume = neighborhood_volume(E, T, 20000, mix_seed(seed, 1));
  int rank = 0;
  for (int x : R.betti) rank += x;
  R.ratio = rank / (R.volume.estimate * std::pow(T, -n));
  return R;
}

}  // namespace thick
