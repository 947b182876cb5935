#include "thick/construct.hpp"

#include "thick/error.hpp"
#include "thick/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>

namespace thick {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kTight = 1e-11;
constexpr double kJitter = 1e-9;

struct Degenerate {};

// A fine vertex: the point of the open coarse face `face` cut out by `planes`.
struct Key {
  FaceRef face;
  std::vector<std::pair<int, long>> planes;  // (axis, integer value)
  auto operator<=>(const Key&) const = default;
};

struct Builder {
  const SimplicialComplex& X;
  const MatrixXd& coords;
  std::vector<std::vector<Key>> tops;  // fine maximal simplices as key lists

  Builder(const SimplicialComplex& X, const MatrixXd& coords) : X(X), coords(coords) {}

  void segment(FaceRef f) {
    const Simplex& s = X.simplex(f);
    const VectorXd a = coords.col(s[0]), b = coords.col(s[1]);
    std::vector<std::pair<double, Key>> cuts;
    for (Eigen::Index ax = 0; ax < a.size(); ++ax) {
      const double lo = std::min(a[ax], b[ax]), hi = std::max(a[ax], b[ax]);
      for (long c = static_cast<long>(std::floor(lo)) + 1; c < hi; ++c) {
        if (c <= lo) continue;
        const double t = (c - a[ax]) / (b[ax] - a[ax]);
        cuts.push_back({t, Key{f, {{static_cast<int>(ax), c}}}});
      }
    }
    std::sort(cuts.begin(), cuts.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    for (std::size_t i = 1; i < cuts.size(); ++i)
      if (cuts[i].first - cuts[i - 1].first < 1e-12) throw Degenerate{};
    std::vector<Key> chain{Key{{0, s[0]}, {}}};
    for (auto& c : cuts) chain.push_back(c.second);
    chain.push_back(Key{{0, s[1]}, {}});
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) tops.push_back({chain[i], chain[i + 1]});
  }

  void cells(FaceRef f) {
    const Simplex& sv = X.simplex(f);
    const int s = f.dim;
    const int n = static_cast<int>(coords.rows());
    const VectorXd v0 = coords.col(sv[0]);
    MatrixXd Dm(n, s);
    for (int i = 0; i < s; ++i) Dm.col(i) = coords.col(sv[i + 1]) - v0;
    MatrixXd P(n, s + 1);
    for (int i = 0; i <= s; ++i) P.col(i) = coords.col(sv[i]);
    const VectorXd lo = P.rowwise().minCoeff(), hi = P.rowwise().maxCoeff();
    std::vector<long> z0(n), z1(n);
    for (int a = 0; a < n; ++a) {
      z0[a] = static_cast<long>(std::floor(lo[a]));
      z1[a] = static_cast<long>(std::floor(hi[a]));
    }
    std::vector<long> z = z0;
    for (;;) {
      cell(f, sv, v0, Dm, z);
      int a = 0;
      while (a < n && ++z[a] > z1[a]) {
        z[a] = z0[a];
        ++a;
      }
      if (a == n) break;
    }
  }

  // Constraint c as g(mu) = row . mu + off >= 0, mu the s affine coordinates.
  void constraint(int c, int s, const VectorXd& v0, const MatrixXd& Dm, const std::vector<long>& z,
                  VectorXd& row, double& off) const {
    row = VectorXd::Zero(s);
    if (c == 0) {  // lambda_0 = 1 - sum mu
      row.setConstant(-1.0);
      off = 1.0;
    } else if (c <= s) {
      row[c - 1] = 1.0;
      off = 0.0;
    } else {
      const int a = (c - s - 1) / 2;
      const bool upper = (c - s - 1) % 2;
      if (!upper) {  // x_a - z_a >= 0
        row = Dm.row(a).transpose();
        off = v0[a] - z[a];
      } else {  // z_a + 1 - x_a >= 0
        row = -Dm.row(a).transpose();
        off = z[a] + 1 - v0[a];
      }
    }
  }

  void cell(FaceRef f, const Simplex& sv, const VectorXd& v0, const MatrixXd& Dm, const std::vector<long>& z) {
    const int s = f.dim;
    const int n = static_cast<int>(v0.size());
    const int m = s + 1 + 2 * n;
    std::vector<VectorXd> rows(m);
    std::vector<double> offs(m);
    for (int c = 0; c < m; ++c) constraint(c, s, v0, Dm, z, rows[c], offs[c]);

    struct Vtx {
      VectorXd mu;
      std::uint64_t tight = 0;
      Key key;
    };
    std::vector<Vtx> verts;
    std::vector<int> pick(m, 0);
    std::fill(pick.begin(), pick.begin() + s, 1);
    do {
      MatrixXd A(s, s);
      VectorXd b(s);
      int r = 0;
      for (int c = 0; c < m; ++c)
        if (pick[c]) {
          A.row(r) = rows[c].transpose();
          b[r] = -offs[c];
          ++r;
        }
      Eigen::FullPivLU<MatrixXd> lu(A);
      if (lu.rank() < s) continue;
      const VectorXd mu = lu.solve(b);
      std::uint64_t tight = 0;
      bool feasible = true;
      for (int c = 0; c < m && feasible; ++c) {
        const double g = rows[c].dot(mu) + offs[c];
        if (g < -kTight) feasible = false;
        else if (g <= kTight) tight |= std::uint64_t{1} << c;
      }
      if (!feasible) continue;
      if (std::popcount(tight) != s) throw Degenerate{};
      bool dup = false;
      for (const auto& w : verts) dup = dup || w.tight == tight;
      if (dup) continue;
      Vtx v{mu, tight, {}};
      // carrier face: barycentric coordinates that are not tight
      Simplex carrier;
      for (int i = 0; i <= s; ++i)
        if (!(tight & (std::uint64_t{1} << i))) carrier.push_back(sv[i]);
      v.key.face = {static_cast<int>(carrier.size()) - 1, *X.find(carrier)};
      for (int c = s + 1; c < m; ++c)
        if (tight & (std::uint64_t{1} << c)) {
          const int a = (c - s - 1) / 2;
          const bool upper = (c - s - 1) % 2;
          v.key.planes.push_back({a, upper ? z[a] + 1 : z[a]});
        }
      std::sort(v.key.planes.begin(), v.key.planes.end());
      verts.push_back(std::move(v));
    } while (std::prev_permutation(pick.begin(), pick.end()));

    if (static_cast<int>(verts.size()) < s + 1) return;
    std::vector<int> all(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) all[i] = static_cast<int>(i);
    auto affine_dim = [&](const std::vector<int>& ids) {
      if (ids.size() <= 1) return 0;
      MatrixXd M(s, static_cast<Eigen::Index>(ids.size()) - 1);
      for (std::size_t i = 1; i < ids.size(); ++i) M.col(i - 1) = verts[ids[i]].mu - verts[ids[0]].mu;
      Eigen::FullPivLU<MatrixXd> lu(M);
      lu.setThreshold(1e-9);
      return static_cast<int>(lu.rank());
    };
    if (affine_dim(all) < s) return;

    // Pulling triangulation from the least vertex in the global key order.
    std::function<std::vector<std::vector<int>>(const std::vector<int>&, int)> pull =
        [&](const std::vector<int>& ids, int d) -> std::vector<std::vector<int>> {
      if (d == 0) return {{ids[0]}};
      const int apex = *std::min_element(ids.begin(), ids.end(),
                                         [&](int a, int b) { return verts[a].key < verts[b].key; });
      std::vector<std::vector<int>> facets;
      for (int c = 0; c < m; ++c) {
        const std::uint64_t bit = std::uint64_t{1} << c;
        if (verts[apex].tight & bit) continue;
        std::vector<int> F;
        for (int id : ids)
          if (verts[id].tight & bit) F.push_back(id);
        if (static_cast<int>(F.size()) < d || affine_dim(F) != d - 1) continue;
        if (std::find(facets.begin(), facets.end(), F) == facets.end()) facets.push_back(F);
      }
      std::vector<std::vector<int>> out;
      for (const auto& F : facets)
        for (auto t : pull(F, d - 1)) {
          t.push_back(apex);
          out.push_back(std::move(t));
        }
      return out;
    };
    for (const auto& t : pull(all, s)) {
      std::vector<Key> keys;
      for (int id : t) keys.push_back(verts[id].key);
      tops.push_back(std::move(keys));
    }
  }
};

VectorXd key_point(const SimplicialComplex& X, const MatrixXd& coords, const Key& key) {
  const Simplex& s = X.simplex(key.face);
  const int t = key.face.dim;
  if (t == 0) return coords.col(s[0]);
  MatrixXd A(t + 1, t + 1);
  VectorXd b(t + 1);
  A.row(0).setOnes();
  b[0] = 1.0;
  for (int r = 0; r < t; ++r) {
    const auto [axis, value] = key.planes[r];
    for (int i = 0; i <= t; ++i) A(r + 1, i) = coords(axis, s[i]);
    b[r + 1] = static_cast<double>(value);
  }
  const VectorXd lambda = A.fullPivLu().solve(b);
  VectorXd p = VectorXd::Zero(coords.rows());
  for (int i = 0; i <= t; ++i) p += lambda[i] * coords.col(s[i]);
  // Snap the cut coordinates exactly onto their planes.
  for (const auto& [axis, value] : key.planes) p[axis] = static_cast<double>(value);
  return p;
}

}  // namespace

RefinedEmbedding refine_by_unit_lattice(const EmbeddedComplex& E, std::uint64_t seed) {
  E.validate();
  MatrixXd coords = E.coords;
  for (Eigen::Index i = 0; i < coords.size(); ++i) {
    double& c = coords.data()[i];
    if (std::abs(c - std::round(c)) < kJitter) c = std::round(c) + kJitter;
  }
  Rng rng(seed);
  const auto tops = E.complex.maximal();
  for (int attempt = 0; attempt < 8; ++attempt) {
    try {
      Builder b(E.complex, coords);
      for (const auto& f : tops) {
        if (f.dim == 0) b.tops.push_back({Key{f, {}}});
        else if (f.dim == 1) b.segment(f);
        else b.cells(f);
      }
      std::vector<Key> keys;
      for (const auto& t : b.tops) keys.insert(keys.end(), t.begin(), t.end());
      for (int v = 0; v < E.complex.vertex_count(); ++v) keys.push_back(Key{{0, v}, {}});
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      auto id_of = [&](const Key& k) {
        return static_cast<int>(std::lower_bound(keys.begin(), keys.end(), k) - keys.begin());
      };
      std::vector<Simplex> simplices;
      for (const auto& t : b.tops) {
        Simplex s;
        for (const auto& k : t) s.push_back(id_of(k));
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw Degenerate{};
        simplices.push_back(std::move(s));
      }
      RefinedEmbedding out;
      out.refinement.coarse = E.complex;
      out.refinement.fine = SimplicialComplex::from_simplices(static_cast<int>(keys.size()), simplices);
      out.embedding.complex = out.refinement.fine;
      out.embedding.coords.resize(coords.rows(), static_cast<Eigen::Index>(keys.size()));
      for (std::size_t i = 0; i < keys.size(); ++i)
        out.embedding.coords.col(static_cast<Eigen::Index>(i)) = key_point(E.complex, coords, keys[i]);
      const auto& fine = out.refinement.fine;
      out.refinement.parent.resize(fine.dim() + 1);
      for (int j = 0; j <= fine.dim(); ++j)
        for (const auto& s : fine.simplices(j)) {
          Simplex carrier;
          for (int v : s) {
            const Simplex& face = E.complex.simplex(keys[v].face);
            carrier.insert(carrier.end(), face.begin(), face.end());
          }
          std::sort(carrier.begin(), carrier.end());
          carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
          const auto id = E.complex.find(carrier);
          if (!id) throw ConstructionError("refinement produced a simplex spanning two coarse simplices");
          out.refinement.parent[j].push_back({static_cast<int>(carrier.size()) - 1, *id});
        }
      return out;
    } catch (const Degenerate&) {
      for (Eigen::Index i = 0; i < coords.size(); ++i) coords.data()[i] += rng.uniform(-kJitter, kJitter);
    }
  }
  throw ConstructionError("lattice refinement stayed degenerate after jitter");
}

}  // namespace thick
