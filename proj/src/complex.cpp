#include "thick/complex.hpp"

#include "thick/error.hpp"
#include "thick/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <iterator>
#include <numeric>

namespace thick {

namespace {

void add_faces(const Simplex& s, std::vector<std::vector<Simplex>>& out) {
  const int n = static_cast<int>(s.size());
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Simplex f;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) f.push_back(s[i]);
    out[f.size() - 1].push_back(std::move(f));
  }
}

std::uint64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

SimplicialComplex SimplicialComplex::from_simplices(int vertex_count,
                                                    const std::vector<Simplex>& simplices) {
  int top = 0;
  for (const auto& s : simplices) {
    if (s.empty()) throw ParameterError("empty simplex");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] < 0 || s[i] >= vertex_count) throw ParameterError("vertex id out of range");
      if (i && s[i] <= s[i - 1]) throw ParameterError("simplex vertices must be strictly increasing");
    }
    top = std::max(top, static_cast<int>(s.size()) - 1);
  }
  SimplicialComplex X;
  X.vertex_count_ = vertex_count;
  X.by_dim_.assign(top + 1, {});
  for (int v = 0; v < vertex_count; ++v) X.by_dim_[0].push_back({v});
  for (const auto& s : simplices) {
    if (s.size() > 12) throw ParameterError("simplex dimension above 11 is not supported");
    add_faces(s, X.by_dim_);
  }
  for (auto& list : X.by_dim_) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  while (X.by_dim_.size() > 1 && X.by_dim_.back().empty()) X.by_dim_.pop_back();
  return X;
}

std::size_t SimplicialComplex::count(int j) const {
  return j >= 0 && j <= dim() ? by_dim_[j].size() : 0;
}

std::size_t SimplicialComplex::total() const {
  std::size_t n = 0;
  for (const auto& l : by_dim_) n += l.size();
  return n;
}

const std::vector<Simplex>& SimplicialComplex::simplices(int j) const {
  static const std::vector<Simplex> none;
  return j >= 0 && j <= dim() ? by_dim_[j] : none;
}

std::optional<int> SimplicialComplex::find(const Simplex& s) const {
  const int j = static_cast<int>(s.size()) - 1;
  if (j < 0 || j > dim()) return std::nullopt;
  const auto& l = by_dim_[j];
  auto it = std::lower_bound(l.begin(), l.end(), s);
  if (it == l.end() || *it != s) return std::nullopt;
  return static_cast<int>(it - l.begin());
}

int SimplicialComplex::local_degree() const {
  std::vector<int> deg(vertex_count_, 0);
  for (const auto& l : by_dim_)
    for (const auto& s : l)
      for (int v : s) ++deg[v];
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

std::vector<FaceRef> SimplicialComplex::maximal() const {
  std::vector<std::vector<char>> covered(by_dim_.size());
  for (std::size_t j = 0; j < by_dim_.size(); ++j) covered[j].assign(by_dim_[j].size(), 0);
  for (int j = dim(); j >= 1; --j) {
    for (const auto& s : by_dim_[j]) {
      for (int drop = 0; drop <= j; ++drop) {
        Simplex f;
        for (int i = 0; i <= j; ++i)
          if (i != drop) f.push_back(s[i]);
        covered[j - 1][*find(f)] = 1;
      }
    }
  }
  std::vector<FaceRef> out;
  for (int j = 0; j <= dim(); ++j)
    for (std::size_t i = 0; i < by_dim_[j].size(); ++i)
      if (!covered[j][i]) out.push_back({j, static_cast<int>(i)});
  return out;
}

Gf2Matrix SimplicialComplex::boundary(int j) const {
  Gf2Matrix m(static_cast<int>(count(j - 1)), static_cast<int>(count(j)));
  if (j <= 0) return m;
  for (std::size_t c = 0; c < count(j); ++c) {
    const Simplex& s = by_dim_[j][c];
    std::vector<int> rows;
    for (int drop = 0; drop <= j; ++drop) {
      Simplex f;
      for (int i = 0; i <= j; ++i)
        if (i != drop) f.push_back(s[i]);
      rows.push_back(*find(f));
    }
    m.set_column(static_cast<int>(c), std::move(rows));
  }
  return m;
}

bool SimplicialComplex::valid() const {
  if (by_dim_.empty()) return vertex_count_ == 0;
  if (static_cast<int>(by_dim_[0].size()) != vertex_count_) return false;
  for (int j = 0; j <= dim(); ++j) {
    const auto& l = by_dim_[j];
    for (std::size_t i = 0; i < l.size(); ++i) {
      const Simplex& s = l[i];
      if (static_cast<int>(s.size()) != j + 1) return false;
      if (i && !(l[i - 1] < s)) return false;
      for (std::size_t a = 0; a < s.size(); ++a) {
        if (s[a] < 0 || s[a] >= vertex_count_) return false;
        if (a && s[a] <= s[a - 1]) return false;
      }
      if (j == 0) continue;
      for (int drop = 0; drop <= j; ++drop) {
        Simplex f;
        for (int a = 0; a <= j; ++a)
          if (a != drop) f.push_back(s[a]);
        if (!find(f)) return false;
      }
    }
  }
  return true;
}

std::vector<std::vector<int>> SimplicialComplex::adjacency() const {
  std::vector<std::vector<int>> adj(vertex_count_);
  for (const auto& e : simplices(1)) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  return adj;
}

bool SimplicialComplex::connected() const {
  if (vertex_count_ == 0) return true;
  const auto adj = adjacency();
  std::vector<char> seen(vertex_count_, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
  }
  return reached == vertex_count_;
}

int SimplicialComplex::max_degree() const {
  int best = 0;
  for (const auto& a : adjacency()) best = std::max(best, static_cast<int>(a.size()));
  return best;
}

bool minimal_vertex_free_family(const SimplicialComplex& X, const std::vector<FaceRef>& family) {
  auto common_without = [&](std::size_t skip) {
    std::vector<int> common;
    bool first = true;
    for (std::size_t i = 0; i < family.size(); ++i) {
      if (i == skip) continue;
      const auto& s = X.simplex(family[i]);
      if (first) {
        common = s;
        first = false;
        continue;
      }
      std::vector<int> next;
      std::set_intersection(common.begin(), common.end(), s.begin(), s.end(), std::back_inserter(next));
      common.swap(next);
    }
    return !common.empty();
  };
  if (family.size() < 2 || common_without(family.size())) return false;
  for (std::size_t i = 0; i < family.size(); ++i)
    if (!common_without(i)) return false;
  return true;
}

// ---------------------------------------------------------------- cubical

int Cube::dim() const { return std::popcount(dirs); }

CubicalComplex::CubicalComplex(int k, int D, int S) : k_(k), D_(D), S_(S) {
  if (D < 1 || D > 16 || k < 0 || k > D || S < 1)
    throw ParameterError("grid skeleton needs 0 <= k <= D, 1 <= D <= 16, S >= 1");
  masks_.assign(k + 1, {});
  offsets_.assign(k + 1, {});
  counts_.assign(k + 1, 0);
  for (unsigned m = 0; m < (1u << D); ++m) {
    const int j = std::popcount(m);
    if (j > k) continue;
    std::size_t block = 1;
    for (int a = 0; a < D; ++a) block *= (m & (1u << a)) ? S : S + 1;
    masks_[j].push_back(m);
    offsets_[j].push_back(counts_[j]);
    counts_[j] += block;
  }
}

int CubicalComplex::vertex_count() const { return static_cast<int>(counts_[0]); }

std::size_t CubicalComplex::count(int j) const {
  return j >= 0 && j <= k_ ? counts_[j] : 0;
}

std::uint64_t CubicalComplex::lattice_count(int j, int D, int S) {
  std::uint64_t r = binom(D, j);
  for (int i = 0; i < j; ++i) r *= S;
  for (int i = j; i < D; ++i) r *= S + 1;
  return r;
}

std::size_t CubicalComplex::mask_block(unsigned dirs) const {
  const auto& ms = masks_[std::popcount(dirs)];
  return static_cast<std::size_t>(std::lower_bound(ms.begin(), ms.end(), dirs) - ms.begin());
}

std::size_t CubicalComplex::local_index(const std::vector<int>& base, unsigned dirs) const {
  std::size_t idx = 0;
  for (int a = 0; a < D_; ++a) {
    const int extent = (dirs & (1u << a)) ? S_ : S_ + 1;
    idx = idx * extent + base[a];
  }
  return idx;
}

Cube CubicalComplex::face(int j, int id) const {
  const auto& off = offsets_[j];
  const std::size_t b = static_cast<std::size_t>(
      std::upper_bound(off.begin(), off.end(), static_cast<std::size_t>(id)) - off.begin() - 1);
  Cube c;
  c.dirs = masks_[j][b];
  c.base.assign(D_, 0);
  std::size_t rest = id - off[b];
  for (int a = D_ - 1; a >= 0; --a) {
    const int extent = (c.dirs & (1u << a)) ? S_ : S_ + 1;
    c.base[a] = static_cast<int>(rest % extent);
    rest /= extent;
  }
  return c;
}

int CubicalComplex::find(const Cube& c) const {
  const int j = c.dim();
  if (j > k_ || static_cast<int>(c.base.size()) != D_) return -1;
  for (int a = 0; a < D_; ++a) {
    const int hi = (c.dirs & (1u << a)) ? S_ - 1 : S_;
    if (c.base[a] < 0 || c.base[a] > hi) return -1;
  }
  if (c.dirs >> D_) return -1;
  return static_cast<int>(offsets_[j][mask_block(c.dirs)] + local_index(c.base, c.dirs));
}

int CubicalComplex::local_degree() const {
  std::vector<int> deg(vertex_count(), 0);
  for (int j = 0; j <= k_; ++j) {
    for (std::size_t id = 0; id < counts_[j]; ++id) {
      const Cube c = face(j, static_cast<int>(id));
      for (unsigned sub = 0; sub < (1u << D_); ++sub) {
        if (sub & ~c.dirs) continue;
        Cube v{c.base, 0};
        for (int a = 0; a < D_; ++a)
          if (sub & (1u << a)) ++v.base[a];
        ++deg[find(v)];
      }
    }
  }
  return *std::max_element(deg.begin(), deg.end());
}

Gf2Matrix CubicalComplex::boundary(int j) const {
  Gf2Matrix m(static_cast<int>(count(j - 1)), static_cast<int>(count(j)));
  if (j <= 0 || j > k_) return m;
  for (std::size_t id = 0; id < counts_[j]; ++id) {
    const Cube c = face(j, static_cast<int>(id));
    std::vector<int> rows;
    for (int a = 0; a < D_; ++a) {
      if (!(c.dirs & (1u << a))) continue;
      Cube lo{c.base, c.dirs & ~(1u << a)};
      Cube hi = lo;
      ++hi.base[a];
      rows.push_back(find(lo));
      rows.push_back(find(hi));
    }
    m.set_column(static_cast<int>(id), std::move(rows));
  }
  return m;
}

Gf2Matrix CubicalComplex::coboundary(int j) const { return boundary(j + 1).transpose(); }

CubicalComplex grid_skeleton(int k, int D, int S) { return CubicalComplex(k, D, S); }

std::pair<SimplicialComplex, Refinement> triangulate_cubical(const CubicalComplex& X) {
  const int D = X.ambient_dim();
  std::vector<Simplex> simplices;
  for (int j = 1; j <= X.dim(); ++j) {
    for (std::size_t id = 0; id < X.count(j); ++id) {
      const Cube c = X.face(j, static_cast<int>(id));
      std::vector<int> axes;
      for (int a = 0; a < D; ++a)
        if (c.dirs & (1u << a)) axes.push_back(a);
      // Kuhn: one simplex per order in which the axes are traversed.
      do {
        Cube p{c.base, 0};
        Simplex s{X.find(p)};
        for (int a : axes) {
          ++p.base[a];
          s.push_back(X.find(p));
        }
        std::sort(s.begin(), s.end());
        simplices.push_back(std::move(s));
      } while (std::next_permutation(axes.begin(), axes.end()));
    }
  }
  Refinement ref;
  ref.fine = SimplicialComplex::from_simplices(X.vertex_count(), simplices);
  ref.parent.resize(ref.fine.dim() + 1);
  for (int j = 0; j <= ref.fine.dim(); ++j) {
    for (const auto& s : ref.fine.simplices(j)) {
      Cube lo = X.face(0, s.front());
      std::vector<int> hi = lo.base;
      for (int v : s) {
        const Cube p = X.face(0, v);
        for (int a = 0; a < D; ++a) {
          lo.base[a] = std::min(lo.base[a], p.base[a]);
          hi[a] = std::max(hi[a], p.base[a]);
        }
      }
      Cube carrier{lo.base, 0};
      for (int a = 0; a < D; ++a)
        if (hi[a] > lo.base[a]) carrier.dirs |= 1u << a;
      ref.parent[j].push_back({carrier.dim(), X.find(carrier)});
    }
  }
  SimplicialComplex fine = ref.fine;
  return {std::move(fine), std::move(ref)};
}

SimplicialComplex simplex_skeleton(int k, int N) {
  if (k < 0 || N < 0 || k > N) throw ParameterError("simplex skeleton needs 0 <= k <= N");
  std::vector<Simplex> tops;
  std::vector<int> pick(N + 1, 0);
  std::fill(pick.begin(), pick.begin() + k + 1, 1);
  do {
    Simplex s;
    for (int v = 0; v <= N; ++v)
      if (pick[v]) s.push_back(v);
    tops.push_back(std::move(s));
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return SimplicialComplex::from_simplices(N + 1, tops);
}

SimplicialComplex random_bipartite_graph(int N, int d, std::uint64_t seed) {
  if (N < 2 || d < 1) throw ParameterError("random bipartite graph needs N >= 2, d >= 1");
  Rng rng(seed);
  std::vector<Simplex> edges;
  std::vector<int> perm(N);
  for (int m = 0; m < d; ++m) {
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    for (int i = 0; i < N; ++i) edges.push_back({i, N + perm[i]});
  }
  return SimplicialComplex::from_simplices(2 * N, edges);
}

SimplicialComplex cycle_graph(int n) {
  if (n < 3) throw ParameterError("cycle needs at least 3 vertices");
  std::vector<Simplex> edges;
  for (int i = 0; i < n; ++i) {
    int a = i, b = (i + 1) % n;
    edges.push_back({std::min(a, b), std::max(a, b)});
  }
  return SimplicialComplex::from_simplices(n, edges);
}

SimplicialComplex path_graph(int n) {
  if (n < 1) throw ParameterError("path needs at least 1 vertex");
  std::vector<Simplex> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return SimplicialComplex::from_simplices(n, edges);
}

SimplicialComplex grid_graph(int S) {
  if (S < 1) throw ParameterError("grid graph needs S >= 1");
  std::vector<Simplex> edges;
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < S; ++j) {
      if (j + 1 < S) edges.push_back({i * S + j, i * S + j + 1});
      if (i + 1 < S) edges.push_back({i * S + j, (i + 1) * S + j});
    }
  return SimplicialComplex::from_simplices(S * S, edges);
}

double expansion_constant(const SimplicialComplex& G, ExpansionMode mode) {
  if (G.dim() > 1) throw ParameterError("expansion constant needs a graph");
  const int V = G.vertex_count();
  if (V < 2) throw ParameterError("expansion constant needs at least 2 vertices");
  if (!G.connected()) throw StructureError("graph is disconnected; expansion constant would be 0");
  const auto adj = G.adjacency();
  if (mode == ExpansionMode::spectral) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(V, V);
    for (int v = 0; v < V; ++v) {
      L(v, v) = static_cast<double>(adj[v].size());
      for (int w : adj[v]) L(v, w) -= 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues()[1] / 2.0);
  }
  if (V > 24) throw ParameterError("exact expansion is limited to 24 vertices");
  std::vector<std::uint32_t> nbr(V, 0);
  for (int v = 0; v < V; ++v)
    for (int w : adj[v]) nbr[v] |= 1u << w;
  // Gray-code walk over subsets, updating the cut one vertex at a time.
  std::uint32_t set = 0;
  long cut = 0;
  int size = 0;
  long best_cut = 1;
  int best_size = 0;
  const std::uint64_t total = std::uint64_t{1} << V;
  for (std::uint64_t i = 1; i < total; ++i) {
    const int v = std::countr_zero(i);
    const std::uint32_t bit = 1u << v;
    const long inside = std::popcount(nbr[v] & set);
    const long deg = static_cast<long>(adj[v].size());
    if (set & bit) {
      set &= ~bit;
      cut -= deg - 2 * inside;
      --size;
    } else {
      cut += deg - 2 * inside;
      set |= bit;
      ++size;
    }
    if (2 * size <= V && (best_size == 0 || cut * best_size < best_cut * size)) {
      best_cut = cut;
      best_size = size;
    }
  }
  return static_cast<double>(best_cut) / best_size;
}

namespace {

template <class Complex>
std::vector<int> betti_from(const Complex& X) {
  const int top = X.dim();
  std::vector<int> rank(top + 2, 0);
  for (int j = 1; j <= top; ++j) rank[j] = gf2_rank(X.boundary(j));
  std::vector<int> b(top + 1);
  for (int j = 0; j <= top; ++j)
    b[j] = static_cast<int>(X.count(j)) - rank[j] - rank[j + 1];
  return b;
}

}  // namespace

std::vector<int> betti_gf2(const SimplicialComplex& X) { return betti_from(X); }
std::vector<int> betti_gf2(const CubicalComplex& X) { return betti_from(X); }

}  // namespace thick
