#include "doctest.h"

#include "thick/complex.hpp"
#include "thick/error.hpp"
#include "thick/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <set>

using namespace thick;

namespace {

// Counts lattice faces of dimension j in [0, S]^D by walking every base
// point and direction mask.
std::size_t enumerate_lattice_faces(int j, int D, int S) {
  std::size_t count = 0;
  std::vector<int> base(D, 0);
  while (true) {
    for (unsigned dirs = 0; dirs < (1u << D); ++dirs) {
      if (std::popcount(dirs) != j) continue;
      bool inside = true;
      for (int a = 0; a < D; ++a)
        if ((dirs >> a & 1u) && base[a] + 1 > S) inside = false;
      if (inside) ++count;
    }
    int a = 0;
    while (a < D && base[a] == S) base[a++] = 0;
    if (a == D) break;
    ++base[a];
  }
  return count;
}

double expansion_bruteforce(const SimplicialComplex& G) {
  const int V = G.vertex_count();
  double best = 1e300;
  for (unsigned mask = 1; mask < (1u << V); ++mask) {
    const int size = std::popcount(mask);
    if (2 * size > V) continue;
    int cut = 0;
    for (const auto& e : G.simplices(1))
      if (((mask >> e[0]) & 1u) != ((mask >> e[1]) & 1u)) ++cut;
    best = std::min(best, static_cast<double>(cut) / size);
  }
  return best;
}

bool is_bipartite(const SimplicialComplex& G) {
  const auto adj = G.adjacency();
  std::vector<int> colour(G.vertex_count(), -1);
  for (int s = 0; s < G.vertex_count(); ++s) {
    if (colour[s] >= 0) continue;
    colour[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (int w : adj[v]) {
        if (colour[w] < 0) {
          colour[w] = 1 - colour[v];
          q.push(w);
        } else if (colour[w] == colour[v]) {
          return false;
        }
      }
    }
  }
  return true;
}

int euler_from_counts(const SimplicialComplex& X) {
  int chi = 0;
  for (int j = 0; j <= X.dim(); ++j) chi += (j % 2 ? -1 : 1) * static_cast<int>(X.count(j));
  return chi;
}

int euler_from_betti(const std::vector<int>& b) {
  int chi = 0;
  for (std::size_t j = 0; j < b.size(); ++j) chi += (j % 2 ? -1 : 1) * b[j];
  return chi;
}

}  // namespace

TEST_CASE("grid_skeleton small counts") {
  const auto X = grid_skeleton(1, 2, 2);
  CHECK(X.count(0) == 9);
  CHECK(X.count(1) == 12);

  const auto corners = grid_skeleton(0, 3, 1);
  CHECK(corners.count(0) == 8);
  CHECK(corners.dim() == 0);
}

TEST_CASE("grid_skeleton (2,3,2) against enumeration") {
  const auto X = grid_skeleton(2, 3, 2);
  for (int j = 0; j <= 2; ++j) CHECK(X.count(j) == enumerate_lattice_faces(j, 3, 2));
}

TEST_CASE("grid_skeleton counts match enumeration for D <= 4, S <= 3") {
  for (int D = 1; D <= 4; ++D)
    for (int S = 1; S <= 3; ++S)
      for (int k = 0; k <= D; ++k) {
        const auto X = grid_skeleton(k, D, S);
        for (int j = 0; j <= k; ++j) {
          const auto expected = enumerate_lattice_faces(j, D, S);
          CHECK(X.count(j) == expected);
          CHECK(CubicalComplex::lattice_count(j, D, S) == expected);
        }
      }
}

TEST_CASE("grid_skeleton is closed under faces") {
  for (int D = 1; D <= 3; ++D)
    for (int k = 1; k <= D; ++k) {
      const auto X = grid_skeleton(k, D, 2);
      for (int j = 1; j <= k; ++j)
        for (std::size_t id = 0; id < X.count(j); ++id) {
          const Cube c = X.face(j, static_cast<int>(id));
          for (int a = 0; a < D; ++a) {
            if (!(c.dirs >> a & 1u)) continue;
            Cube lo{c.base, c.dirs & ~(1u << a)};
            Cube hi = lo;
            hi.base[a] += 1;
            CHECK(X.find(lo) >= 0);
            CHECK(X.find(hi) >= 0);
          }
        }
    }
}

TEST_CASE("grid_skeleton local degree depends only on k and D") {
  for (int D = 1; D <= 3; ++D)
    for (int k = 0; k <= D; ++k) CHECK(grid_skeleton(k, D, 3).local_degree() == grid_skeleton(k, D, 4).local_degree());
}

TEST_CASE("grid_skeleton rejects bad dimensions") {
  CHECK_THROWS_AS(grid_skeleton(3, 2, 2), ParameterError);
  CHECK_THROWS_AS(grid_skeleton(1, 2, 0), ParameterError);
  CHECK_THROWS_AS(grid_skeleton(-1, 2, 2), ParameterError);
}

TEST_CASE("triangulate_cubical splits j-cubes into j! simplices") {
  const auto [square, r2] = triangulate_cubical(grid_skeleton(2, 2, 1));
  CHECK(square.count(2) == 2);
  CHECK(square.vertex_count() == 4);

  const auto [cube, r3] = triangulate_cubical(grid_skeleton(3, 3, 1));
  CHECK(cube.count(3) == 6);
  CHECK(cube.vertex_count() == 8);
  CHECK(cube.valid());
  for (std::size_t id = 0; id < r3.fine.count(3); ++id) CHECK(r3.parent[3][id].dim == 3);
}

TEST_CASE("triangulate_cubical is the identity on graphs") {
  const auto X = grid_skeleton(1, 2, 2);
  const auto [T, R] = triangulate_cubical(X);
  CHECK(T.vertex_count() == 9);
  CHECK(T.count(1) == 12);
  CHECK(T.dim() == 1);
  // Every coarse face has at least one child.
  std::set<FaceRef> parents;
  for (int j = 0; j <= 1; ++j)
    for (const auto& p : R.parent[j]) parents.insert(p);
  CHECK(parents.size() == 21);
}

TEST_CASE("simplex_skeleton counts") {
  const auto K4 = simplex_skeleton(1, 3);
  CHECK(K4.count(0) == 4);
  CHECK(K4.count(1) == 6);
  CHECK(simplex_skeleton(2, 3).count(2) == 4);
  CHECK(simplex_skeleton(2, 5).count(2) == 20);
  CHECK_THROWS_AS(simplex_skeleton(4, 3), ParameterError);
}

TEST_CASE("random_bipartite_graph structure") {
  const auto G = random_bipartite_graph(4, 6, 1);
  CHECK(G.vertex_count() == 8);
  CHECK(G.count(1) <= 24);
  CHECK(is_bipartite(G));
  CHECK(G.max_degree() <= 6);

  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto M = random_bipartite_graph(2, 1, seed);
    CHECK(M.count(1) == 2);
    CHECK(M.max_degree() == 1);
  }

  CHECK(random_bipartite_graph(16, 6, 9) == random_bipartite_graph(16, 6, 9));
}

TEST_CASE("random_bipartite_graph of size 64 is an expander") {
  const auto G = random_bipartite_graph(64, 6, 7);
  CHECK(expansion_constant(G, ExpansionMode::spectral) > 0.0);
}

TEST_CASE("expansion_constant examples") {
  const auto C4 = cycle_graph(4);
  const auto K4 = simplex_skeleton(1, 3);
  CHECK(expansion_bruteforce(C4) == doctest::Approx(1.0));
  CHECK(expansion_bruteforce(K4) == doctest::Approx(2.0));
  CHECK(expansion_constant(C4, ExpansionMode::exact) == doctest::Approx(expansion_bruteforce(C4)));
  CHECK(expansion_constant(K4, ExpansionMode::exact) == doctest::Approx(expansion_bruteforce(K4)));
  const double spec = expansion_constant(C4, ExpansionMode::spectral);
  CHECK(spec > 0.0);
  CHECK(spec <= 1.0);
}

TEST_CASE("exact expansion dominates the spectral bound") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto G = random_bipartite_graph(6, 3, seed);
    if (!G.connected()) continue;
    const double exact = expansion_constant(G, ExpansionMode::exact);
    CHECK(exact == doctest::Approx(expansion_bruteforce(G)));
    CHECK(exact >= expansion_constant(G, ExpansionMode::spectral) - 1e-9);
  }
  CHECK(expansion_constant(grid_graph(3), ExpansionMode::exact) >=
        expansion_constant(grid_graph(3), ExpansionMode::spectral) - 1e-9);
}

TEST_CASE("expansion_constant rejects disconnected graphs") {
  const auto G = SimplicialComplex::from_simplices(4, {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(expansion_constant(G, ExpansionMode::exact), StructureError);
  CHECK_THROWS_AS(expansion_constant(G, ExpansionMode::spectral), StructureError);
}

TEST_CASE("betti_gf2 examples") {
  CHECK(betti_gf2(cycle_graph(5)) == std::vector<int>{1, 1});

  const auto X = grid_skeleton(1, 2, 2);
  // b1 of a planar graph is the number of bounded faces.
  const int squares = static_cast<int>(enumerate_lattice_faces(2, 2, 2));
  CHECK(betti_gf2(X) == std::vector<int>{1, squares});

  const auto two = SimplicialComplex::from_simplices(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  CHECK(betti_gf2(two) == std::vector<int>{2, 2});
}

TEST_CASE("betti_gf2 satisfies Euler consistency") {
  std::vector<SimplicialComplex> suite{cycle_graph(7), path_graph(5), simplex_skeleton(2, 4), simplex_skeleton(3, 5),
                                       random_bipartite_graph(8, 3, 4), grid_graph(4),
                                       triangulate_cubical(grid_skeleton(2, 3, 2)).first};
  for (const auto& X : suite) {
    CHECK(X.valid());
    CHECK(euler_from_betti(betti_gf2(X)) == euler_from_counts(X));
  }
  // The 2-skeleton of a simplex is a wedge of spheres.
  CHECK(betti_gf2(simplex_skeleton(2, 4)) == std::vector<int>{1, 0, 4});
}

TEST_CASE("betti_gf2 of cubical skeletons") {
  CHECK(betti_gf2(grid_skeleton(1, 2, 3)) == std::vector<int>{1, 9});
  CHECK(betti_gf2(grid_skeleton(2, 3, 1)) == std::vector<int>{1, 0, 1});
}

TEST_CASE("GF(2) rank: dense and sparse agree") {
  Rng rng(11);
  for (int t = 0; t < 20; ++t) {
    const int rows = 5 + static_cast<int>(rng.below(30)), cols = 5 + static_cast<int>(rng.below(30));
    Gf2Matrix m(rows, cols);
    for (int c = 0; c < cols; ++c) {
      std::vector<int> r;
      for (int i = 0; i < rows; ++i)
        if (rng.below(4) == 0) r.push_back(i);
      m.set_column(c, r);
    }
    const int rank = gf2_rank_dense(m);
    CHECK(gf2_rank_sparse(m) == rank);
    CHECK(gf2_rank(m.transpose()) == rank);
    const auto kernel = gf2_kernel_basis(m);
    CHECK(static_cast<int>(kernel.size()) == cols - rank);
    for (const auto& v : kernel) CHECK(m.apply(v).empty());
  }
}

TEST_CASE("boundary of boundary vanishes") {
  const auto X = simplex_skeleton(3, 5);
  for (int j = 2; j <= 3; ++j) {
    const auto d1 = X.boundary(j - 1), d2 = X.boundary(j);
    for (int c = 0; c < d2.cols(); ++c) CHECK(d1.apply(d2.column(c)).empty());
  }
  const auto Q = grid_skeleton(3, 3, 2);
  for (int j = 2; j <= 3; ++j) {
    const auto d1 = Q.boundary(j - 1), d2 = Q.boundary(j);
    for (int c = 0; c < d2.cols(); ++c) CHECK(d1.apply(d2.column(c)).empty());
  }
}
