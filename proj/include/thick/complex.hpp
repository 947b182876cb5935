#pragma once

#include "thick/gf2.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace thick {

using Simplex = std::vector<int>;  // strictly increasing vertex ids

struct FaceRef {
  int dim = 0;
  int id = 0;
  bool operator==(const FaceRef&) const = default;
  auto operator<=>(const FaceRef&) const = default;
};

class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  // Builds the closure of the given simplices. Every vertex id below
  // vertex_count becomes a 0-simplex even if isolated.
  static SimplicialComplex from_simplices(int vertex_count, const std::vector<Simplex>& simplices);

  int dim() const { return static_cast<int>(by_dim_.size()) - 1; }
  int vertex_count() const { return vertex_count_; }
  std::size_t count(int j) const;
  std::size_t total() const;
  const std::vector<Simplex>& simplices(int j) const;
  const Simplex& simplex(FaceRef f) const { return by_dim_[f.dim][f.id]; }

  std::optional<int> find(const Simplex& s) const;
  // Maximum over vertices of the number of simplices (all dimensions) containing it.
  int local_degree() const;
  // Simplices not contained in a larger one.
  std::vector<FaceRef> maximal() const;
  // Rows index (j-1)-faces, columns index j-faces.
  Gf2Matrix boundary(int j) const;
  // True when the simplices are closed under faces, sorted and unique.
  bool valid() const;

  // Graph helpers for 1-dimensional complexes.
  std::vector<std::vector<int>> adjacency() const;
  bool connected() const;
  int max_degree() const;

  bool operator==(const SimplicialComplex&) const = default;

 private:
  int vertex_count_ = 0;
  std::vector<std::vector<Simplex>> by_dim_;
};

// Lattice face of [0, S]^D: the product over axes a of [base_a, base_a + 1]
// when bit a of dirs is set and {base_a} otherwise.
struct Cube {
  std::vector<int> base;
  unsigned dirs = 0;
  int dim() const;
  bool operator==(const Cube&) const = default;
};

// The k-skeleton X^{k,D}(S) of the unit cubical lattice on [0, S]^D.
class CubicalComplex {
 public:
  CubicalComplex() = default;
  CubicalComplex(int k, int D, int S);

  int dim() const { return k_; }
  int ambient_dim() const { return D_; }
  int side() const { return S_; }
  int vertex_count() const;
  std::size_t count(int j) const;
  Cube face(int j, int id) const;
  int find(const Cube& c) const;  // -1 when absent
  int local_degree() const;
  Gf2Matrix boundary(int j) const;
  // Transposed boundary: rows j+1 faces, columns j faces.
  Gf2Matrix coboundary(int j) const;

  // Closed-form face count of X^{k,D}(S) in dimension j.
  static std::uint64_t lattice_count(int j, int D, int S);

 private:
  int k_ = 0, D_ = 0, S_ = 0;
  std::vector<std::vector<unsigned>> masks_;         // per dimension, increasing
  std::vector<std::vector<std::size_t>> offsets_;    // per dimension, per mask
  std::vector<std::size_t> counts_;
  std::size_t mask_block(unsigned dirs) const;
  std::size_t local_index(const std::vector<int>& base, unsigned dirs) const;
};

struct Refinement {
  SimplicialComplex fine;
  SimplicialComplex coarse;
  // parent[j][id] = carrier face in the coarse complex of fine simplex (j, id)
  std::vector<std::vector<FaceRef>> parent;
};

CubicalComplex grid_skeleton(int k, int D, int S);
std::pair<SimplicialComplex, Refinement> triangulate_cubical(const CubicalComplex& X);
SimplicialComplex simplex_skeleton(int k, int N);
SimplicialComplex random_bipartite_graph(int N, int d, std::uint64_t seed);
SimplicialComplex cycle_graph(int n);
SimplicialComplex path_graph(int n);
SimplicialComplex grid_graph(int S);  // S x S vertices, vertex (i, j) = i * S + j

enum class ExpansionMode { exact, spectral };
double expansion_constant(const SimplicialComplex& G, ExpansionMode mode);

std::vector<int> betti_gf2(const SimplicialComplex& X);
std::vector<int> betti_gf2(const CubicalComplex& X);

// True when the simplices share no vertex but any family obtained by
// dropping one member does.
bool minimal_vertex_free_family(const SimplicialComplex& X, const std::vector<FaceRef>& family);

}  // namespace thick
