#pragma once

#include "thick/complex.hpp"
#include "thick/gf2.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace thick {

// Dual cell structure of the full lattice [0, S]^D. The dual m-cell of a
// primal (D - m)-face sits at the face's centre and spans the complementary
// axes. Dual cells are numbered by (doubled centre) order, independently of
// the primal numbering, so the correspondence is a real relabelling.
class DualGrid {
 public:
  DualGrid(int D, int S);

  int D() const { return D_; }
  int S() const { return S_; }
  const CubicalComplex& primal() const { return primal_; }
  std::size_t count(int m) const;  // dual m-cells
  // Doubled centre coordinates of dual cell (m, id).
  std::vector<int> centre2(int m, int id) const;

  // Primal j-cochain <-> dual (D - j)-chain.
  Gf2Chain to_dual(const Gf2Chain& cochain) const;
  Gf2Chain to_primal(const Gf2Chain& chain) const;
  // Boundary relative to the outside of the grid (dual of the coboundary).
  Gf2Chain relative_boundary(const Gf2Chain& chain) const;

 private:
  int D_, S_;
  CubicalComplex primal_;
  std::vector<std::vector<int>> dual_of_;    // primal dim -> primal id -> dual id
  std::vector<std::vector<int>> primal_of_;  // dual dim -> dual id -> primal id
};

struct FillResult {
  Gf2Chain b;               // dual chain of dimension dim(a) + 1
  double constant = 0.0;    // |b| / (S |a|), 0 when a is empty
};

// Cone filling of a relative cycle. Each of 8 random lattice base points
// gives a filling through the product contraction of the grid; the smallest
// is returned. The boundary identity is checked over GF(2) on every call.
FillResult ff_fill(const DualGrid& Y, const Gf2Chain& a, std::uint64_t seed);

// Smallest filling by enumerating cocycle corrections. Small grids only.
std::size_t min_filling_bruteforce(const DualGrid& Y, const Gf2Chain& a);

// Relative cycle a = boundary of a random union of dual boxes, some of them
// clamped to the grid boundary. Never empty.
Gf2Chain random_relative_cycle(const DualGrid& Y, int j, std::uint64_t seed);

double fill_constant_estimate(int D, int k, int S, int j, int samples, std::uint64_t seed);

struct WidthBound {
  double value = 0.0;
  std::string source;
};
WidthBound width_lower_bound_graph(const SimplicialComplex& G, double h);
// c_k is normalized to 1. fills[j-1] = Fill(j) for j = 1..k.
WidthBound width_lower_bound_filling(const CubicalComplex& X, const std::vector<double>& fills);
WidthBound width_lower_bound_filling(const SimplicialComplex& X, const std::vector<double>& fills);

// F has one column per vertex; its row count is the target dimension k.
int pl_map_width_upper(const SimplicialComplex& X, const Eigen::MatrixXd& F, int resolution);
int pl_map_width_upper(const CubicalComplex& X, const Eigen::MatrixXd& F, int resolution);

// Vertex coordinates of a lattice, one column per vertex id.
Eigen::MatrixXd lattice_coordinates(const CubicalComplex& X);

}  // namespace thick
