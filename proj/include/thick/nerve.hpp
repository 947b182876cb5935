#pragma once

#include "thick/complex.hpp"
#include "thick/geometry.hpp"

#include <cstdint>
#include <vector>

namespace thick {

struct BallCover {
  Eigen::MatrixXd centers;  // one column per ball
  double radius = 0.0;
  double separation = 0.0;

  int size() const { return static_cast<int>(centers.cols()); }
  // Most balls of this radius, with centres this far apart, that can share a point.
  int multiplicity_bound() const;
};

// Greedy maximal T/2-separated set in the T/2-neighbourhood of the image,
// with balls of radius T/2. Edges and vertices are covered exactly; higher
// simplices are covered on a sample of spacing T/16.
BallCover separated_net(const EmbeddedComplex& E, double T, std::uint64_t seed);

// Nerve of a cover of equal balls. max_dim < 0 means the multiplicity cap.
SimplicialComplex nerve_complex(const BallCover& C, int max_dim = -1);

struct NerveReport {
  int ball_count = 0;
  std::size_t nerve_simplex_count = 0;  // bound on the simplicial norm of any class
  std::vector<int> betti;               // of the nerve, dimensions 0..n-1
  VolumeEstimate volume;                // of the T-neighbourhood
  double ratio = 0.0;                   // total rank / (V T^-n)
};
NerveReport homotopy_invariant_report(const EmbeddedComplex& E, double T, std::uint64_t seed);

}  // namespace thick
