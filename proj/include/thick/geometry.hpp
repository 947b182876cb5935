#pragma once

#include "thick/complex.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <vector>

namespace thick {

using Points = Eigen::MatrixXd;  // one point per column

struct EmbeddedComplex {
  SimplicialComplex complex;
  Eigen::MatrixXd coords;  // ambient_n x vertex_count

  int ambient_n() const { return static_cast<int>(coords.rows()); }
  Points simplex_points(FaceRef f) const;
  Points simplex_points(const Simplex& s) const;
  void validate() const;
};

struct Hyperplane {
  Eigen::VectorXd normal;  // unit length
  double offset = 0.0;     // plane is {x : normal . x = offset}
};

constexpr double kInf = std::numeric_limits<double>::infinity();

// Euclidean distance between the convex hulls of two point sets.
double simplex_distance(const Points& A, const Points& B);
// Closest point of conv(A) to x.
Eigen::VectorXd closest_point(const Points& A, const Eigen::VectorXd& x);
double point_simplex_distance(const Points& A, const Eigen::VectorXd& x);

double segment_segment_distance(const Eigen::VectorXd& p0, const Eigen::VectorXd& p1,
                                const Eigen::VectorXd& q0, const Eigen::VectorXd& q1);
double point_segment_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& p0,
                              const Eigen::VectorXd& p1);

// Smallest ball containing a few points (exhaustive over support subsets).
struct Ball {
  Eigen::VectorXd center;
  double radius = 0.0;
};
Ball min_enclosing_ball(const Points& P);

// min over x of max_j dist(x, conv(family[j])).
struct Minimax {
  double value = kInf;
  Eigen::VectorXd point;
};
Minimax family_minimax(const std::vector<Points>& family, double tol = 1e-9);

double combinatorial_thickness(const EmbeddedComplex& E);
// Reference O(M^2) evaluation over all non-adjacent pairs.
double combinatorial_thickness_bruteforce(const EmbeddedComplex& E);
// Largest T such that only families with a common vertex have intersecting
// T-neighbourhoods. A disjoint pair contributes half its distance.
double strong_combinatorial_thickness(const EmbeddedComplex& E);

struct Crossings {
  int total = 0;
  int independent = 0;
  std::vector<int> ids;  // top-dimensional simplices meeting the plane
  std::vector<int> independent_ids;
};
Crossings hyperplane_crossings(const EmbeddedComplex& E, const Hyperplane& H);

struct SweepResult {
  int best = 0;
  int best_total = 0;
  Hyperplane witness;
};
SweepResult bisecting_sweep(const EmbeddedComplex& E, const std::vector<Eigen::VectorXd>& directions);
std::vector<Eigen::VectorXd> axis_directions(int n);

struct VolumeEstimate {
  double estimate = 0.0;
  double lo = 0.0;  // 95% interval
  double hi = 0.0;
};
VolumeEstimate neighborhood_volume(const EmbeddedComplex& E, double T, std::size_t samples,
                                   std::uint64_t seed);

double unit_ball_volume(int n);
EmbeddedComplex scaled(const EmbeddedComplex& E, double lambda);

}  // namespace thick
