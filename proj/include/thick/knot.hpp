#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <utility>
#include <vector>

namespace thick {

// Closed polygonal curve in R^3 without self-intersections. If some edge is
// parallel to a coordinate plane the whole curve is rotated by a fixed
// generic rotation, which keeps every metric quantity unchanged.
class PLKnot {
 public:
  explicit PLKnot(std::vector<Eigen::Vector3d> points);

  const std::vector<Eigen::Vector3d>& points() const { return pts_; }
  int size() const { return static_cast<int>(pts_.size()); }
  double total_length() const { return arc_.back(); }
  bool rotated() const { return rotated_; }

  const Eigen::Vector3d& vertex(int i) const { return pts_[i]; }
  // Segment i runs from vertex i to vertex i+1 (cyclically).
  Eigen::Vector3d segment_start(int i) const { return pts_[i]; }
  Eigen::Vector3d segment_end(int i) const { return pts_[(i + 1) % size()]; }
  double vertex_arc(int i) const { return arc_[i]; }  // arclength of vertex i
  int segment_of(double s) const;
  Eigen::Vector3d point_at(double s) const;
  double arc_distance(double s, double t) const;  // intrinsic distance
  double turning(int i) const { return turn_[i]; }  // exterior angle at vertex i
  double shortest_edge() const;
  double min_nonadjacent_distance() const;

  PLKnot scaled(double lambda) const;

 private:
  std::vector<Eigen::Vector3d> pts_;
  std::vector<double> arc_;   // size()+1 entries, arc_[0] = 0
  std::vector<double> turn_;
  bool rotated_ = false;
};

// (p, q) torus knot on the torus with radii (R, r). The curve winds
// min(p, q) times along the core and max(p, q) times around it, so (p, q)
// and (q, p) give the same curve.
PLKnot torus_knot(int p, int q, double R, double r, int m);
PLKnot regular_polygon(int m, double radius);
PLKnot unit_square_knot();

struct DistortionInterval {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t evaluations = 0;
  std::pair<double, double> witness{0.0, 0.0};  // arclength parameters attaining lo
};
// Branch and bound over pairs of arcs; stops once hi - lo <= tol * lo.
DistortionInterval distortion(const PLKnot& K, double tol, std::size_t budget = 10'000'000);
// Best ratio over a dense grid of parameter pairs; a reference for tests.
double distortion_sampled(const PLKnot& K, int samples);

// Length of K inside the closed ball B(x, r).
double length_in_ball(const PLKnot& K, const Eigen::Vector3d& x, double r);

struct ConformalResult {
  double lower = 0.0;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  double radius = 0.0;
  std::size_t evaluations = 0;
};
// Certified lower bound: the best ratio over a fixed candidate schedule
// truncated to `budget` evaluations, so more budget never lowers it.
ConformalResult conformal_length(const PLKnot& K, std::size_t budget, std::uint64_t seed);

struct Lemma41Check {
  double convol_lower = 0.0;
  DistortionInterval distor;
  bool holds = false;
};
Lemma41Check check_lemma41(const PLKnot& K, double tol = 1e-3, std::size_t convol_budget = 20000);

}  // namespace thick
