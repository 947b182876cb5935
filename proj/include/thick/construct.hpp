#pragma once

#include "thick/complex.hpp"
#include "thick/geometry.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace thick {

EmbeddedComplex random_facewise_linear(const SimplicialComplex& X, int n, double R, std::uint64_t seed);

struct RefinedEmbedding {
  EmbeddedComplex embedding;  // on the fine complex
  Refinement refinement;
};
// Cuts the image by the unit lattice and triangulates every cell by pulling
// from its least vertex in a global order, so shared faces agree.
RefinedEmbedding refine_by_unit_lattice(const EmbeddedComplex& E, std::uint64_t seed = 0);

struct TwoScaleResult {
  EmbeddedComplex embedding;   // fine complex, rescaled so thickness is 1
  Refinement refinement;
  double achieved_eps = 0.0;   // thickness before rescaling, at radius initial_radius
  double initial_radius = 0.0; // N^{1/(n-k)}
  double radius = 0.0;         // enclosing radius about the origin after rescaling
  int attempts = 1;
};
TwoScaleResult two_scale_embedding(const SimplicialComplex& X, int n, std::uint64_t seed, bool strong);

// Serpentine folding of the slab [0, 10] x [0, Ly] x [0, Lz] in two stages.
class FoldMap {
 public:
  FoldMap(double Ly, double Lz, int runs_y, int runs_z);
  Eigen::Vector3d operator()(const Eigen::Vector3d& p) const;
  int runs_y() const { return stage1_.runs; }
  int runs_z() const { return stage2_.runs; }
  bool feasible() const { return stage1_.run_length > 0 && stage2_.run_length > 0; }

  static constexpr double kThickness = 10.0;
  static constexpr double kBend = 0.29;  // curvature times half-width per stage

 private:
  struct Stage {
    int runs = 1;
    double length = 0;      // parameter range being folded
    double radius = 0;      // turn radius of the centreline
    double run_length = 0;  // straight length per run
    double half_width = 0;
  };
  // Maps (u, s): u across the layer, s along it, to folded planar coordinates.
  static Eigen::Vector2d fold(const Stage& st, double u, double s);
  Stage stage1_, stage2_;
};

struct FoldedGrid {
  EmbeddedComplex embedding;
  double radius = 0.0;
  int runs_y = 1, runs_z = 1;
};
FoldedGrid folded_grid_embedding(int S, int n);
// Same layout with an explicit fold; used to probe the map itself.
FoldedGrid folded_grid_embedding(int S, int runs_y, int runs_z);

struct KbOptions {
  double radius_multiplier = 8.0;
  int segments = 5;
};
EmbeddedComplex kb_sphere_embedding(const SimplicialComplex& G, std::uint64_t seed, int retries,
                                    const KbOptions& opt = {});

struct RetractionEmbedding {
  EmbeddedComplex embedding;
  int b1 = 0;
  int grid_side = 0;
  double radius = 0.0;
};
RetractionEmbedding retraction_embed_graph(const SimplicialComplex& G, int n);

double enclosing_radius(const EmbeddedComplex& E);  // max vertex norm
EmbeddedComplex centered(const EmbeddedComplex& E);  // bounding-box centre at origin

// ---------------------------------------------------------------- probability

enum class Scenario { pair, family, plane_pair, plane_near_intersection };

struct Probability {
  double p_hat = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t hits = 0;
  std::size_t trials = 0;
};
// J is only read for the family scenario.
Probability estimate_bad_probability(Scenario scenario, int k, int n, double eps, std::size_t trials,
                                     std::uint64_t seed, int J = 3);

struct TailEstimate {
  double quantile = 0.0;
  double ratio = 0.0;  // quantile / delta
};
TailEstimate inverse_norm_tail(int d, double delta, std::size_t trials, std::uint64_t seed);

// Radius used by the plane-near-intersection scenario.
constexpr double kIntersectionReach = 0.5;

}  // namespace thick
