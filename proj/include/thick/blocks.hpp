#pragma once

#include "thick/knot.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

namespace thick {

struct Block {
  Eigen::Vector3d lo = Eigen::Vector3d::Zero();
  Eigen::Vector3d hi = Eigen::Vector3d::Ones();

  std::array<double, 3> sides() const;  // increasing
  double L1() const { return sides()[0]; }
  double eccentricity() const;
  double volume() const;
  bool contains(const Eigen::Vector3d& x) const;  // closed
  // Scaled about its centre by (1 - eta).
  Block shrunk(double eta) const;
};

// Face 2a is {x_a = lo_a}, face 2a+1 is {x_a = hi_a}.
using FaceCounts = std::array<int, 6>;
FaceCounts face_crossings(const Block& Q, const PLKnot& K);
bool segment_meets_block(const Eigen::Vector3d& p, const Eigen::Vector3d& q, const Block& Q);
std::vector<int> segments_meeting(const Block& Q, const PLKnot& K);

struct Decomposition {
  std::vector<Block> blocks;
  std::vector<FaceCounts> crossings;
  int attempts = 0;
  Eigen::Vector3d offset = Eigen::Vector3d::Zero();
};
// Cuts Q by a randomly translated lattice of spacing L1(Q)/2 and accepts
// the first translation whose pieces all have eccentricity < 10, at most
// 1000 * convol_bound crossings per face and a count in [8, 2000].
Decomposition block_decompose(const Block& Q, const PLKnot& K, double convol_bound, std::uint64_t seed,
                              int retries);

struct BlockNode {
  Block B, Q;
  int parent = -1;
  std::vector<int> children;
  int depth = 0;
  bool terminal = false;
  bool meets_knot = false;
  FaceCounts crossings_B{}, crossings_Q{};
  double shrink = 0.0;
  // Checked per node: face crossings bounded; clean shell; terminal
  // intersection pattern; child count.
  bool property[4] = {true, true, true, true};
};

struct BlockTree {
  Block root;
  std::vector<BlockNode> nodes;  // nodes[0] is the root, B = Q = root
  int target_depth = 0;
  double convol_bound = 0.0;
  double eps = 0.0;

  bool properties_hold() const;
  int max_degree() const;  // children plus the parent edge
  // |sum of leaf Q volumes + shell volumes - vol(root)| / vol(root)
  double partition_error() const;
};
// convol_bound <= 0 means 1.2 times the computed conformal length bound.
BlockTree nested_block_tree(const PLKnot& K, std::uint64_t seed, double convol_bound = 0.0);

}  // namespace thick
