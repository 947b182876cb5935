#include "thick/blocks.hpp"

#include "thick/error.hpp"
#include "thick/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace thick {

using Eigen::Vector3d;

std::array<double, 3> Block::sides() const {
  std::array<double, 3> s{hi.x() - lo.x(), hi.y() - lo.y(), hi.z() - lo.z()};
  std::sort(s.begin(), s.end());
  return s;
}

double Block::eccentricity() const {
  const auto s = sides();
  return s[0] > 0 ? s[2] / s[0] : std::numeric_limits<double>::infinity();
}

double Block::volume() const { return (hi - lo).prod(); }

bool Block::contains(const Vector3d& x) const {
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

Block Block::shrunk(double eta) const {
  const Vector3d c = 0.5 * (lo + hi), h = 0.5 * (1 - eta) * (hi - lo);
  return {c - h, c + h};
}

bool segment_meets_block(const Vector3d& p, const Vector3d& q, const Block& Q) {
  double t0 = 0, t1 = 1;
  const Vector3d d = q - p;
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0) {
      if (p[a] < Q.lo[a] || p[a] > Q.hi[a]) return false;
      continue;
    }
    double u = (Q.lo[a] - p[a]) / d[a], v = (Q.hi[a] - p[a]) / d[a];
    if (u > v) std::swap(u, v);
    t0 = std::max(t0, u);
    t1 = std::min(t1, v);
    if (t0 > t1) return false;
  }
  return true;
}

std::vector<int> segments_meeting(const Block& Q, const PLKnot& K) {
  std::vector<int> out;
  for (int i = 0; i < K.size(); ++i)
    if (segment_meets_block(K.segment_start(i), K.segment_end(i), Q)) out.push_back(i);
  return out;
}

namespace {

FaceCounts crossings_of(const Block& Q, const PLKnot& K, const std::vector<int>& segs) {
  FaceCounts c{};
  for (int i : segs) {
    const Vector3d p = K.segment_start(i), d = K.segment_end(i) - p;
    for (int a = 0; a < 3; ++a) {
      if (d[a] == 0) continue;
      for (int side = 0; side < 2; ++side) {
        const double plane = side ? Q.hi[a] : Q.lo[a];
        const double t = (plane - p[a]) / d[a];
        if (t < 0 || t > 1) continue;
        const Vector3d x = p + t * d;
        bool inside = true;
        for (int b = 0; b < 3 && inside; ++b)
          if (b != a) inside = x[b] >= Q.lo[b] && x[b] <= Q.hi[b];
        c[2 * a + side] += inside;
      }
    }
  }
  return c;
}

std::vector<int> meeting_subset(const Block& Q, const PLKnot& K, const std::vector<int>& segs) {
  std::vector<int> out;
  for (int i : segs)
    if (segment_meets_block(K.segment_start(i), K.segment_end(i), Q)) out.push_back(i);
  return out;
}

int max_count(const FaceCounts& c) { return *std::max_element(c.begin(), c.end()); }

Decomposition decompose(const Block& Q, const PLKnot& K, const std::vector<int>& segs, double bound,
                        std::uint64_t seed, int retries) {
  if (!(bound > 0)) throw ParameterError("block_decompose needs a positive conformal length bound");
  if (!(Q.eccentricity() < 10)) throw ParameterError("block_decompose needs eccentricity < 10");
  if (max_count(crossings_of(Q, K, segs)) > 1000 * bound)
    throw ParameterError("a face of the block already crosses the knot too often");
  const double h = Q.L1() / 2;
  Rng rng(seed);
  for (int attempt = 1; attempt <= retries; ++attempt) {
    Vector3d offset;
    std::array<std::vector<double>, 3> cuts;
    for (int a = 0; a < 3; ++a) {
      offset[a] = rng.uniform(0.0, h);
      cuts[a].push_back(Q.lo[a]);
      for (double x = Q.lo[a] + offset[a]; x < Q.hi[a]; x += h)
        if (x > Q.lo[a]) cuts[a].push_back(x);
      cuts[a].push_back(Q.hi[a]);
    }
    const std::size_t count = (cuts[0].size() - 1) * (cuts[1].size() - 1) * (cuts[2].size() - 1);
    if (count < 8 || count > 2000) continue;
    Decomposition out;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < cuts[0].size() && ok; ++i)
      for (std::size_t j = 0; j + 1 < cuts[1].size() && ok; ++j)
        for (std::size_t k = 0; k + 1 < cuts[2].size() && ok; ++k) {
          const Block b{{cuts[0][i], cuts[1][j], cuts[2][k]}, {cuts[0][i + 1], cuts[1][j + 1], cuts[2][k + 1]}};
          if (!(b.eccentricity() < 10)) {
            ok = false;
            break;
          }
          const FaceCounts c = crossings_of(b, K, meeting_subset(b, K, segs));
          if (max_count(c) > 1000 * bound) {
            ok = false;
            break;
          }
          out.blocks.push_back(b);
          out.crossings.push_back(c);
        }
    if (!ok) continue;
    out.attempts = attempt;
    out.offset = offset;
    return out;
  }
  throw DecompositionError("block_decompose: no acceptable translation in " + std::to_string(retries) +
                           " attempts");
}

std::vector<int> all_segments(const PLKnot& K) {
  std::vector<int> s(K.size());
  for (int i = 0; i < K.size(); ++i) s[i] = i;
  return s;
}

}  // namespace

FaceCounts face_crossings(const Block& Q, const PLKnot& K) { return crossings_of(Q, K, segments_meeting(Q, K)); }

Decomposition block_decompose(const Block& Q, const PLKnot& K, double convol_bound, std::uint64_t seed,
                              int retries) {
  return decompose(Q, K, all_segments(K), convol_bound, seed, retries);
}

// ------------------------------------------------------------ nested tree

namespace {

// K meets Q in nothing, in part of one edge, or in one vertex with parts of
// its two edges.
bool simple_intersection(const Block& Q, const PLKnot& K, const std::vector<int>& segs) {
  std::vector<int> verts;
  for (int i : segs) {
    if (Q.contains(K.segment_start(i))) verts.push_back(i);
    if (Q.contains(K.segment_end(i))) verts.push_back((i + 1) % K.size());
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (segs.empty()) return true;
  if (verts.empty()) return segs.size() == 1;
  if (verts.size() > 1) return false;
  const int v = verts[0];
  const int before = (v + K.size() - 1) % K.size();
  std::vector<int> expect{before, v};
  std::sort(expect.begin(), expect.end());
  return segs == expect;
}

bool clean_shell(const Block& B, const Block& Q, const PLKnot& K, const std::vector<int>& segs) {
  for (int i : segs) {
    const Vector3d& v = K.segment_start(i);
    const Vector3d& w = K.segment_end(i);
    if (B.contains(v) && !Q.contains(v)) return false;
    if (B.contains(w) && !Q.contains(w)) return false;
  }
  return crossings_of(B, K, segs) == crossings_of(Q, K, meeting_subset(Q, K, segs));
}

}  // namespace

BlockTree nested_block_tree(const PLKnot& K, std::uint64_t seed, double convol_bound) {
  BlockTree T;
  T.convol_bound = convol_bound > 0 ? convol_bound : 1.2 * conformal_length(K, 20000, seed).lower;
  Vector3d lo = K.vertex(0), hi = K.vertex(0);
  for (const auto& p : K.points()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vector3d c = 0.5 * (lo + hi);
  const double half = 0.6 * (hi - lo).maxCoeff();
  T.root = {c - Vector3d::Constant(half), c + Vector3d::Constant(half)};
  T.eps = std::min(K.shortest_edge(), K.min_nonadjacent_distance());
  const double diam = (T.root.hi - T.root.lo).norm();
  while (std::ldexp(diam, -T.target_depth) >= T.eps) ++T.target_depth;

  BlockNode root;
  root.B = root.Q = T.root;
  root.meets_knot = true;
  T.nodes.push_back(root);
  std::vector<std::vector<int>> segs{all_segments(K)};
  std::deque<int> work{0};
  const double limit = 1000 * T.convol_bound;
  while (!work.empty()) {
    const int id = work.front();
    work.pop_front();
    {
      BlockNode& node = T.nodes[id];
      node.crossings_Q = crossings_of(node.Q, K, segs[id]);
      node.property[0] = max_count(node.crossings_B) <= limit && max_count(node.crossings_Q) <= limit;
      const bool simple = simple_intersection(node.Q, K, segs[id]);
      if (!node.meets_knot || (node.depth >= T.target_depth && simple) || node.depth >= T.target_depth + 10) {
        node.terminal = true;
        node.property[2] = simple;
        continue;
      }
    }
    const Decomposition dec =
        decompose(T.nodes[id].Q, K, segs[id], T.convol_bound, mix_seed(seed, static_cast<std::uint64_t>(id)), 100);
    for (std::size_t b = 0; b < dec.blocks.size(); ++b) {
      BlockNode child;
      child.B = dec.blocks[b];
      child.parent = id;
      child.depth = T.nodes[id].depth + 1;
      child.crossings_B = dec.crossings[b];
      std::vector<int> sub = meeting_subset(child.B, K, segs[id]);
      child.meets_knot = !sub.empty();
      child.Q = child.B;
      if (child.meets_knot) {
        double clearance = child.B.L1();
        for (int i : sub)
          for (const Vector3d& v : {K.segment_start(i), K.segment_end(i)})
            if (child.B.contains(v))
              for (int a = 0; a < 3; ++a)
                clearance = std::min({clearance, v[a] - child.B.lo[a], child.B.hi[a] - v[a]});
        double eta = 1e-3 * std::max(clearance, 1e-9 * child.B.L1()) / child.B.L1();
        bool ok = false;
        for (int halvings = 0; halvings < 60 && !ok; ++halvings, eta *= 0.5) {
          child.Q = child.B.shrunk(eta);
          child.shrink = eta;
          ok = clean_shell(child.B, child.Q, K, sub);
        }
        child.property[1] = ok;
        sub = meeting_subset(child.Q, K, sub);
        child.meets_knot = !sub.empty();
      }
      const int cid = static_cast<int>(T.nodes.size());
      T.nodes[id].children.push_back(cid);
      T.nodes.push_back(child);
      segs.push_back(std::move(sub));
      work.push_back(cid);
    }
    const auto n = T.nodes[id].children.size();
    T.nodes[id].property[3] = n >= 8 && n <= 2000;
  }
  return T;
}

bool BlockTree::properties_hold() const {
  for (const auto& n : nodes)
    for (bool p : n.property)
      if (!p) return false;
  return true;
}

int BlockTree::max_degree() const {
  int best = 0;
  for (const auto& n : nodes)
    best = std::max(best, static_cast<int>(n.children.size()) + (n.parent >= 0 ? 1 : 0));
  return best;
}

double BlockTree::partition_error() const {
  double total = 0;
  for (const auto& n : nodes) {
    if (n.parent >= 0) total += n.B.volume() - n.Q.volume();
    if (n.terminal) total += n.Q.volume();
  }
  return std::abs(total - root.volume()) / root.volume();
}

}  // namespace thick
