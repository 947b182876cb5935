#include "doctest.h"

#include "thick/blocks.hpp"
#include "thick/error.hpp"
#include "thick/knot.hpp"
#include "thick/stats.hpp"

#include <cmath>

using namespace thick;
using Eigen::Vector3d;

namespace {

// Dense point pairs on a closed polygon, ratio of arc to chord.
double distortion_oracle(const PLKnot& K, int per_edge) {
  std::vector<Vector3d> x;
  std::vector<double> s;
  for (int i = 0; i < K.size(); ++i)
    for (int t = 0; t < per_edge; ++t) {
      const double u = (t + 0.5) / per_edge;
      x.push_back((1 - u) * K.segment_start(i) + u * K.segment_end(i));
      s.push_back(K.vertex_arc(i) + u * (K.vertex_arc(i + 1) - K.vertex_arc(i)));
    }
  const double L = K.total_length();
  double best = 0;
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      const double arc = std::min(s[b] - s[a], L - (s[b] - s[a]));
      best = std::max(best, arc / (x[a] - x[b]).norm());
    }
  return best;
}

// Grid search over planar centres and radii with sampled lengths.
double conformal_oracle(const std::vector<Vector3d>& poly, double lo, double hi, double step, double rmax) {
  std::vector<Vector3d> x;
  std::vector<double> w;
  const int per_edge = 200;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vector3d a = poly[i], b = poly[(i + 1) % poly.size()];
    for (int t = 0; t < per_edge; ++t) {
      const double u = (t + 0.5) / per_edge;
      x.push_back((1 - u) * a + u * b);
      w.push_back((b - a).norm() / per_edge);
    }
  }
  double best = 0;
  for (double a = lo; a <= hi + 1e-12; a += step)
    for (double b = lo; b <= hi + 1e-12; b += step)
      for (double r = 0.02; r <= rmax; r += 0.02) {
        const Vector3d c(a, b, 0);
        double in = 0;
        for (std::size_t i = 0; i < x.size(); ++i)
          if ((x[i] - c).norm() <= r) in += w[i];
        best = std::max(best, in / r);
      }
  return best;
}

// A long loop whose first edge crosses the unit cube.
PLKnot strand_through_cube() {
  return PLKnot({{-5, 0.3, 0.4}, {5, 0.37, 0.46}, {6, 21, 22}, {-4, 20.5, 19.7}});
}

}  // namespace

TEST_CASE("PLKnot validation") {
  CHECK_THROWS_AS(PLKnot({{0, 0, 0}, {1, 0, 0}}), InputError);
  CHECK_THROWS_AS(PLKnot({{0, 0, 0}, {0, 0, 0}, {1, 2, 3}}), InputError);
  // A bow tie crosses itself.
  CHECK_THROWS_AS(PLKnot({{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}}), InputError);
  const PLKnot sq = unit_square_knot();
  CHECK(sq.size() == 4);
  CHECK(sq.total_length() == doctest::Approx(4.0));
  CHECK(sq.rotated());
  for (int i = 0; i < 4; ++i) {
    const Vector3d d = sq.segment_end(i) - sq.segment_start(i);
    for (int a = 0; a < 3; ++a) CHECK(std::abs(d[a]) > 1e-6);
  }
}

TEST_CASE("torus_knot examples") {
  const PLKnot K = torus_knot(2, 3, 10, 2, 200);
  CHECK(K.size() == 200);
  CHECK_THROWS_AS(torus_knot(2, 4, 10, 2, 200), ParameterError);
  CHECK_THROWS_AS(torus_knot(2, 3, 2, 10, 200), ParameterError);
  CHECK_THROWS_AS(torus_knot(2, 3, 10, 2, 20), ParameterError);
  CHECK(torus_knot(3, 2, 10, 2, 200).total_length() == doctest::Approx(K.total_length()).epsilon(0.01));
}

TEST_CASE("distortion of a fine polygon approaches pi/2") {
  const auto d = distortion(regular_polygon(2000, 1.0), 1e-4);
  CHECK(d.lo <= d.hi);
  CHECK(d.lo == doctest::Approx(M_PI / 2).epsilon(1e-3));
  CHECK(d.hi - d.lo <= 1e-4 * d.lo + 1e-12);
}

TEST_CASE("distortion of the unit square is 2") {
  const PLKnot K = unit_square_knot();
  const auto d = distortion(K, 1e-6);
  CHECK(d.lo == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(distortion_oracle(K, 200) == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(distortion_oracle(K, 200) <= d.hi + 1e-9);
  CHECK(distortion_sampled(K, 400) <= d.hi + 1e-9);
}

TEST_CASE("distortion intervals nest as the tolerance shrinks") {
  const PLKnot K = torus_knot(2, 3, 10, 2, 72);
  const auto coarse = distortion(K, 1e-1);
  const auto fine = distortion(K, 1e-3);
  CHECK(fine.lo <= fine.hi);
  CHECK(fine.hi <= coarse.hi + 1e-12);
  CHECK(fine.lo >= coarse.lo - 1e-12);
  CHECK(fine.lo > 1.0);
  CHECK(distortion_oracle(K, 8) <= fine.hi + 1e-9);
  CHECK_THROWS_AS(distortion(K, 0.0), ParameterError);
}

TEST_CASE("distortion budget errors carry the interval") {
  try {
    distortion(torus_knot(2, 3, 10, 2, 200), 1e-9, 1000);
    FAIL("expected a budget error");
  } catch (const BudgetError& e) {
    CHECK(e.lo <= e.hi);
    CHECK(e.lo > 1.0);
  }
}

TEST_CASE("torus knot distortion grows with q") {
  double last = 0;
  for (int q : {3, 5, 7, 9}) {
    const auto d = distortion(torus_knot(2, q, 10, 2, 12 * q * 2), 1e-2);
    CHECK(d.lo > last);
    last = d.lo;
  }
}

TEST_CASE("conformal length of a circle") {
  const PLKnot K = regular_polygon(10000, 10.0);
  const auto c = conformal_length(K, 20000, 1);
  CHECK(c.lower == doctest::Approx(2 * M_PI).epsilon(1e-2));
  CHECK(c.lower <= 2 * M_PI + 1e-9);
  CHECK(c.radius == doctest::Approx(10.0).epsilon(1e-2));
  CHECK(length_in_ball(K, c.center, c.radius) / c.radius == doctest::Approx(c.lower));
}

TEST_CASE("conformal length of the unit square") {
  const PLKnot raw({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}});
  const auto c = conformal_length(raw, 20000, 1);
  CHECK(c.lower == doctest::Approx(4 * std::sqrt(2.0)).epsilon(1e-3));
  // The oracle works in the plane of the unrotated square.
  const double oracle = conformal_oracle({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, -0.5, 1.5, 0.1, 1.5);
  CHECK(oracle == doctest::Approx(c.lower).epsilon(0.02));
}

TEST_CASE("conformal length properties") {
  const std::vector<PLKnot> suite{unit_square_knot(), regular_polygon(12, 3.0), torus_knot(2, 3, 10, 2, 72),
                                  strand_through_cube()};
  for (const auto& K : suite) {
    const auto small = conformal_length(K, 1000, 4);
    const auto big = conformal_length(K, 5000, 4);
    CHECK(small.lower >= 2.0 - 1e-3);
    CHECK(big.lower >= small.lower);
    const auto scaled = conformal_length(K.scaled(3.5), 1000, 4);
    CHECK(scaled.lower == doctest::Approx(small.lower).epsilon(1e-9));
  }
  CHECK_THROWS_AS(conformal_length(unit_square_knot(), 10, 1), ParameterError);
}

TEST_CASE("distortion is scale invariant") {
  const PLKnot K = torus_knot(2, 3, 10, 2, 72);
  const auto a = distortion(K, 1e-3);
  const auto b = distortion(K.scaled(0.25), 1e-3);
  CHECK(a.lo == doctest::Approx(b.lo).epsilon(1e-9));
  CHECK(a.hi == doctest::Approx(b.hi).epsilon(1e-9));
}

TEST_CASE("convol is at most four times the distortion") {
  const auto sq = check_lemma41(unit_square_knot());
  CHECK(sq.holds);
  CHECK(sq.convol_lower == doctest::Approx(4 * std::sqrt(2.0)).epsilon(1e-3));
  CHECK(sq.distor.hi == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(check_lemma41(torus_knot(2, 3, 10, 2, 400)).holds);
  for (const auto& K : {regular_polygon(12, 3.0), torus_knot(2, 5, 10, 2, 120), strand_through_cube()})
    CHECK(check_lemma41(K, 1e-2).holds);
}

TEST_CASE("block basics") {
  const Block b{{0, 0, 0}, {1, 2, 4}};
  CHECK(b.sides() == std::array<double, 3>{1, 2, 4});
  CHECK(b.eccentricity() == doctest::Approx(4.0));
  CHECK(b.volume() == doctest::Approx(8.0));
  CHECK(b.contains(Vector3d(1, 2, 4)));
  CHECK_FALSE(b.contains(Vector3d(1.1, 0, 0)));
  const Block s = b.shrunk(0.5);
  CHECK(s.volume() == doctest::Approx(1.0));
  CHECK(segment_meets_block(Vector3d(-1, 0.5, 0.5), Vector3d(2, 0.5, 0.5), b));
  CHECK_FALSE(segment_meets_block(Vector3d(-1, 5, 5), Vector3d(-0.5, 5, 6), b));
}

TEST_CASE("block_decompose away from the knot") {
  const Block Q{{100, 100, 100}, {101, 101, 101}};
  const auto d = block_decompose(Q, unit_square_knot(), 5.0, 1, 10);
  CHECK(d.blocks.size() >= 8);
  CHECK(d.blocks.size() <= 2000);
  for (const auto& c : d.crossings)
    for (int x : c) CHECK(x == 0);
  double vol = 0;
  for (const auto& b : d.blocks) {
    vol += b.volume();
    CHECK(b.sides()[2] <= Q.L1() / 2 + 1e-12);
    CHECK(b.eccentricity() < 10);
  }
  CHECK(vol == doctest::Approx(Q.volume()).epsilon(1e-9));
}

TEST_CASE("block_decompose with a strand through the cube") {
  const PLKnot K = strand_through_cube();
  REQUIRE_FALSE(K.rotated());
  const Block Q{{0, 0, 0}, {1, 1, 1}};
  const auto c = face_crossings(Q, K);
  CHECK(c[0] == 1);
  CHECK(c[1] == 1);
  const double bound = conformal_length(K, 5000, 1).lower;
  std::vector<double> attempts;
  for (std::uint64_t seed = 1; seed <= 9; ++seed) {
    const auto d = block_decompose(Q, K, bound, seed, 50);
    attempts.push_back(d.attempts);
    for (const auto& f : d.crossings)
      for (int x : f) CHECK(x <= 2);
  }
  // Success usually comes within three translations.
  CHECK(median(attempts) <= 3);
  CHECK_THROWS_AS(block_decompose(Block{{0, 0, 0}, {1, 1, 10}}, K, bound, 1, 5), ParameterError);
  CHECK_THROWS_AS(block_decompose(Q, K, 0.0, 1, 5), ParameterError);
}

TEST_CASE("nested_block_tree on a trefoil") {
  const BlockTree T = nested_block_tree(torus_knot(2, 3, 10, 2, 120), 1);
  CHECK(T.properties_hold());
  CHECK(T.max_degree() <= 2001);
  CHECK(T.partition_error() <= 1e-6);
  for (const auto& n : T.nodes) {
    if (!n.children.empty()) {
      CHECK(n.children.size() >= 8);
      CHECK(n.children.size() <= 2000);
    }
    for (int x : n.crossings_Q) CHECK(x <= 1000 * T.convol_bound);
  }
}

TEST_CASE("nested_block_tree on a round unknot") {
  const PLKnot K = regular_polygon(12, 3.0);
  const BlockTree T = nested_block_tree(K, 2);
  CHECK(T.properties_hold());
  CHECK(T.partition_error() <= 1e-6);
  // Terminal blocks meet at most one vertex and parts of two edges.
  for (const auto& n : T.nodes) {
    if (!n.terminal) continue;
    int vertices = 0;
    for (const auto& p : K.points()) vertices += n.Q.contains(p);
    CHECK(vertices <= 1);
    CHECK(segments_meeting(n.Q, K).size() <= 2);
  }
}
