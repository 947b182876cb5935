#include "thick/knot.hpp"

#include "thick/error.hpp"
#include "thick/geometry.hpp"
#include "thick/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>

namespace thick {

using Eigen::Vector3d;

namespace {

bool transverse(const std::vector<Vector3d>& pts) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vector3d d = pts[(i + 1) % pts.size()] - pts[i];
    for (int a = 0; a < 3; ++a)
      if (std::abs(d[a]) <= 1e-9 * d.norm()) return false;
  }
  return true;
}

Eigen::Matrix3d generic_rotation() {
  return (Eigen::AngleAxisd(0.3, Vector3d::UnitZ()) * Eigen::AngleAxisd(0.7, Vector3d::UnitY()) *
          Eigen::AngleAxisd(1.1, Vector3d::UnitX()))
      .toRotationMatrix();
}

double seg_dist(const Vector3d& p0, const Vector3d& p1, const Vector3d& q0, const Vector3d& q1) {
  return segment_segment_distance(p0, p1, q0, q1);
}

}  // namespace

PLKnot::PLKnot(std::vector<Vector3d> points) : pts_(std::move(points)) {
  const int m = size();
  if (m < 3) throw InputError("a knot needs at least 3 points");
  for (int i = 0; i < m; ++i)
    if ((pts_[(i + 1) % m] - pts_[i]).norm() == 0) throw InputError("consecutive knot points coincide");
  for (int attempt = 0; attempt < 5 && !transverse(pts_); ++attempt) {
    const Eigen::Matrix3d rot = generic_rotation();
    for (auto& p : pts_) p = rot * p;
    rotated_ = true;
  }
  if (!transverse(pts_)) throw InputError("could not make the knot transverse to the coordinate planes");
  arc_.assign(m + 1, 0.0);
  for (int i = 0; i < m; ++i) arc_[i + 1] = arc_[i] + (segment_end(i) - segment_start(i)).norm();
  turn_.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const Vector3d a = (pts_[i] - pts_[(i + m - 1) % m]).normalized();
    const Vector3d b = (pts_[(i + 1) % m] - pts_[i]).normalized();
    turn_[i] = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
  }
  // Embedding check: sweep along x over segment boxes.
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto xlo = [&](int i) { return std::min(segment_start(i).x(), segment_end(i).x()); };
  auto xhi = [&](int i) { return std::max(segment_start(i).x(), segment_end(i).x()); };
  std::sort(order.begin(), order.end(), [&](int a, int b) { return xlo(a) < xlo(b); });
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      const int i = order[a], j = order[b];
      if (xlo(j) > xhi(i) + 1e-12) break;
      const int gap = std::abs(i - j);
      if (gap <= 1 || gap == m - 1) continue;
      if (seg_dist(segment_start(i), segment_end(i), segment_start(j), segment_end(j)) <= 1e-12)
        throw InputError("knot segments " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
    }
}

int PLKnot::segment_of(double s) const {
  const int i = static_cast<int>(std::upper_bound(arc_.begin(), arc_.end(), s) - arc_.begin()) - 1;
  return std::clamp(i, 0, size() - 1);
}

Vector3d PLKnot::point_at(double s) const {
  const int i = segment_of(s);
  const double len = arc_[i + 1] - arc_[i];
  const double t = std::clamp((s - arc_[i]) / len, 0.0, 1.0);
  return segment_start(i) + t * (segment_end(i) - segment_start(i));
}

double PLKnot::arc_distance(double s, double t) const {
  const double d = std::abs(s - t);
  return std::min(d, total_length() - d);
}

double PLKnot::shortest_edge() const {
  double best = kInf;
  for (int i = 0; i < size(); ++i) best = std::min(best, arc_[i + 1] - arc_[i]);
  return best;
}

double PLKnot::min_nonadjacent_distance() const {
  const int m = size();
  double best = kInf;
  for (int i = 0; i < m; ++i)
    for (int j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      best = std::min(best, seg_dist(segment_start(i), segment_end(i), segment_start(j), segment_end(j)));
    }
  return best;
}

PLKnot PLKnot::scaled(double lambda) const {
  std::vector<Vector3d> p = pts_;
  for (auto& x : p) x *= lambda;
  return PLKnot(std::move(p));
}

PLKnot torus_knot(int p, int q, double R, double r, int m) {
  if (p < 2 || q < 2) throw ParameterError("torus knot needs p, q >= 2");
  if (std::gcd(p, q) != 1) throw ParameterError("torus knot needs gcd(p, q) = 1");
  if (!(0 < r && r < R)) throw ParameterError("torus knot needs 0 < r < R");
  if (m < 12 * std::max(p, q)) throw ParameterError("torus knot needs m >= 12 max(p, q)");
  const int along = std::min(p, q), around = std::max(p, q);
  std::vector<Vector3d> pts;
  for (int i = 0; i < m; ++i) {
    const double t = 2 * M_PI * i / m;
    const double rho = R + r * std::cos(around * t);
    pts.emplace_back(rho * std::cos(along * t), rho * std::sin(along * t), r * std::sin(around * t));
  }
  return PLKnot(std::move(pts));
}

PLKnot regular_polygon(int m, double radius) {
  if (m < 3) throw ParameterError("polygon needs at least 3 vertices");
  std::vector<Vector3d> pts;
  for (int i = 0; i < m; ++i) {
    const double t = 2 * M_PI * i / m;
    pts.emplace_back(radius * std::cos(t), radius * std::sin(t), 0.0);
  }
  return PLKnot(std::move(pts));
}

PLKnot unit_square_knot() {
  return PLKnot({Vector3d(0, 0, 0), Vector3d(1, 0, 0), Vector3d(1, 1, 0), Vector3d(0, 1, 0)});
}

// ------------------------------------------------------------ distortion

namespace {

// O(1) bounding boxes of vertex index ranges.
class RangeBox {
 public:
  explicit RangeBox(const std::vector<Vector3d>& p) {
    const int m = static_cast<int>(p.size());
    int levels = 1;
    while ((1 << levels) <= m) ++levels;
    lo_.assign(levels, std::vector<Vector3d>(m));
    hi_.assign(levels, std::vector<Vector3d>(m));
    lo_[0] = p;
    hi_[0] = p;
    for (int l = 1; l < levels; ++l)
      for (int i = 0; i + (1 << l) <= m; ++i) {
        lo_[l][i] = lo_[l - 1][i].cwiseMin(lo_[l - 1][i + (1 << (l - 1))]);
        hi_[l][i] = hi_[l - 1][i].cwiseMax(hi_[l - 1][i + (1 << (l - 1))]);
      }
  }
  // Inclusive range [a, b], a <= b.
  void query(int a, int b, Vector3d& lo, Vector3d& hi) const {
    int l = 0;
    while ((2 << l) <= b - a + 1) ++l;
    lo = lo_[l][a].cwiseMin(lo_[l][b - (1 << l) + 1]);
    hi = hi_[l][a].cwiseMax(hi_[l][b - (1 << l) + 1]);
  }

 private:
  std::vector<std::vector<Vector3d>> lo_, hi_;
};

struct ArcPair {
  double a0, a1, b0, b1;
  double upper;
  bool operator<(const ArcPair& o) const {
    if (upper != o.upper) return upper < o.upper;
    if (a0 != o.a0) return a0 > o.a0;
    return b0 > o.b0;
  }
};

class Distortion {
 public:
  explicit Distortion(const PLKnot& K) : K_(K), box_(K.points()), L_(K.total_length()) {
    const int m = K.size();
    vs_.resize(m);
    turn_prefix_.assign(m + 1, 0.0);
    for (int i = 0; i < m; ++i) {
      vs_[i] = K.vertex_arc(i);
      turn_prefix_[i + 1] = turn_prefix_[i] + K.turning(i);
    }
  }

  double ratio(double s, double t) const {
    const double chord = (K_.point_at(s) - K_.point_at(t)).norm();
    if (chord <= 0) return 0.0;
    return K_.arc_distance(s, t) / chord;
  }

  // Total turning at vertices strictly inside (x, y), 0 <= x <= y <= L.
  double turning_open(double x, double y) const {
    const auto first = std::upper_bound(vs_.begin(), vs_.end(), x) - vs_.begin();
    const auto last = std::lower_bound(vs_.begin(), vs_.end(), y) - vs_.begin();
    if (last <= first) return 0.0;
    return turn_prefix_[last] - turn_prefix_[first];
  }

  void arc_box(double s0, double s1, Vector3d& lo, Vector3d& hi) const {
    const Vector3d p = K_.point_at(s0), q = K_.point_at(s1);
    lo = p.cwiseMin(q);
    hi = p.cwiseMax(q);
    const int first = static_cast<int>(std::upper_bound(vs_.begin(), vs_.end(), s0) - vs_.begin());
    const int last = static_cast<int>(std::lower_bound(vs_.begin(), vs_.end(), s1) - vs_.begin()) - 1;
    if (first <= last) {
      Vector3d vl, vh;
      box_.query(first, last, vl, vh);
      lo = lo.cwiseMin(vl);
      hi = hi.cwiseMax(vh);
    }
  }

  double upper(const ArcPair& p) const {
    double best = kInf;
    // Near bound: any arc containing both pieces with total turning tau < pi
    // has chord >= cos(tau/2) * arclength.
    const double end = std::max(p.a1, p.b1);
    const double tau1 = turning_open(p.a0, end);
    // The other way round: [b0, L] then through vertex 0 to a1.
    const double tau2 = turning_open(p.b0, L_) + K_.turning(0) + turning_open(0.0, p.a1);
    const double tau = std::min(tau1, tau2);
    if (tau < M_PI) best = 1.0 / std::cos(tau / 2);
    if (p.a0 == p.b0 && p.a1 == p.b1) return best;
    // Far bound: largest intrinsic distance over smallest chord.
    const double dmin = std::max({0.0, p.b0 - p.a1, p.a0 - p.b1});
    const double dmax = std::max(p.b1 - p.a0, p.a1 - p.b0);
    double kmax;
    if (dmin <= L_ / 2 && L_ / 2 <= dmax) kmax = L_ / 2;
    else kmax = std::max(std::min(dmin, L_ - dmin), std::min(dmax, L_ - dmax));
    double gap;
    const int sa = K_.segment_of(p.a0), sb = K_.segment_of(p.b0);
    if (sa == K_.segment_of(std::nextafter(p.a1, 0.0)) && sb == K_.segment_of(std::nextafter(p.b1, 0.0))) {
      gap = seg_dist(K_.point_at(p.a0), K_.point_at(p.a1), K_.point_at(p.b0), K_.point_at(p.b1));
    } else {
      Vector3d alo, ahi, blo, bhi;
      arc_box(p.a0, p.a1, alo, ahi);
      arc_box(p.b0, p.b1, blo, bhi);
      gap = (alo - bhi).cwiseMax(blo - ahi).cwiseMax(0.0).norm();
    }
    if (gap > 0) best = std::min(best, kmax / gap);
    return best;
  }

  // Ratio at a few representative points of the pair.
  std::pair<double, std::pair<double, double>> probe(const ArcPair& p) const {
    std::pair<double, std::pair<double, double>> best{0.0, {0.0, 0.0}};
    auto take = [&](double s, double t) {
      const double r = ratio(s, t);
      if (r > best.first) best = {r, {s, t}};
    };
    const bool same = p.a0 == p.b0 && p.a1 == p.b1;
    const double ma = 0.5 * (p.a0 + p.a1), mb = 0.5 * (p.b0 + p.b1);
    if (same) {
      const double q = 0.25 * (p.a1 - p.a0);
      take(ma - q, ma + q);
    } else {
      take(ma, mb);
      if (p.a1 == p.b0) {
        const double d = 0.5 * std::min(p.a1 - p.a0, p.b1 - p.b0);
        take(p.a1 - d, p.b0 + d);
      }
      if (p.a0 == 0 && p.b1 == L_) {
        const double d = 0.5 * std::min(p.a1 - p.a0, p.b1 - p.b0);
        take(p.a0 + d, p.b1 - d);
      }
    }
    return best;
  }

  double length() const { return L_; }

 private:
  const PLKnot& K_;
  RangeBox box_;
  double L_;
  std::vector<double> vs_;
  std::vector<double> turn_prefix_;
};

}  // namespace

DistortionInterval distortion(const PLKnot& K, double tol, std::size_t budget) {
  if (!(tol > 0)) throw ParameterError("distortion needs tol > 0");
  Distortion D(K);
  const double L = D.length();
  DistortionInterval out;
  out.lo = 1.0;
  std::priority_queue<ArcPair> heap;
  auto push = [&](ArcPair p, double parent_upper) {
    ++out.evaluations;
    p.upper = std::min(parent_upper, D.upper(p));
    const auto [r, at] = D.probe(p);
    if (r > out.lo) {
      out.lo = r;
      out.witness = at;
    }
    heap.push(p);
  };
  push({0.0, L, 0.0, L, kInf}, kInf);
  while (!heap.empty()) {
    const ArcPair top = heap.top();
    out.hi = std::max(out.lo, top.upper);
    if (top.upper <= out.lo * (1 + tol)) return out;
    if (out.evaluations >= budget)
      throw BudgetError("distortion exceeded its evaluation budget", out.lo, out.hi);
    heap.pop();
    const bool same = top.a0 == top.b0 && top.a1 == top.b1;
    if (same) {
      const double m = 0.5 * (top.a0 + top.a1);
      push({top.a0, m, top.a0, m, 0}, top.upper);
      push({top.a0, m, m, top.a1, 0}, top.upper);
      push({m, top.a1, m, top.a1, 0}, top.upper);
    } else if (top.a1 - top.a0 >= top.b1 - top.b0) {
      const double m = 0.5 * (top.a0 + top.a1);
      push({top.a0, m, top.b0, top.b1, 0}, top.upper);
      push({m, top.a1, top.b0, top.b1, 0}, top.upper);
    } else {
      const double m = 0.5 * (top.b0 + top.b1);
      push({top.a0, top.a1, top.b0, m, 0}, top.upper);
      push({top.a0, top.a1, m, top.b1, 0}, top.upper);
    }
  }
  out.hi = out.lo;
  return out;
}

double distortion_sampled(const PLKnot& K, int samples) {
  const double L = K.total_length();
  std::vector<Vector3d> pts(samples);
  for (int i = 0; i < samples; ++i) pts[i] = K.point_at(L * i / samples);
  double best = 0;
  for (int i = 0; i < samples; ++i)
    for (int j = i + 1; j < samples; ++j) {
      const double chord = (pts[i] - pts[j]).norm();
      if (chord > 0) best = std::max(best, K.arc_distance(L * i / samples, L * j / samples) / chord);
    }
  return best;
}

// ------------------------------------------------------------ conformal length

double length_in_ball(const PLKnot& K, const Vector3d& x, double r) {
  double total = 0;
  const double r2 = r * r * (1 + 1e-12);
  for (int i = 0; i < K.size(); ++i) {
    const Vector3d p = K.segment_start(i), d = K.segment_end(i) - p;
    const Vector3d w = p - x;
    const double a = d.squaredNorm(), b = 2 * w.dot(d), c = w.squaredNorm() - r2;
    const double disc = b * b - 4 * a * c;
    if (disc <= 0) continue;
    const double sq = std::sqrt(disc);
    const double t0 = std::max(0.0, (-b - sq) / (2 * a)), t1 = std::min(1.0, (-b + sq) / (2 * a));
    if (t1 > t0) total += (t1 - t0) * std::sqrt(a);
  }
  return total;
}

ConformalResult conformal_length(const PLKnot& K, std::size_t budget, std::uint64_t seed) {
  if (budget < 1000) throw ParameterError("conformal_length needs budget >= 1000");
  const int m = K.size();
  ConformalResult best;
  auto eval = [&](const Vector3d& x, double r) {
    if (best.evaluations >= budget || !(r > 0)) return false;
    ++best.evaluations;
    const double v = length_in_ball(K, x, r) / r;
    if (v > best.lower) {
      best.lower = v;
      best.center = x;
      best.radius = r;
    }
    return true;
  };

  // Candidate centres, in a fixed order; on-curve centres are flagged.
  std::vector<std::pair<Vector3d, bool>> centres;
  Vector3d lo = K.vertex(0), hi = K.vertex(0), centroid = Vector3d::Zero();
  for (const auto& p : K.points()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
    centroid += p;
  }
  centres.push_back({0.5 * (lo + hi), false});
  centres.push_back({centroid / m, false});
  const int picks = std::min(m, 64);
  for (int i = 0; i < picks; ++i) centres.push_back({K.vertex(i * m / picks), true});
  for (int i = 0; i < picks; ++i) {
    const int s = i * m / picks;
    centres.push_back({0.5 * (K.segment_start(s) + K.segment_end(s)), true});
  }
  Rng rng(seed);
  for (int i = 0; i < 64; ++i) {
    const int a = static_cast<int>(rng.below(m)), b = static_cast<int>(rng.below(m));
    centres.push_back({0.5 * (K.vertex(a) + K.vertex(b)), false});
  }

  std::vector<double> dist(m);
  for (const auto& [x, on_curve] : centres) {
    for (int i = 0; i < m; ++i) dist[i] = (K.vertex(i) - x).norm();
    std::sort(dist.begin(), dist.end());
    if (on_curve) {
      // Smallest positive vertex distance: the ball holds a diameter of arc.
      const auto pos = std::upper_bound(dist.begin(), dist.end(), 1e-12 * (hi - lo).norm());
      if (pos != dist.end() && !eval(x, *pos)) return best;
    }
    for (int q = 1; q <= 16; ++q) {
      const int idx = std::min(m - 1, q * m / 16 - (q == 16 ? 1 : 0));
      if (!eval(x, dist[idx])) return best;
    }
  }

  // Coordinate descent on (x, r) from the best candidate.
  Vector3d x = best.center;
  double r = best.radius;
  double step = 0.1 * r;
  while (step > 1e-9 * r) {
    bool improved = false;
    for (int c = 0; c < 4 && !improved; ++c)
      for (int sign = -1; sign <= 1 && !improved; sign += 2) {
        Vector3d y = x;
        double s = r;
        if (c < 3) y[c] += sign * step;
        else s += sign * step;
        const double before = best.lower;
        if (!eval(y, s)) return best;
        if (best.lower > before) {
          x = y;
          r = s;
          improved = true;
        }
      }
    if (!improved) step *= 0.5;
  }
  return best;
}

Lemma41Check check_lemma41(const PLKnot& K, double tol, std::size_t convol_budget) {
  Lemma41Check out;
  out.convol_lower = conformal_length(K, convol_budget, 0).lower;
  out.distor = distortion(K, tol);
  out.holds = out.convol_lower <= 4 * out.distor.hi * (1 + 1e-12);
  if (!out.holds)
    std::fprintf(stderr, "conformal length %.12g exceeds 4 x distortion %.12g\n", out.convol_lower, out.distor.hi);
  return out;
}

}  // namespace thick
