#include "thick/construct.hpp"

#include "thick/error.hpp"
#include "thick/rng.hpp"
#include "thick/stats.hpp"

#include <algorithm>
#include <cmath>

namespace thick {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd axis(int n, int i) {
  VectorXd e = VectorXd::Zero(n);
  e[i % n] = 2.0;
  return e;
}

// Centres 2 e_i for i in [first, first + count), shifted so their centroid is 0.
std::vector<VectorXd> centred_axes(int n, int first, int count) {
  std::vector<VectorXd> c;
  VectorXd mean = VectorXd::Zero(n);
  for (int i = 0; i < count; ++i) {
    c.push_back(axis(n, first + i));
    mean += c.back();
  }
  mean /= count;
  for (auto& x : c) x -= mean;
  return c;
}

Points draw(Rng& rng, const std::vector<VectorXd>& centres) {
  const int n = static_cast<int>(centres.front().size());
  Points P(n, static_cast<Eigen::Index>(centres.size()));
  for (std::size_t i = 0; i < centres.size(); ++i) P.col(i) = centres[i] + rng.in_ball(n, 1.0);
  return P;
}

// Distance between the affine hulls of A and B.
double affine_distance(const Points& A, const Points& B) {
  const Eigen::Index n = A.rows();
  MatrixXd M(n, (A.cols() - 1) + (B.cols() - 1));
  for (Eigen::Index i = 1; i < A.cols(); ++i) M.col(i - 1) = A.col(i) - A.col(0);
  for (Eigen::Index i = 1; i < B.cols(); ++i) M.col(A.cols() - 2 + i) = -(B.col(i) - B.col(0));
  const VectorXd rhs = B.col(0) - A.col(0);
  if (M.cols() == 0) return rhs.norm();
  const VectorXd t = M.colPivHouseholderQr().solve(rhs);
  return (M * t - rhs).norm();
}

MatrixXd orthonormal_directions(const Points& P) {
  MatrixXd D(P.rows(), P.cols() - 1);
  for (Eigen::Index i = 1; i < P.cols(); ++i) D.col(i - 1) = P.col(i) - P.col(0);
  return Eigen::HouseholderQR<MatrixXd>(D).householderQ() * MatrixXd::Identity(P.rows(), D.cols());
}

}  // namespace

Probability estimate_bad_probability(Scenario scenario, int k, int n, double eps, std::size_t trials,
                                     std::uint64_t seed, int J) {
  if (trials < 10000) throw ParameterError("estimate_bad_probability needs at least 10^4 trials");
  if (k < 1 || n < 2 * k + 1) throw ParameterError("estimate_bad_probability needs k >= 1 and n >= 2k + 1");
  if (eps < 0) throw ParameterError("eps must be nonnegative");
  Rng rng(seed);
  std::size_t hits = 0;

  switch (scenario) {
    case Scenario::pair:
    case Scenario::plane_pair: {
      const auto c1 = centred_axes(n, 0, k + 1);
      const auto c2 = centred_axes(n, k, k + 1);
      for (std::size_t t = 0; t < trials; ++t) {
        const Points A = draw(rng, c1), B = draw(rng, c2);
        if (scenario == Scenario::pair) hits += simplex_distance(A, B) < eps;
        else hits += affine_distance(A, B) < 2 * eps;
      }
      break;
    }
    case Scenario::family: {
      if (J < 3) throw ParameterError("family scenario needs J >= 3");
      const int V = J * k;
      const double rho = 1.0 / std::sin(M_PI / V);  // neighbouring centres 2 apart
      std::vector<VectorXd> centres;
      for (int v = 0; v < V; ++v) {
        VectorXd c = VectorXd::Zero(n);
        c[0] = rho * std::cos(2 * M_PI * v / V);
        c[1] = rho * std::sin(2 * M_PI * v / V);
        centres.push_back(c);
      }
      std::vector<Points> fam(J, Points(n, k + 1));
      for (std::size_t t = 0; t < trials; ++t) {
        const Points P = draw(rng, centres);
        for (int j = 0; j < J; ++j)
          for (int i = 0; i <= k; ++i) fam[j].col(i) = P.col((j * k + i) % V);
        hits += family_minimax(fam, 1e-9).value < eps;
      }
      break;
    }
    case Scenario::plane_near_intersection: {
      std::vector<VectorXd> c1{VectorXd::Zero(n)}, c2{VectorXd::Zero(n)};
      for (int i = 0; i < k; ++i) {
        c1.push_back(axis(n, i));
        c2.push_back(axis(n, k + i));
      }
      for (std::size_t t = 0; t < trials; ++t) {
        Points A = draw(rng, c1);
        Points B = draw(rng, c2);
        B.col(0) = A.col(0);
        const MatrixXd Q1 = orthonormal_directions(A), Q2 = orthonormal_directions(B);
        const Eigen::JacobiSVD<MatrixXd> svd(Q1.transpose() * Q2);
        const double cos_min = std::min(1.0, svd.singularValues()[0]);
        const double theta = std::acos(cos_min);
        const double s = std::sin(theta / 2);
        hits += s <= 0 || eps / s > kIntersectionReach;
      }
      break;
    }
  }
  const auto [lo, hi] = wilson95(hits, trials);
  return {static_cast<double>(hits) / static_cast<double>(trials), lo, hi, hits, trials};
}

TailEstimate inverse_norm_tail(int d, double delta, std::size_t trials, std::uint64_t seed) {
  if (d < 1) throw ParameterError("inverse_norm_tail needs d >= 1");
  if (!(delta > 0 && delta < 1)) throw ParameterError("delta must lie in (0, 1)");
  if (trials < 1) throw ParameterError("inverse_norm_tail needs trials >= 1");
  Rng rng(seed);
  std::vector<double> dets(trials);
  for (auto& x : dets) {
    const VectorXd v = rng.in_ball(d * d, 1.0);
    x = std::abs(Eigen::Map<const MatrixXd>(v.data(), d, d).determinant());
  }
  const std::size_t idx = std::min(trials - 1, static_cast<std::size_t>(std::floor(delta * trials)));
  std::nth_element(dets.begin(), dets.begin() + idx, dets.end());
  return {dets[idx], dets[idx] / delta};
}

}  // namespace thick
