#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace thick {

// Seeded generator with platform-independent derived distributions.
// std::uniform_real_distribution and friends are implementation-defined, so
// every draw here is built directly from the raw 64-bit engine output.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() { return engine_(); }
  double uniform01();                       // [0, 1)
  double uniform(double lo, double hi);
  std::size_t below(std::size_t n);         // uniform in [0, n)
  double normal();
  Eigen::VectorXd unit_vector(int n);
  Eigen::VectorXd in_ball(int n, double radius);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

  // Independent child stream; used to give each trial or cell its own seed.
  Rng fork(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace thick
