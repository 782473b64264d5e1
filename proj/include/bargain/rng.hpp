#pragma once

#include <cstdint>
#include <vector>

namespace bargain {

// Counter-based stream built on the splitmix64 mixer. Streams are keyed
// directly on integer seeds, so two streams with different keys are
// independent by construction and a stream's output depends only on its key
// and call sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // [0, 1)
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller; consumes exactly two uniforms per call.
  double normal();
  double normal(double mu, double sigma);

  double beta(double a, double b);

  // Inverse-CDF sampler; every draw lies in [lo, hi].
  double truncated_normal(double mu, double sigma, double lo, double hi);

  // Index draw proportional to non-negative weights (need not be normalized).
  std::size_t categorical(const std::vector<double>& weights);

  std::uint64_t uniform_index(std::uint64_t n);

 private:
  double gamma(double shape);

  std::uint64_t state_;
};

}  // namespace bargain
