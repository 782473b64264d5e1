#include "bargain/rng.hpp"

#include <cmath>
#include <stdexcept>

#include "bargain/numeric.hpp"

namespace bargain {

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  // u1 in (0, 1] so the log is finite.
  double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

double Rng::normal(double mu, double sigma) { return mu + sigma * normal(); }

double Rng::gamma(double shape) {
  if (shape < 1.0) {
    double u = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  // Marsaglia-Tsang squeeze.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double Rng::beta(double a, double b) {
  double x = gamma(a);
  double y = gamma(b);
  return x / (x + y);
}

double Rng::truncated_normal(double mu, double sigma, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("truncated_normal: empty interval");
  if (sigma <= 0.0) return clip(mu, lo, hi);
  double alpha = norm_cdf((lo - mu) / sigma);
  double beta_ = norm_cdf((hi - mu) / sigma);
  if (beta_ - alpha < 1e-300) {
    // Interval lies in an extreme tail; fall back to the nearer endpoint.
    return (std::abs(lo - mu) < std::abs(hi - mu)) ? lo : hi;
  }
  double p = alpha + uniform() * (beta_ - alpha);
  return clip(mu + sigma * norm_ppf(p), lo, hi);
}

std::size_t Rng::categorical(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) throw std::invalid_argument("categorical: no positive weight");
  double target = uniform() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (target < cum) return i;
  }
  return weights.size() - 1;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  // Rejection to avoid modulo bias.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  for (;;) {
    std::uint64_t v = next_u64();
    if (v < limit) return v % n;
  }
}

}  // namespace bargain
