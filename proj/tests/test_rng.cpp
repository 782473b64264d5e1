#include <cmath>
#include <vector>

#include "bargain/rng.hpp"
#include "doctest.h"

using bargain::Rng;

TEST_SUITE("rng") {

TEST_CASE("same seed reproduces the same stream") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(12345), d(12345);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.uniform() == d.uniform());
    CHECK(c.normal() == d.normal());
    CHECK(c.beta(2.0, 2.0) == d.beta(2.0, 2.0));
  }
}

TEST_CASE("nearby seeds decorrelate") {
  Rng a(7), b(8);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) {
    if (a.next_u64() == b.next_u64()) ++equal;
  }
  CHECK(equal == 0);
}

TEST_CASE("uniform stays in [0,1) with correct mean") {
  Rng r(99);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  double se = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::fabs(sum / n - 0.5) < 3.0 * se);
}

TEST_CASE("uniform(lo,hi) respects bounds") {
  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform(0.2, 0.8);
    REQUIRE(u >= 0.2);
    REQUIRE(u < 0.8);
  }
}

TEST_CASE("normal moments") {
  Rng r(42);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = r.normal();
    sum += z;
    sq += z * z;
  }
  double m = sum / n;
  double v = sq / n - m * m;
  CHECK(std::fabs(m) < 3.0 / std::sqrt(static_cast<double>(n)));
  // Var(z^2) = 2 for a standard normal.
  CHECK(std::fabs(v - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("beta moments") {
  Rng r(17);
  const int n = 200000;
  double s22 = 0.0, s32 = 0.0;
  for (int i = 0; i < n; ++i) s22 += r.beta(2.0, 2.0);
  for (int i = 0; i < n; ++i) s32 += r.beta(3.0, 2.0);
  // Beta(2,2): mean 1/2, var 1/20. Beta(3,2): mean 3/5, var 1/25.
  CHECK(std::fabs(s22 / n - 0.5) < 3.0 * std::sqrt(0.05 / n));
  CHECK(std::fabs(s32 / n - 0.6) < 3.0 * std::sqrt(0.04 / n));
}

TEST_CASE("beta stays in the unit interval") {
  Rng r(5);
  for (int i = 0; i < 5000; ++i) {
    double x = r.beta(0.5, 1.5);
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
  }
}

TEST_CASE("truncated normal honors its support") {
  Rng r(11);
  for (int i = 0; i < 5000; ++i) {
    double x = r.truncated_normal(10.0, 4.0, 8.0, 12.0);
    REQUIRE(x >= 8.0);
    REQUIRE(x <= 12.0);
  }
  // Degenerate scale collapses to the clipped mean.
  CHECK(r.truncated_normal(20.0, 0.0, 8.0, 12.0) == 12.0);
  CHECK(r.truncated_normal(-3.0, 0.0, 8.0, 12.0) == 8.0);
}

TEST_CASE("truncated normal mean matches the closed form") {
  Rng r(23);
  const int n = 200000;
  double mu = 0.0, sigma = 1.0, lo = -1.0, hi = 2.0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += r.truncated_normal(mu, sigma, lo, hi);
  auto phi = [](double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); };
  auto Phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
  double a = (lo - mu) / sigma, b = (hi - mu) / sigma;
  double expect = mu + sigma * (phi(a) - phi(b)) / (Phi(b) - Phi(a));
  CHECK(std::fabs(sum / n - expect) < 0.01);
}

TEST_CASE("categorical frequencies match weights") {
  Rng r(31);
  std::vector<double> w = {0.1, 0.2, 0.3, 0.4};
  std::vector<int> counts(4, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[r.categorical(w)];
  for (int i = 0; i < 4; ++i) {
    double p = w[i];
    double se = std::sqrt(p * (1 - p) / n);
    CHECK(std::fabs(counts[i] / static_cast<double>(n) - p) < 3.0 * se);
  }
}

TEST_CASE("categorical rejects all-zero weights") {
  Rng r(1);
  std::vector<double> w = {0.0, 0.0};
  CHECK_THROWS(r.categorical(w));
}

TEST_CASE("uniform_index covers its range") {
  Rng r(77);
  std::vector<int> seen(5, 0);
  for (int i = 0; i < 5000; ++i) {
    auto k = r.uniform_index(5);
    REQUIRE(k < 5);
    ++seen[k];
  }
  for (int c : seen) CHECK(c > 0);
}

}  // TEST_SUITE
