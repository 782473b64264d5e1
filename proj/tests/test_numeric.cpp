#include <cmath>
#include <vector>

#include "bargain/numeric.hpp"
#include "doctest.h"

using namespace bargain;

TEST_SUITE("numeric") {

TEST_CASE("sigmoid reference values") {
  // Frozen by direct evaluation of 1/(1+exp(-x)).
  CHECK(sigmoid(0.5) == doctest::Approx(0.6224593312018546).epsilon(1e-12));
  CHECK(sigmoid(1.7) == doctest::Approx(0.8455347349164652).epsilon(1e-12));
  CHECK(sigmoid(-1.5) == doctest::Approx(0.18242552380635635).epsilon(1e-12));
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(40.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sigmoid(-40.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(sigmoid(-700.0) >= 0.0);
  CHECK(sigmoid(700.0) <= 1.0);
}

TEST_CASE("clip") {
  CHECK(clip(0.5, 0.0, 1.0) == 0.5);
  CHECK(clip(-2.0, 0.0, 1.0) == 0.0);
  CHECK(clip(3.0, 0.0, 1.0) == 1.0);
  CHECK(clip(0.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("normal cdf reference values") {
  CHECK(norm_cdf(0.0) == 0.5);
  CHECK(norm_cdf(2.0 / 3.0) == doctest::Approx(0.7475074624530771).epsilon(1e-12));
  CHECK(norm_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-12));
  CHECK(norm_cdf(-1.96) == doctest::Approx(0.024997895148220435).epsilon(1e-12));
  CHECK(norm_cdf(8.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("normal pdf reference values") {
  CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-12));
  CHECK(norm_pdf(1.0) == doctest::Approx(0.24197072451914337).epsilon(1e-12));
}

TEST_CASE("normal quantile inverts the cdf") {
  CHECK(norm_ppf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(norm_ppf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
  CHECK(norm_ppf(0.025) == doctest::Approx(-1.959963984540054).epsilon(1e-9));
  for (double p = 0.001; p < 1.0; p += 0.013) {
    CHECK(norm_cdf(norm_ppf(p)) == doctest::Approx(p).epsilon(1e-10));
  }
  for (double z = -5.0; z <= 5.0; z += 0.25) {
    CHECK(norm_ppf(norm_cdf(z)) == doctest::Approx(z).epsilon(1e-8));
  }
}

TEST_CASE("softmax basics") {
  auto u = softmax({1.0, 1.0, 1.0});
  CHECK(u[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(u[1] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(u[2] == doctest::Approx(1.0 / 3).epsilon(1e-12));

  auto v = softmax({0.0, 1.0});
  CHECK(v[0] + v[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(v[1] > v[0]);

  // Large logits must not overflow.
  auto w = softmax({1000.0, 1001.0});
  CHECK(w[1] > w[0]);
  CHECK(std::isfinite(w[0]));
}

TEST_CASE("softmax temperature flattens") {
  std::vector<double> logits = {-0.2, 0.5, -0.9675444679663242};
  auto base = softmax(logits);
  auto flat = softmax(logits, 2.5);
  // Frozen by direct evaluation of exp/sum.
  CHECK(base[0] == doctest::Approx(0.28752949091626523).epsilon(1e-12));
  CHECK(base[1] == doctest::Approx(0.579013290810237).epsilon(1e-12));
  CHECK(base[2] == doctest::Approx(0.1334572182734978).epsilon(1e-12));
  CHECK(flat[0] == doctest::Approx(0.3269290837450893).epsilon(1e-12));
  CHECK(flat[1] == doctest::Approx(0.4325696172232902).epsilon(1e-12));
  CHECK(flat[2] == doctest::Approx(0.24050129903162054).epsilon(1e-12));
  // Flatter: max goes down, min goes up.
  CHECK(flat[1] < base[1]);
  CHECK(flat[2] > base[2]);
}

TEST_CASE("composite simpson is exact on cubics") {
  auto f = [](double x) { return 3.0 * x * x * x - x * x + 2.0; };
  // Antiderivative: (3/4)x^4 - x^3/3 + 2x on [0, 2] -> 12 - 8/3 + 4.
  double expect = 12.0 - 8.0 / 3.0 + 4.0;
  CHECK(simpson(f, 0.0, 2.0, 9) == doctest::Approx(expect).epsilon(1e-13));
  CHECK(simpson(f, 0.0, 2.0, 3) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("composite simpson converges on smooth integrands") {
  auto f = [](double x) { return norm_pdf(x); };
  double ref = norm_cdf(2.0) - norm_cdf(-1.0);
  double coarse = simpson(f, -1.0, 2.0, 9);
  double fine = simpson(f, -1.0, 2.0, 129);
  CHECK(std::fabs(fine - ref) < 1e-8);
  CHECK(std::fabs(coarse - ref) < 1e-4);
  CHECK(std::fabs(fine - ref) < std::fabs(coarse - ref));
}

TEST_CASE("mean") {
  CHECK(mean({1.0, 2.0, 3.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS(mean({}));
}

}  // TEST_SUITE
