#pragma once

#include <vector>

namespace bargain {

double sigmoid(double x);
double clip(double x, double lo, double hi);

double norm_pdf(double z);
double norm_cdf(double z);
// Inverse standard normal CDF (Acklam's rational approximation plus one
// Halley refinement); accurate to ~1e-14 over (0, 1).
double norm_ppf(double p);

// softmax(logits / temperature)
std::vector<double> softmax(const std::vector<double>& logits, double temperature = 1.0);

// Composite Simpson with an odd node count over [a, b].
template <typename F>
double simpson(F f, double a, double b, int nodes) {
  const int n = nodes;
  const double h = (b - a) / static_cast<double>(n - 1);
  double sum = f(a) + f(b);
  for (int i = 1; i < n - 1; ++i) {
    sum += f(a + h * i) * ((i % 2 == 1) ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

double mean(const std::vector<double>& xs);

}  // namespace bargain
