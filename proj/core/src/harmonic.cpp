#include "holophase/harmonic.hpp"

#include <cmath>

namespace holophase {

double poisson_integral(const std::vector<double>& boundary_log, double radius,
                        Complex z) {
  if (boundary_log.size() < 2) throw DataError("poisson_integral needs samples");
  if (!(std::abs(z) < radius))
    throw DomainError("poisson_integral requires |z| < r");
  const std::size_t n = boundary_log.size();
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(boundary_log[j]))
      throw DataError("poisson_integral sample not finite");
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    const Complex w = std::polar(radius, theta);
    const double kernel = ((w + z) / (w - z)).real();
    acc += kernel * boundary_log[j];
  }
  return acc / static_cast<double>(n);
}

TrigPolyLogModulus outer_from_log_modulus(const std::vector<double>& samples,
                                          int degree) {
  const std::size_t n = samples.size();
  if (n < 2) throw DataError("outer_from_log_modulus needs samples");
  if (degree < 0 || 2 * static_cast<std::size_t>(degree) > n)
    throw DataError("projection degree must satisfy 0 <= degree <= n/2");
  for (double v : samples)
    if (!std::isfinite(v)) throw DataError("log-modulus sample not finite");

  TrigPolyLogModulus result;
  double mean = 0.0;
  for (double v : samples) mean += v;
  result.mean = mean / static_cast<double>(n);

  result.cos_coeffs.assign(degree, 0.0);
  result.sin_coeffs.assign(degree, 0.0);
  for (int k = 1; k <= degree; ++k) {
    double c = 0.0, s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
      c += samples[j] * std::cos(k * theta);
      s += samples[j] * std::sin(k * theta);
    }
    result.cos_coeffs[k - 1] = 2.0 * c / static_cast<double>(n);
    result.sin_coeffs[k - 1] = 2.0 * s / static_cast<double>(n);
  }
  return result;
}

}  // namespace holophase
