#pragma once

#include <vector>

#include "holophase/function_spec.hpp"
#include "holophase/types.hpp"

namespace holophase {

// Harmonic extension at z (|z| < r) of uniformly sampled boundary data on
// the circle of radius r, by periodic-trapezoid quadrature of the Poisson
// kernel Re((r e^{i theta} + z)/(r e^{i theta} - z)).  Spectrally accurate
// for smooth data.  samples[j] is the value at theta_j = 2 pi j / n.
double poisson_integral(const std::vector<double>& boundary_log, double radius,
                        Complex z);

// Fourier projection of uniformly sampled log-modulus data onto a trig
// polynomial of the given degree.  samples[j] at theta_j = 2 pi j / n.
TrigPolyLogModulus outer_from_log_modulus(const std::vector<double>& samples,
                                          int degree);

}  // namespace holophase
