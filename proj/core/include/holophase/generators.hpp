#pragma once

#include <cstdint>

#include "holophase/function_spec.hpp"
#include "holophase/types.hpp"

namespace holophase {

struct GeneratorConfig {
  std::uint64_t seed = 1;
  int max_zero_count = 5;
  int max_series_degree = 8;
  int max_outer_degree = 6;
  int max_atoms = 2;
  double zero_radius_min = 0.1;
  double zero_radius_max = 0.85;
  double coefficient_bound = 1.0;
  // Zeros are kept out of (avoid_radius - avoid_margin,
  // avoid_radius + avoid_margin) when avoid_radius > 0; keeps deflation
  // tests and reconstruction tests apart.
  double avoid_radius = -1.0;
  double avoid_margin = 0.05;

  void validate() const;
};

// z^k exp(phi) with phi drawn coefficient-wise from the disc of radius
// coefficient_bound; deterministic per seed.
FunctionSpec random_power_series_spec(const GeneratorConfig& cfg, int order);

// Random Nevanlinna spec e^{i gauge} B S_num O / S_den in the supported
// parametric family; with_atoms/with_denominator toggle the singular
// parts.
FunctionSpec random_factored_spec(const GeneratorConfig& cfg, bool with_atoms,
                                  bool with_denominator);

// Same modulus everywhere: adds lambda to the gauge phase.
FunctionSpec make_gauge_variant(const FunctionSpec& spec, double lambda);

// Multiplies a rational spec by the rho-scaled factor
// rho (z - a')/(rho^2 - conj(a') z): equal modulus on rho T, unequal on T.
FunctionSpec make_single_circle_impostor(const FunctionSpec& spec,
                                         Complex a_prime, double rho);

// Random rational spec with zeros/poles kept away from T and rho T.
FunctionSpec random_rational_spec(const GeneratorConfig& cfg, int max_poles);

}  // namespace holophase
