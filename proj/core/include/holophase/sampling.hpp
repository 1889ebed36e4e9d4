#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "holophase/function_spec.hpp"
#include "holophase/types.hpp"

namespace holophase {

struct SegmentSpec {
  Complex midpoint{0.0, 0.0};
  double half_length = 1.0;
  double direction_angle = 0.0;  // beta, radians

  // Point at parameter t in (-1, 1): midpoint + half_length e^{i beta} t.
  Complex point(double t) const;
  void validate() const;
};

// A base segment I and its alpha-rotation about the midpoint of I.
struct SegmentPair {
  SegmentSpec base;
  double rotation_angle = 0.0;  // alpha; must avoid {0, pi} mod 2 pi

  void validate() const;
};

// The affine substitution z -> z0 + r e^{i beta} z that pulls a segment
// pair back to the canonical configuration I = (-1,1), I_alpha =
// e^{i alpha}(-1,1).
struct AffineMap {
  Complex offset{0.0, 0.0};
  Complex factor{1.0, 0.0};

  Complex operator()(Complex z) const { return offset + factor * z; }
};

struct ModulusTrace {
  enum class Domain { segment, circle };

  Domain domain = Domain::circle;
  double rho = 1.0;          // circle
  SegmentSpec segment{};     // segment
  double pair_alpha = 0.0;   // rotation angle of the pair it came from
  std::string leg;           // "I" or "Ialpha" for segment traces

  std::vector<double> params;  // strictly increasing
  std::vector<double> values;  // |f| >= 0, same length

  void validate() const;
};

std::pair<AffineMap, SegmentPair> normalize_segment_pair(
    const SegmentPair& pair);

// Modulus traces on both segments of the pair at n Chebyshev parameters
// in (-1, 1) (endpoints excluded); first trace is I, second I_alpha.
std::pair<ModulusTrace, ModulusTrace> sample_segment(const FunctionSpec& spec,
                                                     const SegmentPair& pair,
                                                     int n_points);

// Modulus trace on the circle of radius rho in (0, 1] at n uniform angles.
// rho = 1 goes through the boundary radial limit.
ModulusTrace sample_circle(const FunctionSpec& spec, double rho, int n_points);

// Multiplicative perturbation values * (1 + level * u), u uniform in
// [-1, 1], deterministic per seed; values clamped at 0.
ModulusTrace add_noise(const ModulusTrace& trace, double level,
                       std::uint64_t seed);

}  // namespace holophase
