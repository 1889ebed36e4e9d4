#include "holophase/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "holophase/rng.hpp"

namespace holophase {

Complex SegmentSpec::point(double t) const {
  return midpoint + std::polar(half_length, direction_angle) * t;
}

void SegmentSpec::validate() const {
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw DataError("segment half_length must be positive");
  if (!is_finite(midpoint) || !std::isfinite(direction_angle))
    throw DataError("segment parameters must be finite");
}

void SegmentPair::validate() const {
  base.validate();
  const double a = wrap_angle(rotation_angle);
  if (std::min({a, std::fabs(a - kPi), kTwoPi - a}) < 1e-12)
    throw DataError("segment pair rotation angle must avoid {0, pi}");
}

void ModulusTrace::validate() const {
  if (params.size() != values.size())
    throw DataError("trace parameter/value length mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!std::isfinite(params[i]) || !std::isfinite(values[i]))
      throw DataError("trace entries must be finite");
    if (values[i] < 0.0) throw DataError("trace values must be >= 0");
    if (i > 0 && !(params[i] > params[i - 1]))
      throw DataError("trace parameters must be strictly increasing");
  }
}

std::pair<AffineMap, SegmentPair> normalize_segment_pair(
    const SegmentPair& pair) {
  pair.validate();
  AffineMap map;
  map.offset = pair.base.midpoint;
  map.factor = std::polar(pair.base.half_length, pair.base.direction_angle);

  SegmentPair canonical;
  canonical.base = SegmentSpec{Complex{0.0, 0.0}, 1.0, 0.0};
  canonical.rotation_angle = pair.rotation_angle;
  return {map, canonical};
}

namespace {

// Chebyshev parameters in (-1, 1), strictly increasing, exactly symmetric
// about 0 (odd counts hit t = 0 exactly).
std::vector<double> chebyshev_parameters(int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i)
    t[i] = std::sin(kPi * (2.0 * i + 1.0 - n) / (2.0 * n));
  return t;
}

void check_poles_clear_of_segment(const FunctionSpec& spec,
                                  const SegmentSpec& segment) {
  if (spec.kind != SpecKind::rational) return;
  const Complex a = segment.point(-1.0);
  const Complex b = segment.point(1.0);
  const Complex d = b - a;
  const double len2 = std::norm(d);
  for (const auto& pole : spec.poles) {
    double t = ((pole.position - a) * std::conj(d)).real() / len2;
    t = std::clamp(t, 0.0, 1.0);
    if (std::abs(pole.position - (a + t * d)) < 1e-9)
      throw DomainError("pole on sampled segment near parameter " +
                        std::to_string(2.0 * t - 1.0));
  }
}

}  // namespace

std::pair<ModulusTrace, ModulusTrace> sample_segment(const FunctionSpec& spec,
                                                     const SegmentPair& pair,
                                                     int n_points) {
  if (n_points < 2) throw DataError("sample_segment needs n_points >= 2");
  spec.validate();
  auto [map, canonical] = normalize_segment_pair(pair);

  SegmentSpec rotated = pair.base;
  rotated.direction_angle += pair.rotation_angle;
  check_poles_clear_of_segment(spec, pair.base);
  check_poles_clear_of_segment(spec, rotated);

  const Complex rotation = std::polar(1.0, pair.rotation_angle);
  const std::vector<double> t = chebyshev_parameters(n_points);

  ModulusTrace trace_I, trace_Ia;
  trace_I.domain = trace_Ia.domain = ModulusTrace::Domain::segment;
  trace_I.segment = pair.base;
  trace_Ia.segment = rotated;
  trace_I.pair_alpha = trace_Ia.pair_alpha = pair.rotation_angle;
  trace_I.leg = "I";
  trace_Ia.leg = "Ialpha";
  trace_I.params = trace_Ia.params = t;
  trace_I.values.reserve(t.size());
  trace_Ia.values.reserve(t.size());
  // Evaluate with the gauge stripped: |f| is gauge-free mathematically, and
  // skipping the unimodular factor keeps traces bit-identical across gauges.
  FunctionSpec gauge_free = spec;
  gauge_free.gauge_phase = 0.0;
  for (double ti : t) {
    trace_I.values.push_back(std::abs(eval(gauge_free, map(Complex{ti, 0.0}))));
    trace_Ia.values.push_back(std::abs(eval(gauge_free, map(rotation * ti))));
  }
  return {trace_I, trace_Ia};
}

ModulusTrace sample_circle(const FunctionSpec& spec, double rho, int n_points) {
  if (!(rho > 0.0) || !(rho <= 1.0))
    throw DataError("sampling radius must lie in (0, 1]");
  if (n_points < 2) throw DataError("sample_circle needs n_points >= 2");
  spec.validate();

  auto near_circle = [rho](Complex p) {
    return std::fabs(std::abs(p) - rho) < kProximityTol;
  };
  if (spec.kind == SpecKind::rational || spec.kind == SpecKind::factored) {
    for (const auto& zero : spec.zeros)
      if (near_circle(zero.position))
        throw SingularityError(
            "zero on the sampling circle; deflate the trace first");
    for (const auto& pole : spec.poles)
      if (near_circle(pole.position))
        throw SingularityError(
            "pole on the sampling circle; deflate the trace first");
  }

  FunctionSpec gauge_free = spec;
  gauge_free.gauge_phase = 0.0;

  ModulusTrace trace;
  trace.domain = ModulusTrace::Domain::circle;
  trace.rho = rho;
  trace.params.resize(n_points);
  trace.values.resize(n_points);
  for (int j = 0; j < n_points; ++j) {
    const double theta = kTwoPi * j / n_points;
    trace.params[j] = theta;
    if (rho == 1.0)
      trace.values[j] = std::exp(eval_boundary_log_modulus(gauge_free, theta));
    else
      trace.values[j] = std::abs(eval(gauge_free, std::polar(rho, theta)));
  }
  return trace;
}

ModulusTrace add_noise(const ModulusTrace& trace, double level,
                       std::uint64_t seed) {
  if (!(level >= 0.0)) throw DataError("noise level must be >= 0");
  ModulusTrace out = trace;
  CounterRng rng(seed);
  for (double& v : out.values)
    v = std::max(0.0, v * (1.0 + level * rng.next_symmetric()));
  return out;
}

}  // namespace holophase
