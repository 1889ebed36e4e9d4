#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "holophase/generators.hpp"
#include "holophase/sampling.hpp"

using namespace holophase;

namespace {

SegmentPair canonical_pair(double alpha) {
  SegmentPair pair;
  pair.base = SegmentSpec{Complex{0.0, 0.0}, 1.0, 0.0};
  pair.rotation_angle = alpha;
  return pair;
}

FunctionSpec identity_spec() {
  FunctionSpec spec;
  spec.kind = SpecKind::power_series;
  spec.origin_order = 1;
  return spec;
}

FunctionSpec exp_spec() {
  FunctionSpec spec;
  spec.kind = SpecKind::power_series;
  spec.exponent_coeffs = {Complex{0.0, 0.0}, Complex{1.0, 0.0}};
  return spec;
}

}  // namespace

TEST_CASE("normalize_segment_pair: canonical pair maps to itself") {
  const auto [map, canonical] = normalize_segment_pair(canonical_pair(1.0));
  CHECK(std::abs(map.offset) < 1e-15);
  CHECK(std::abs(map.factor - Complex{1.0, 0.0}) < 1e-15);
  CHECK(canonical.rotation_angle == doctest::Approx(1.0));
}

TEST_CASE("normalize_segment_pair: general affine substitution") {
  SegmentPair pair;
  pair.base = SegmentSpec{Complex{2.0, 1.0}, 0.5, kPi / 4.0};
  pair.rotation_angle = std::sqrt(2.0);
  const auto [map, canonical] = normalize_segment_pair(pair);
  CHECK(std::abs(map.offset - Complex{2.0, 1.0}) < 1e-15);
  CHECK(std::abs(map.factor - 0.5 * std::polar(1.0, kPi / 4.0)) < 1e-15);
  CHECK(std::abs(map(Complex{1.0, 0.0}) - pair.base.point(1.0)) < 1e-15);
}

TEST_CASE("normalize_segment_pair: degenerate rotations rejected") {
  CHECK_THROWS_AS(normalize_segment_pair(canonical_pair(0.0)), DataError);
  CHECK_THROWS_AS(normalize_segment_pair(canonical_pair(kPi)), DataError);
}

TEST_CASE("sample_segment: round trip through the affine pullback") {
  // Sampling f on the original segments equals sampling the pulled-back
  // function on the canonical pair.
  SegmentPair pair;
  pair.base = SegmentSpec{Complex{0.1, -0.2}, 0.4, 0.9};
  pair.rotation_angle = std::sqrt(2.0);

  const FunctionSpec f = exp_spec();
  const auto [orig_I, orig_Ia] = sample_segment(f, pair, 65);

  // Pull back by hand: h(z) = exp(z0 + r e^{i beta} z) = e^{z0} exp(c z).
  const auto [map, canonical] = normalize_segment_pair(pair);
  FunctionSpec h;
  h.kind = SpecKind::power_series;
  h.exponent_coeffs = {map.offset, map.factor};
  const auto [can_I, can_Ia] = sample_segment(h, canonical, 65);

  for (std::size_t i = 0; i < orig_I.values.size(); ++i) {
    CHECK(orig_I.values[i] ==
          doctest::Approx(can_I.values[i]).epsilon(1e-14));
    CHECK(orig_Ia.values[i] ==
          doctest::Approx(can_Ia.values[i]).epsilon(1e-14));
  }
}

TEST_CASE("sample_segment: f(z) = z gives |t| on both legs") {
  const auto [trace_I, trace_Ia] =
      sample_segment(identity_spec(), canonical_pair(1.0), 33);
  for (std::size_t i = 0; i < trace_I.params.size(); ++i) {
    CHECK(trace_I.values[i] ==
          doctest::Approx(std::fabs(trace_I.params[i])).epsilon(1e-15));
    CHECK(trace_Ia.values[i] ==
          doctest::Approx(std::fabs(trace_I.params[i])).epsilon(1e-15));
  }
}

TEST_CASE("sample_segment: e^z on the pi/2 rotation is flat") {
  const auto [trace_I, trace_Ia] =
      sample_segment(exp_spec(), canonical_pair(kPi / 2.0), 33);
  for (std::size_t i = 0; i < trace_I.params.size(); ++i) {
    CHECK(trace_I.values[i] ==
          doctest::Approx(std::exp(trace_I.params[i])).epsilon(1e-14));
    CHECK(trace_Ia.values[i] == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("sample_segment: pointwise oracle for z^2 e^{z + i z^2}") {
  FunctionSpec spec;
  spec.kind = SpecKind::power_series;
  spec.origin_order = 2;
  spec.exponent_coeffs = {Complex{0, 0}, Complex{1, 0}, Complex{0, 1}};
  const auto [trace_I, trace_Ia] =
      sample_segment(spec, canonical_pair(std::sqrt(2.0)), 101);
  const Complex rot = std::polar(1.0, std::sqrt(2.0));
  for (std::size_t i = 0; i < trace_I.params.size(); ++i) {
    const double t = trace_I.params[i];
    const Complex z{t, 0.0};
    CHECK(trace_I.values[i] == doctest::Approx(std::abs(eval(spec, z))));
    CHECK(trace_Ia.values[i] ==
          doctest::Approx(std::abs(eval(spec, rot * t))));
  }
}

TEST_CASE("sample_circle: Blaschke trace on T is flat") {
  FunctionSpec spec;
  spec.kind = SpecKind::factored;
  spec.zeros = {{Complex{0.5, 0.2}, 1}, {Complex{-0.3, 0.1}, 2}};
  const ModulusTrace trace = sample_circle(spec, 1.0, 64);
  for (double v : trace.values) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("sample_circle: |z| on the 0.6 circle") {
  const ModulusTrace trace = sample_circle(identity_spec(), 0.6, 32);
  for (double v : trace.values) CHECK(v == doctest::Approx(0.6));
}

TEST_CASE("sample_circle: pointwise oracle for a factored spec") {
  FunctionSpec spec;
  spec.kind = SpecKind::factored;
  spec.zeros = {{Complex{0.3, 0.0}, 1}};
  spec.outer.cos_coeffs = {0.5};
  const ModulusTrace trace = sample_circle(spec, 0.6, 256);
  for (std::size_t j = 0; j < trace.params.size(); ++j) {
    const Complex z = std::polar(0.6, trace.params[j]);
    CHECK(trace.values[j] == doctest::Approx(std::abs(eval(spec, z))));
  }
}

TEST_CASE("sample_circle: zero on the circle wants deflation") {
  FunctionSpec spec;
  spec.kind = SpecKind::rational;
  spec.zeros = {{Complex{0.6, 0.0}, 1}};
  CHECK_THROWS_AS(sample_circle(spec, 0.6, 64), SingularityError);
}

TEST_CASE("add_noise: contract") {
  const ModulusTrace trace = sample_circle(exp_spec(), 0.5, 64);
  const ModulusTrace same = add_noise(trace, 0.0, 7);
  CHECK(same.values == trace.values);

  const ModulusTrace a = add_noise(trace, 1e-3, 99);
  const ModulusTrace b = add_noise(trace, 1e-3, 99);
  CHECK(a.values == b.values);

  double max_rel = 0.0;
  for (std::size_t i = 0; i < trace.values.size(); ++i)
    max_rel = std::max(max_rel, std::fabs(a.values[i] / trace.values[i] - 1.0));
  CHECK(max_rel <= 1e-3);
  CHECK(max_rel > 0.0);
}

TEST_CASE("invariant: traces are gauge invariant bit for bit") {
  GeneratorConfig cfg;
  cfg.seed = 5;
  const FunctionSpec spec = random_factored_spec(cfg, true, false);
  const FunctionSpec shifted = make_gauge_variant(spec, 0.77);
  const ModulusTrace a = sample_circle(spec, 0.6, 128);
  const ModulusTrace b = sample_circle(shifted, 0.6, 128);
  CHECK(a.values == b.values);
}

TEST_CASE("invariant: rho-scaled factor has unit trace on rho T") {
  FunctionSpec one;
  one.kind = SpecKind::rational;
  const FunctionSpec impostor =
      make_single_circle_impostor(one, Complex{0.3, 0.2}, 0.6);
  const ModulusTrace trace = sample_circle(impostor, 0.6, 128);
  for (double v : trace.values)
    CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
}
