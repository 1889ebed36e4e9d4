#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "holophase/circle_retrieval.hpp"
#include "holophase/generators.hpp"
#include "holophase/sampling.hpp"

using namespace holophase;

namespace {

FunctionSpec outer_spec(double mean, std::vector<double> cosc,
                        std::vector<double> sinc) {
  FunctionSpec spec;
  spec.kind = SpecKind::factored;
  spec.outer.mean = mean;
  spec.outer.cos_coeffs = std::move(cosc);
  spec.outer.sin_coeffs = std::move(sinc);
  return spec;
}

// Uniform-theta trace of a function given as a modulus callback.
template <typename F>
ModulusTrace synthetic_circle_trace(double rho, int n, F&& modulus) {
  ModulusTrace trace;
  trace.domain = ModulusTrace::Domain::circle;
  trace.rho = rho;
  trace.params.resize(n);
  trace.values.resize(n);
  for (int j = 0; j < n; ++j) {
    const double theta = kTwoPi * j / n;
    trace.params[j] = theta;
    trace.values[j] = modulus(theta);
  }
  return trace;
}

std::vector<Complex> small_disc_grid(double radius, int n) {
  std::vector<Complex> grid;
  grid.push_back(Complex{0.0, 0.0});
  for (int j = 1; j < n; ++j) {
    const double r = radius * j / (n - 1);
    grid.push_back(std::polar(r, 2.399963 * j));  // golden-angle spiral
  }
  return grid;
}

// Best matching of recovered zeros against truth over all permutations
// (model orders here are small enough for brute force).
double zero_match_error(std::vector<Complex> got, std::vector<Complex> want) {
  REQUIRE(got.size() == want.size());
  std::vector<std::size_t> perm(got.size());
  std::iota(perm.begin(), perm.end(), 0u);
  double best = 1e300;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
      worst = std::max(worst, std::abs(got[perm[i]] - want[i]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<Complex> flatten_zeros(const FunctionSpec& spec) {
  std::vector<Complex> out;
  for (const auto& z : spec.zeros)
    for (int i = 0; i < z.multiplicity; ++i) out.push_back(z.position);
  return out;
}

// sup |g - c f| over |z| <= radius after aligning the unimodular gauge c
// by the mean ratio on the grid.
double gauge_aligned_sup_error(const FunctionSpec& f, const FunctionSpec& g,
                               double radius) {
  const auto grid = small_disc_grid(radius, 40);
  Complex mean{0.0, 0.0};
  for (Complex z : grid) {
    const Complex fv = eval(f, z);
    if (std::abs(fv) < 1e-8) continue;
    mean += eval(g, z) / fv;
  }
  const Complex c = mean / std::abs(mean);
  double sup = 0.0;
  for (Complex z : grid)
    sup = std::max(sup, std::abs(eval(g, z) - c * eval(f, z)));
  return sup;
}

}  // namespace

TEST_CASE("RhoBlaschke: pointwise examples") {
  {
    RhoBlaschke p{0.5, {}};
    CHECK(p.eval(Complex{0.2, 0.1}) == Complex{1.0, 0.0});
    CHECK(p.eval(Complex{0.0, 0.0}) == Complex{1.0, 0.0});
  }
  {
    RhoBlaschke p{0.6, {{Complex{0.3, 0.2}, 1}}};
    CHECK(std::abs(p.eval(Complex{0.3, 0.2})) == 0.0);
  }
}

TEST_CASE("RhoBlaschke: unimodular on the rho circle") {
  RhoBlaschke p{0.6,
                {{Complex{0.3, 0.2}, 1},
                 {Complex{-0.1, 0.45}, 2},
                 {Complex{0.0, -0.52}, 1}}};
  for (int j = 0; j < 128; ++j) {
    const Complex z = std::polar(0.6, kTwoPi * j / 128);
    CHECK(std::abs(std::abs(p.eval(z)) - 1.0) < 1e-14);
    CHECK(std::fabs(p.log_modulus(z)) < 1e-14);
  }
}

TEST_CASE("RhoBlaschke: unimodular on rho T even for zeros outside") {
  // The scaled factor is unimodular on |z| = rho for every a, not only
  // |a| < rho; this is what makes the single-circle impostor work.
  RhoBlaschke p{0.6, {{Complex{0.8, 0.0}, 1}}};
  for (int j = 0; j < 64; ++j) {
    const Complex z = std::polar(0.6, kTwoPi * j / 64 + 0.013);
    CHECK(std::abs(std::abs(p.eval(z)) - 1.0) < 1e-14);
  }
}

TEST_CASE("deflate_circle_zeros: clean trace passes through") {
  const auto trace = synthetic_circle_trace(
      0.6, 512, [](double theta) { return std::exp(0.6 * std::cos(theta)); });
  const auto result = deflate_circle_zeros(trace);
  CHECK(result.circle_zeros.empty());
  REQUIRE(result.deflated.values.size() == trace.values.size());
  for (std::size_t j = 0; j < trace.values.size(); ++j)
    CHECK(result.deflated.values[j] == trace.values[j]);
}

TEST_CASE("deflate_circle_zeros: simple zero on the circle") {
  // f(z) = (z - 0.6) e^z on |z| = 0.6: modulus |0.6 e^{i theta} - 0.6|
  // times e^{0.6 cos theta}, vanishing at theta = 0.
  const auto trace = synthetic_circle_trace(0.6, 512, [](double theta) {
    const Complex z = std::polar(0.6, theta);
    return std::abs(z - 0.6) * std::exp(0.6 * std::cos(theta));
  });
  const auto result = deflate_circle_zeros(trace);
  REQUIRE(result.circle_zeros.size() == 1);
  CHECK(result.circle_zeros[0].multiplicity == 1);
  CHECK(std::abs(result.circle_zeros[0].position - Complex{0.6, 0.0}) < 1e-3);

  // Away from the refilled hole the deflated trace is the zero-free part.
  for (std::size_t j = 0; j < trace.params.size(); ++j) {
    const double theta = trace.params[j];
    if (angle_distance(theta, 0.0) < 0.2) continue;
    CHECK(result.deflated.values[j] ==
          doctest::Approx(std::exp(0.6 * std::cos(theta))).epsilon(1e-6));
  }
}

TEST_CASE("deflate_circle_zeros: double zero order") {
  const auto trace = synthetic_circle_trace(0.6, 512, [](double theta) {
    const Complex z = std::polar(0.6, theta);
    return std::abs(z - 0.6) * std::abs(z - 0.6) *
           std::exp(0.6 * std::cos(theta));
  });
  const auto result = deflate_circle_zeros(trace);
  REQUIRE(result.circle_zeros.size() == 1);
  CHECK(result.circle_zeros[0].multiplicity == 2);
  CHECK(std::abs(result.circle_zeros[0].position - Complex{0.6, 0.0}) < 1e-3);
}

TEST_CASE("deflate_circle_zeros: fractional order is refused") {
  const auto trace = synthetic_circle_trace(0.6, 512, [](double theta) {
    const Complex z = std::polar(0.6, theta);
    return std::pow(std::abs(z - 0.6), 1.5);
  });
  CHECK_THROWS_AS(deflate_circle_zeros(trace), DataError);
}

TEST_CASE("poisson_jensen_check: examples") {
  const auto grid = small_disc_grid(0.3, 20);
  {
    // Pure outer, zero free: plain Poisson reproduction.
    const auto spec = outer_spec(0.4, {0.3, -0.1, 0.05}, {0.2, 0.0, -0.07});
    CHECK(poisson_jensen_check(spec, 0.6, grid, 512) < 1e-9);
  }
  {
    // Blaschke zero inside the rho disc: the P_f factor carries it.
    FunctionSpec spec;
    spec.kind = SpecKind::factored;
    spec.zeros = {{Complex{0.3, 0.0}, 1}};
    spec.outer.mean = 0.2;
    spec.outer.cos_coeffs = {0.25};
    spec.outer.sin_coeffs = {-0.1};
    CHECK(poisson_jensen_check(spec, 0.6, grid, 512) < 1e-9);
  }
  {
    // Singular atom: S_nu is zero free in the disc, identity still exact.
    FunctionSpec spec;
    spec.kind = SpecKind::factored;
    spec.zeros = {{Complex{0.2, 0.15}, 1}};
    spec.atoms_num.atoms = {{1.0, 0.4}};
    spec.outer.mean = -0.1;
    spec.outer.cos_coeffs = {0.2, 0.1};
    spec.outer.sin_coeffs = {0.0, 0.05};
    CHECK(poisson_jensen_check(spec, 0.6, grid, 512) < 1e-9);
  }
}

TEST_CASE("verify_equivalence: gauge variants are accepted") {
  FunctionSpec f;
  f.kind = SpecKind::factored;
  f.origin_order = 1;
  f.zeros = {{Complex{0.3, 0.2}, 1}, {Complex{-0.7, 0.1}, 1}};
  f.outer.mean = 0.3;
  f.outer.cos_coeffs = {0.2, -0.1};
  f.outer.sin_coeffs = {0.15, 0.0};

  const auto g = make_gauge_variant(f, kPi / 4.0);
  const auto verdict = verify_equivalence(f, g, 0.6, 1e-8);
  CHECK(verdict.equivalent);
  CHECK(verdict.residual_T < 1e-10);
  CHECK(verdict.residual_rhoT < 1e-10);
  CHECK(std::abs(verdict.gauge - std::polar(1.0, kPi / 4.0)) < 1e-9);
}

TEST_CASE("verify_equivalence: atoms and denominators survive the gauge test") {
  FunctionSpec f;
  f.kind = SpecKind::factored;
  f.zeros = {{Complex{0.25, -0.3}, 1}};
  f.atoms_num.atoms = {{1.0, 0.4}};
  f.atoms_den.atoms = {{4.0, 0.2}};
  f.outer.mean = 0.1;
  f.outer.cos_coeffs = {0.3};
  f.outer.sin_coeffs = {0.2};

  const auto g = make_gauge_variant(f, 2.1);
  const auto verdict = verify_equivalence(f, g, 0.6, 1e-8);
  CHECK(verdict.equivalent);
  CHECK(std::abs(verdict.gauge - std::polar(1.0, 2.1)) < 1e-9);
}

TEST_CASE("verify_equivalence: single-circle impostor is rejected") {
  // g = f * rho (z - a')/(rho^2 - conj(a') z) matches |f| on rho T exactly
  // but not on T: both circles are genuinely needed.
  FunctionSpec f;
  f.kind = SpecKind::rational;
  f.zeros = {{Complex{0.3, 0.1}, 1}};
  f.poles = {};
  f.scale = Complex{1.2, -0.4};

  const auto g = make_single_circle_impostor(f, Complex{0.8, 0.0}, 0.6);
  const auto verdict = verify_equivalence(f, g, 0.6, 1e-8);
  CHECK_FALSE(verdict.equivalent);
  CHECK(verdict.residual_rhoT < 1e-10);
  CHECK(verdict.residual_T > 0.01);
}

TEST_CASE("verify_equivalence: different zero sets are inequivalent") {
  FunctionSpec f;
  f.kind = SpecKind::factored;
  f.zeros = {{Complex{0.3, 0.0}, 1}};
  FunctionSpec g;
  g.kind = SpecKind::factored;
  g.zeros = {{Complex{0.0, 0.3}, 1}};
  const auto verdict = verify_equivalence(f, g, 0.6, 1e-8);
  CHECK_FALSE(verdict.equivalent);
}

TEST_CASE("reconstruct_from_circles: zero-free data recovers the outer part") {
  const auto truth = outer_spec(0.35, {0.3, -0.12, 0.07}, {0.18, 0.05, 0.0});
  CirclePairData data;
  data.rho = 0.6;
  data.outer_trace = sample_circle(truth, 1.0, 1024);
  data.inner_trace = sample_circle(truth, 0.6, 1024);

  const auto [spec, report] = reconstruct_from_circles(data, 4);
  CHECK(report.zero_count == 0);
  CHECK(report.origin_order == 0);
  CHECK(spec.zeros.empty());
  CHECK(gauge_aligned_sup_error(truth, spec, 0.3) < 1e-9);
}

TEST_CASE("reconstruct_from_circles: single zero, trivial outer") {
  FunctionSpec truth;
  truth.kind = SpecKind::factored;
  truth.zeros = {{Complex{0.3, 0.0}, 1}};

  CirclePairData data;
  data.rho = 0.6;
  data.outer_trace = sample_circle(truth, 1.0, 1024);
  data.inner_trace = sample_circle(truth, 0.6, 1024);

  const auto [spec, report] = reconstruct_from_circles(data, 4);
  REQUIRE(report.zero_count == 1);
  CHECK(zero_match_error(flatten_zeros(spec), {Complex{0.3, 0.0}}) < 1e-8);
}

TEST_CASE("reconstruct_from_circles: five zeros and a degree-6 outer") {
  FunctionSpec truth;
  truth.kind = SpecKind::factored;
  truth.origin_order = 0;
  truth.zeros = {{Complex{0.3, 0.05}, 1},
                 {Complex{-0.2, 0.4}, 1},
                 {Complex{0.05, -0.45}, 1},
                 {Complex{0.7, -0.2}, 1},
                 {Complex{-0.55, -0.5}, 1}};
  truth.outer.mean = 0.2;
  truth.outer.cos_coeffs = {0.25, -0.1, 0.07, 0.0, 0.03, -0.02};
  truth.outer.sin_coeffs = {0.15, 0.08, 0.0, -0.05, 0.01, 0.02};

  CirclePairData data;
  data.rho = 0.6;
  data.outer_trace = sample_circle(truth, 1.0, 1024);
  data.inner_trace = sample_circle(truth, 0.6, 1024);

  const auto [spec, report] = reconstruct_from_circles(data, 6);
  REQUIRE(report.zero_count == 5);
  std::vector<Complex> want;
  for (const auto& z : truth.zeros) want.push_back(z.position);
  CHECK(zero_match_error(flatten_zeros(spec), want) < 1e-6);
  CHECK(gauge_aligned_sup_error(truth, spec, 0.3) < 1e-6);
}

TEST_CASE("reconstruct_from_circles: origin order is recovered") {
  FunctionSpec truth;
  truth.kind = SpecKind::factored;
  truth.origin_order = 2;
  truth.zeros = {{Complex{0.4, 0.1}, 1}};
  truth.outer.mean = 0.1;
  truth.outer.cos_coeffs = {0.2};
  truth.outer.sin_coeffs = {-0.1};

  CirclePairData data;
  data.rho = 0.6;
  data.outer_trace = sample_circle(truth, 1.0, 1024);
  data.inner_trace = sample_circle(truth, 0.6, 1024);

  const auto [spec, report] = reconstruct_from_circles(data, 4);
  CHECK(report.origin_order == 2);
  CHECK(report.zero_count == 1);
  CHECK(gauge_aligned_sup_error(truth, spec, 0.3) < 1e-6);
}

TEST_CASE("reconstruct_from_circles: out-of-family data is flagged") {
  // A singular atom is not representable as z^k B O; the residual floor
  // at max_zeros is the detector.
  FunctionSpec truth;
  truth.kind = SpecKind::factored;
  truth.atoms_num.atoms = {{1.0, 0.6}};
  truth.outer.mean = 0.1;
  truth.outer.cos_coeffs = {0.2};
  truth.outer.sin_coeffs = {0.0};

  CirclePairData data;
  data.rho = 0.6;
  data.outer_trace = sample_circle(truth, 1.0, 512);
  data.inner_trace = sample_circle(truth, 0.6, 512);

  CHECK_THROWS_AS(reconstruct_from_circles(data, 3), ModelMismatchError);
}

TEST_CASE("invariant: deflation of equal-modulus traces yields one divisor") {
  // |f| = |g| on rho T forces the same circle zeros with the same orders
  // (matching orders are forced: equal moduli give k = j).
  const auto trace_f = synthetic_circle_trace(0.6, 1024, [](double theta) {
    const Complex z = std::polar(0.6, theta);
    return std::abs(z - 0.6) * std::abs(z + Complex{0.0, 0.6}) *
           std::exp(0.3 * std::cos(theta));
  });
  // Same modulus arrived at differently: conjugate-reflected factors.
  const auto trace_g = synthetic_circle_trace(0.6, 1024, [](double theta) {
    const Complex z = std::polar(0.6, theta);
    return std::abs(std::conj(z) - 0.6) *
           std::abs(std::conj(z) - Complex{0.0, 0.6}) *
           std::exp(0.3 * std::cos(theta));
  });
  const auto df = deflate_circle_zeros(trace_f);
  const auto dg = deflate_circle_zeros(trace_g);
  REQUIRE(df.circle_zeros.size() == dg.circle_zeros.size());
  for (std::size_t i = 0; i < df.circle_zeros.size(); ++i) {
    CHECK(df.circle_zeros[i].multiplicity == dg.circle_zeros[i].multiplicity);
    CHECK(std::abs(df.circle_zeros[i].position - dg.circle_zeros[i].position) <
          1e-3);
  }
}

TEST_CASE("invariant: verifier soundness over gauges and specs") {
  GeneratorConfig cfg;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    cfg.seed = seed;
    cfg.avoid_radius = 0.6;
    const auto f = random_factored_spec(cfg, seed % 2 == 0, seed % 3 == 0);
    const double lambda = 0.7 * static_cast<double>(seed);
    const auto verdict =
        verify_equivalence(f, make_gauge_variant(f, lambda), 0.6, 1e-8);
    CHECK(verdict.equivalent);
    CHECK(std::abs(verdict.gauge - std::polar(1.0, lambda)) < 1e-8);
  }
}

TEST_CASE("invariant: reconstruction is unique across multistarts") {
  FunctionSpec truth;
  truth.kind = SpecKind::factored;
  truth.zeros = {{Complex{0.3, 0.2}, 1},
                 {Complex{-0.4, -0.1}, 1},
                 {Complex{0.1, 0.5}, 1}};
  truth.outer.mean = 0.15;
  truth.outer.cos_coeffs = {0.2, -0.05};
  truth.outer.sin_coeffs = {0.1, 0.0};

  CirclePairData data;
  data.rho = 0.6;
  data.outer_trace = sample_circle(truth, 1.0, 1024);
  data.inner_trace = sample_circle(truth, 0.6, 1024);

  CircleReconstructionOptions a, b;
  a.multistart_seed = 0;
  b.multistart_seed = 1;
  const auto [spec_a, rep_a] = reconstruct_from_circles(data, 5, a);
  const auto [spec_b, rep_b] = reconstruct_from_circles(data, 5, b);
  REQUIRE(rep_a.zero_count == rep_b.zero_count);
  CHECK(zero_match_error(flatten_zeros(spec_a), flatten_zeros(spec_b)) < 1e-6);
}
