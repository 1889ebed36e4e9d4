#include "holophase/mero_lemma.hpp"

#include <algorithm>
#include <cmath>

#include "holophase/rng.hpp"

namespace holophase {

Complex RationalFunctionSpec::eval(Complex z) const {
  for (const auto& pole : denominator_zeros)
    if (std::abs(z - pole.position) < kProximityTol)
      throw DomainError("rational evaluation at a pole");
  Complex value = scale;
  for (const auto& zero : numerator_zeros)
    for (int j = 0; j < zero.multiplicity; ++j) value *= z - zero.position;
  for (const auto& pole : denominator_zeros)
    for (int j = 0; j < pole.multiplicity; ++j) value /= z - pole.position;
  return value;
}

void RationalFunctionSpec::validate() const {
  if (std::abs(scale) == 0.0 || !is_finite(scale))
    throw DataError("rational scale must be finite and nonzero");
  for (const auto& zero : numerator_zeros)
    for (const auto& pole : denominator_zeros)
      if (std::abs(zero.position - pole.position) < Divisor::kMergeTol)
        throw DataError("rational spec has an uncancelled common factor");
}

FunctionSpec RationalFunctionSpec::to_function_spec() const {
  FunctionSpec spec;
  spec.kind = SpecKind::rational;
  spec.zeros = numerator_zeros;
  spec.poles = denominator_zeros;
  spec.scale = scale;
  return spec;
}

RationalFunctionSpec RationalFunctionSpec::from_function_spec(
    const FunctionSpec& spec) {
  if (spec.kind != SpecKind::rational)
    throw DataError("expected a rational function spec");
  RationalFunctionSpec r;
  r.numerator_zeros = spec.zeros;
  r.denominator_zeros = spec.poles;
  r.scale = spec.scale * std::polar(1.0, spec.gauge_phase);
  return r;
}

void Divisor::add(Complex point, int mult) {
  if (mult == 0) return;
  for (auto it = entries.begin(); it != entries.end(); ++it) {
    if (std::abs(it->first - point) < kMergeTol) {
      it->second += mult;
      if (it->second == 0) entries.erase(it);
      return;
    }
  }
  entries.push_back({point, mult});
}

int Divisor::at(Complex point) const {
  for (const auto& [p, m] : entries)
    if (std::abs(p - point) < kMergeTol) return m;
  return 0;
}

Divisor divisor_of(const RationalFunctionSpec& spec) {
  Divisor d;
  for (const auto& zero : spec.numerator_zeros)
    d.add(zero.position, zero.multiplicity);
  for (const auto& pole : spec.denominator_zeros)
    d.add(pole.position, -pole.multiplicity);
  return d;
}

Divisor divisor_arithmetic(const Divisor& F, const Divisor& G, DivisorOp op) {
  Divisor result = F;
  const int sign = op == DivisorOp::product ? 1 : -1;
  for (const auto& [p, m] : G.entries) result.add(p, sign * m);
  return result;
}

int multiplicity(const RationalFunctionSpec& spec, Complex z0) {
  return divisor_of(spec).at(z0);
}

namespace {

RationalFunctionSpec substitute_scaled(const RationalFunctionSpec& spec,
                                       double rho) {
  // F(z/rho): zeros scale by rho; each linear factor picks up 1/rho.
  RationalFunctionSpec out = spec;
  int net_degree = 0;
  for (auto& zero : out.numerator_zeros) {
    zero.position *= rho;
    net_degree += zero.multiplicity;
  }
  for (auto& pole : out.denominator_zeros) {
    pole.position *= rho;
    net_degree -= pole.multiplicity;
  }
  out.scale *= std::pow(rho, -net_degree);
  return out;
}

void check_poles_clear_of_circle(const RationalFunctionSpec& spec, double r) {
  for (const auto& pole : spec.denominator_zeros)
    if (std::fabs(std::abs(pole.position) - r) < kProximityTol)
      throw DomainError("pole on a test circle at |z| = " + std::to_string(r));
}

double max_relative_deviation(const RationalFunctionSpec& F,
                              const RationalFunctionSpec& G, double r, int n) {
  double max_dev = 0.0;
  for (int j = 0; j < n; ++j) {
    const Complex z = std::polar(r, kTwoPi * (j + 0.5) / n);
    const double vf = std::abs(F.eval(z));
    const double vg = std::abs(G.eval(z));
    const double denom = std::max({vf, vg, 1e-300});
    max_dev = std::max(max_dev, std::fabs(vf - vg) / denom);
  }
  return max_dev;
}

}  // namespace

ModulusMatchResult modulus_match_on_circles(const RationalFunctionSpec& F,
                                            const RationalFunctionSpec& G,
                                            double rho, int n, double tol) {
  if (!(rho > 0.0) || rho == 1.0)
    throw DataError("modulus match needs rho in (0, 1) or (1, inf)");
  if (n < 8) throw DataError("modulus match needs n >= 8 samples");
  F.validate();
  G.validate();

  if (rho > 1.0)
    return modulus_match_on_circles(substitute_scaled(F, rho),
                                    substitute_scaled(G, rho), 1.0 / rho, n,
                                    tol);

  check_poles_clear_of_circle(F, 1.0);
  check_poles_clear_of_circle(G, 1.0);
  check_poles_clear_of_circle(F, rho);
  check_poles_clear_of_circle(G, rho);

  ModulusMatchResult result;
  result.deviation_T = max_relative_deviation(F, G, 1.0, n);
  result.deviation_rhoT = max_relative_deviation(F, G, rho, n);
  result.matched = result.deviation_T <= tol && result.deviation_rhoT <= tol;
  return result;
}

GaugeConclusion conclude_gauge(const RationalFunctionSpec& F,
                               const RationalFunctionSpec& G, double rho) {
  if (!(rho > 0.0) || !(rho < 1.0))
    throw DataError("conclude_gauge needs rho in (0, 1)");
  F.validate();
  G.validate();

  GaugeConclusion conclusion;
  conclusion.m = multiplicity(G, Complex{0.0, 0.0}) -
                 multiplicity(F, Complex{0.0, 0.0});

  // Ratio sampled at pseudo-random annulus points bounded away from every
  // zero and pole.
  std::vector<Complex> special;
  for (const auto& e : F.numerator_zeros) special.push_back(e.position);
  for (const auto& e : F.denominator_zeros) special.push_back(e.position);
  for (const auto& e : G.numerator_zeros) special.push_back(e.position);
  for (const auto& e : G.denominator_zeros) special.push_back(e.position);

  CounterRng rng(0xD1C07ull);
  std::vector<Complex> ratios;
  int guard = 0;
  while (ratios.size() < 8 && ++guard < 4096) {
    const Complex z =
        std::polar(rng.next_in(rho + 0.02, 0.98), rng.next_in(0.0, kTwoPi));
    bool clear = true;
    for (Complex p : special)
      if (std::abs(z - p) < 1e-2) clear = false;
    if (!clear) continue;
    ratios.push_back(G.eval(z) /
                     (std::pow(z, conclusion.m) * F.eval(z)));
  }
  if (ratios.size() < 8)
    throw DataError("could not place ratio test points in the annulus");

  Complex mean{0.0, 0.0};
  for (Complex r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  for (Complex r : ratios)
    conclusion.ratio_deviation =
        std::max(conclusion.ratio_deviation, std::abs(r - mean));
  if (conclusion.ratio_deviation > 1e-10 * std::max(1.0, std::abs(mean)))
    throw DataError(
        "ratio G/(z^m F) is not constant: divisors away from 0 disagree, the "
        "input data is inconsistent with the lemma");

  conclusion.c = mean;
  conclusion.unimodular = std::fabs(std::abs(mean) - 1.0) <= 1e-8;
  conclusion.rho_consistent =
      std::fabs(std::abs(mean) * std::pow(rho, conclusion.m) - 1.0) <= 1e-8;
  return conclusion;
}

std::vector<int> reflection_orbit(const RationalFunctionSpec& F,
                                  const RationalFunctionSpec& G, Complex z0,
                                  double rho, int k_max) {
  if (!(rho > 0.0) || !(rho < 1.0))
    throw DataError("reflection orbit needs rho in (0, 1)");
  if (std::abs(z0) == 0.0) throw DataError("orbit base point must be nonzero");
  const Divisor quotient =
      divisor_arithmetic(divisor_of(F), divisor_of(G), DivisorOp::quotient);
  std::vector<int> orbit;
  Complex z = z0;
  for (int k = 0; k <= k_max; ++k) {
    orbit.push_back(quotient.at(z));
    z *= rho * rho;
  }
  return orbit;
}

}  // namespace holophase
