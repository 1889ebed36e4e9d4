#pragma once

#include <vector>

#include "holophase/function_spec.hpp"
#include "holophase/types.hpp"

namespace holophase {

struct RationalFunctionSpec {
  std::vector<ZeroEntry> numerator_zeros;
  std::vector<ZeroEntry> denominator_zeros;
  Complex scale{1.0, 0.0};

  Complex eval(Complex z) const;
  void validate() const;

  FunctionSpec to_function_spec() const;
  static RationalFunctionSpec from_function_spec(const FunctionSpec& spec);
};

// Finite map point -> nonzero integer multiplicity; points merged within
// tolerance 1e-10.
struct Divisor {
  std::vector<std::pair<Complex, int>> entries;

  static constexpr double kMergeTol = 1e-10;

  void add(Complex point, int multiplicity);
  int at(Complex point) const;
  bool empty() const { return entries.empty(); }
};

Divisor divisor_of(const RationalFunctionSpec& spec);

enum class DivisorOp { product, quotient };
Divisor divisor_arithmetic(const Divisor& F, const Divisor& G, DivisorOp op);

// Signed order m_F(z0): numerator minus denominator multiplicity.
int multiplicity(const RationalFunctionSpec& spec, Complex z0);

struct ModulusMatchResult {
  bool matched = false;
  double deviation_T = 0.0;
  double deviation_rhoT = 0.0;
};

// |F| = |G| sampled on T and on rho T (max relative deviation).  rho > 1
// is normalized to 1/rho by the substitution z -> z/rho.
ModulusMatchResult modulus_match_on_circles(const RationalFunctionSpec& F,
                                            const RationalFunctionSpec& G,
                                            double rho, int n, double tol);

struct GaugeConclusion {
  Complex c{1.0, 0.0};
  int m = 0;  // m_G(0) - m_F(0)
  double ratio_deviation = 0.0;
  bool unimodular = false;      // | |c| - 1 | small
  bool rho_consistent = false;  // | |c| rho^m - 1 | small
};

// Gauge conclusion of the rational two-circle lemma: G = c z^m F with the ratio evaluated at
// pseudo-random annulus points; constancy enforced to 1e-10.
GaugeConclusion conclude_gauge(const RationalFunctionSpec& F,
                               const RationalFunctionSpec& G, double rho);

// Quotient-divisor multiplicities along the orbit rho^{2k} z0, k=0..k_max.
std::vector<int> reflection_orbit(const RationalFunctionSpec& F,
                                  const RationalFunctionSpec& G, Complex z0,
                                  double rho, int k_max);

}  // namespace holophase
