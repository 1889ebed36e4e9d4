#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "holophase/function_spec.hpp"
#include "holophase/sampling.hpp"
#include "holophase/types.hpp"

namespace holophase {

// Product of rho-scaled factors rho (z - a)/(rho^2 - conj(a) z),
// unimodular on |z| = rho.
struct RhoBlaschke {
  double rho = 0.5;
  std::vector<ZeroEntry> zeros;  // |a| < rho; negative multiplicity = pole

  Complex eval(Complex z) const;
  double log_modulus(Complex z) const;
};

struct CirclePairData {
  ModulusTrace outer_trace;  // radius 1
  ModulusTrace inner_trace;  // radius rho
  double rho = 0.5;
};

struct DeflationResult {
  ModulusTrace deflated;
  std::vector<ZeroEntry> circle_zeros;  // points on the sampling circle
};

// Detect zeros of |f| on the sampling circle, fit their (integer) orders
// from the log-log slope of neighbouring samples, and divide them out.
DeflationResult deflate_circle_zeros(
    const ModulusTrace& trace,
    const std::vector<Complex>* spec_hint = nullptr);

// Max over the grid of |log|f/P_f| - Poisson integral of log|f| on rho T|,
// with P_f built from the spec's zeros (and poles) inside the rho-disc.
double poisson_jensen_check(const FunctionSpec& spec, double rho,
                            const std::vector<Complex>& grid,
                            int n_samples = 1024);

struct EquivalenceVerdict {
  bool equivalent = false;
  Complex gauge{1.0, 0.0};
  double residual_T = 0.0;
  double residual_rhoT = 0.0;
  double interior_ratio_deviation = 0.0;
};

// Two-circle equivalence verifier: |f| = |g| on T and on rho T (log-modulus residuals),
// then constancy of g/f on an interior grid; gauge is the normalized mean
// ratio.
EquivalenceVerdict verify_equivalence(const FunctionSpec& f,
                                      const FunctionSpec& g, double rho,
                                      double tol);

struct CircleReconstructionOptions {
  double tol = 1e-8;
  int fourier_order = 48;     // misfit matched on Fourier indices 1..order
  int outer_degree = 64;      // cap for the recovered outer trig poly
  int multistart_seed = 0;    // extra deterministic start perturbations
};

struct CircleReconstructionReport {
  int zero_count = 0;   // m
  int origin_order = 0; // k
  double residual = 0.0;
  std::vector<double> zero_confidence;  // local curvature per zero
};

// Boche-setting reconstruction (f = z^k B O): outer part from the T trace,
// then k and the Blaschke zeros from the Fourier misfit of the remaining
// rho T log-modulus, multi-start least squares over model orders
// m = 0..max_zeros.
std::pair<FunctionSpec, CircleReconstructionReport> reconstruct_from_circles(
    const CirclePairData& data, int max_zeros,
    const CircleReconstructionOptions& opts = {});

}  // namespace holophase
