#pragma once

#include <utility>
#include <vector>

#include "holophase/function_spec.hpp"
#include "holophase/sampling.hpp"
#include "holophase/types.hpp"

namespace holophase {

struct CoefficientSolveReport {
  int origin_order = 0;
  std::vector<double> kappa;      // kappa[n-1] = 1/|sin(n alpha)|, n >= 1
  std::vector<double> residuals;  // constraint residuals per index
  double fit_residual_I = 0.0;
  double fit_residual_Ialpha = 0.0;
};

struct SegmentFitOptions {
  // Relative fit-residual threshold; exceeding it signals a truncation
  // order that is too small or a zero on the segment.
  double residual_threshold = 1e-6;
  // Indices n with |sin(n alpha)| below this are rejected as
  // ill-conditioned (the rational-multiple failure mode).
  double conditioning_guard = 1e-8;
};

// Vanishing order at the origin from the log-log slope of the innermost
// 10% of nodes (t and -t averaged to cancel odd exponent terms).
int detect_origin_order(const ModulusTrace& trace_I);

// Least-squares fit of u(t) = log(values) - k log|t| by a degree-N
// polynomial at the trace nodes (Chebyshev basis internally, monomial
// coefficients out).  Stores the relative fit residual in *residual.
std::vector<double> fit_real_parts(const ModulusTrace& trace, int k, int N,
                                   double* residual = nullptr,
                                   const SegmentFitOptions& opts = {});

struct CoefficientSolve {
  Complex c;
  double kappa = 1.0;
};

// Solve Re(c) = a, Re(c e^{i n alpha}) = b for c, with condition number
// 1/|sin(n alpha)|.
CoefficientSolve solve_coefficient(int n, double a, double b, double alpha);

// Two-segment retrieval end to end: k, then the exponent coefficients c_n
// from the two segment fits, gauge fixed by Im c_0 = 0.
std::pair<FunctionSpec, CoefficientSolveReport> reconstruct_from_segments(
    const ModulusTrace& trace_I, const ModulusTrace& trace_Ialpha, double alpha,
    int N, const SegmentFitOptions& opts = {});

// Sharpness witness for alpha = pi p / q: g = f exp(i lambda z^q) has the
// same modulus as f on both segments but is not a unimodular multiple.
FunctionSpec rational_alpha_counterexample(const FunctionSpec& spec, int p,
                                           int q, double lambda);

}  // namespace holophase
