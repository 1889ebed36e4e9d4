#include "holophase/segment_retrieval.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace holophase {

namespace {

struct LogLogPoint {
  double log_t;
  double log_v;
};

double least_squares_slope(const std::vector<LogLogPoint>& pts) {
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    sx += p.log_t;
    sy += p.log_v;
    sxx += p.log_t * p.log_t;
    sxy += p.log_t * p.log_v;
  }
  const double denom = n * sxx - sx * sx;
  if (std::fabs(denom) < 1e-300)
    throw DataError("origin-order fit nodes are degenerate");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace

int detect_origin_order(const ModulusTrace& trace_I) {
  trace_I.validate();
  const auto& t = trace_I.params;
  const auto& v = trace_I.values;
  const std::size_t n = t.size();
  if (n < 8) throw DataError("origin-order detection needs >= 8 nodes");

  // Innermost 10% of nodes by |t|; the z^k slope dominates only near 0.
  std::vector<double> abs_t(n);
  for (std::size_t i = 0; i < n; ++i) abs_t[i] = std::fabs(t[i]);
  std::vector<double> sorted = abs_t;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t keep = std::max<std::size_t>(6, n / 10);
  const double cutoff = sorted[std::min(keep, n) - 1];

  // Average log-values over the t / -t pair: odd exponent terms cancel and
  // the slope fit sees k + O(t^2).
  std::vector<LogLogPoint> pts;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(t[i] > 0.0) || abs_t[i] > cutoff) continue;
    double log_v = std::log(std::max(v[i], 1e-300));
    const std::size_t mirror = n - 1 - i;
    if (std::fabs(t[i] + t[mirror]) < 1e-9 && v[mirror] > 0.0 && v[i] > 0.0)
      log_v = 0.5 * (std::log(v[i]) + std::log(v[mirror]));
    else if (!(v[i] > 0.0))
      continue;
    pts.push_back({std::log(abs_t[i]), log_v});
  }
  if (pts.size() < 3)
    throw DataError("too few usable nodes near the origin for order detection");

  const double slope = least_squares_slope(pts);
  const double rounded = std::round(slope);
  if (std::fabs(slope - rounded) > 0.2 || rounded < 0.0)
    throw DataError(
        "origin-order slope " + std::to_string(slope) +
        " is not close to a nonnegative integer; an off-origin zero likely "
        "sits on the segment - shrink the segment and resample");
  return static_cast<int>(rounded);
}

namespace {

// Chebyshev-basis least squares, then exact conversion to monomials.
std::vector<double> chebyshev_to_monomial(const Eigen::VectorXd& cheb) {
  const int m = static_cast<int>(cheb.size());
  std::vector<double> result(m, 0.0);
  std::vector<double> prev{1.0};        // T_0
  std::vector<double> curr{0.0, 1.0};   // T_1
  for (int j = 0; j < m; ++j) {
    const std::vector<double>& basis = (j == 0) ? prev : curr;
    for (std::size_t i = 0; i < basis.size(); ++i)
      result[i] += cheb[j] * basis[i];
    if (j >= 1 && j + 1 < m) {
      std::vector<double> next(curr.size() + 1, 0.0);
      for (std::size_t i = 0; i < curr.size(); ++i) next[i + 1] = 2.0 * curr[i];
      for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
      prev = std::move(curr);
      curr = std::move(next);
    }
  }
  return result;
}

}  // namespace

std::vector<double> fit_real_parts(const ModulusTrace& trace, int k, int N,
                                   double* residual,
                                   const SegmentFitOptions& opts) {
  trace.validate();
  if (k < 0 || N < 0) throw DataError("fit_real_parts needs k, N >= 0");

  std::vector<double> ts, us;
  for (std::size_t i = 0; i < trace.params.size(); ++i) {
    const double t = trace.params[i];
    const double v = trace.values[i];
    if (!(v > 0.0)) continue;
    if (k > 0 && std::fabs(t) < 1e-13) continue;  // z^k factor removal
    ts.push_back(t);
    us.push_back(std::log(v) - (k > 0 ? k * std::log(std::fabs(t)) : 0.0));
  }
  if (ts.size() < static_cast<std::size_t>(N + 1))
    throw DataError("fit_real_parts needs at least N+1 usable nodes");

  const int rows = static_cast<int>(ts.size());
  Eigen::MatrixXd A(rows, N + 1);
  Eigen::VectorXd u(rows);
  for (int i = 0; i < rows; ++i) {
    u[i] = us[i];
    double prev = 1.0, curr = ts[i];
    A(i, 0) = 1.0;
    if (N >= 1) A(i, 1) = curr;
    for (int j = 2; j <= N; ++j) {
      const double next = 2.0 * ts[i] * curr - prev;
      A(i, j) = next;
      prev = curr;
      curr = next;
    }
  }

  const Eigen::VectorXd cheb = A.colPivHouseholderQr().solve(u);
  // Floor the denominator at 1 so that near-zero data (u identically 0 up to
  // rounding) does not inflate a harmless absolute residual.
  const double u_norm = std::max(u.norm(), 1.0);
  const double rel_residual = (A * cheb - u).norm() / u_norm;
  if (residual) *residual = rel_residual;
  if (rel_residual > opts.residual_threshold)
    throw ModelMismatchError(
        "segment fit residual " + std::to_string(rel_residual) +
        " exceeds threshold; raise the truncation order or check for a zero "
        "on the segment");

  return chebyshev_to_monomial(cheb);
}

CoefficientSolve solve_coefficient(int n, double a, double b, double alpha) {
  if (n <= 0) throw DataError("solve_coefficient needs n >= 1");
  const double s = std::sin(n * alpha);
  if (std::fabs(s) < 1e-8)
    throw IllConditionedError(
        "coefficient index " + std::to_string(n) +
        " is ill-conditioned: |sin(n alpha)| < 1e-8 (alpha is numerically a "
        "rational multiple of pi)");
  const double c = std::cos(n * alpha);
  return {Complex{a, (a * c - b) / s}, 1.0 / std::fabs(s)};
}

std::pair<FunctionSpec, CoefficientSolveReport> reconstruct_from_segments(
    const ModulusTrace& trace_I, const ModulusTrace& trace_Ialpha, double alpha,
    int N, const SegmentFitOptions& opts) {
  const int k_I = detect_origin_order(trace_I);
  const int k_Ia = detect_origin_order(trace_Ialpha);
  if (k_I != k_Ia)
    throw DataError("inconsistent traces: origin order " + std::to_string(k_I) +
                    " on I vs " + std::to_string(k_Ia) + " on I_alpha");

  std::vector<int> bad;
  for (int n = 1; n <= N; ++n)
    if (std::fabs(std::sin(n * alpha)) < opts.conditioning_guard)
      bad.push_back(n);
  if (!bad.empty()) {
    std::ostringstream os;
    os << "ill-conditioned coefficient indices for this alpha:";
    for (int n : bad) os << ' ' << n;
    throw IllConditionedError(os.str());
  }

  CoefficientSolveReport report;
  report.origin_order = k_I;
  const std::vector<double> a =
      fit_real_parts(trace_I, k_I, N, &report.fit_residual_I, opts);
  const std::vector<double> b =
      fit_real_parts(trace_Ialpha, k_I, N, &report.fit_residual_Ialpha, opts);

  FunctionSpec spec;
  spec.kind = SpecKind::power_series;
  spec.gauge_phase = 0.0;
  spec.origin_order = k_I;
  spec.exponent_coeffs.assign(N + 1, Complex{0.0, 0.0});
  spec.exponent_coeffs[0] = Complex{a[0], 0.0};  // gauge fixed: Im c_0 = 0

  report.kappa.reserve(N);
  report.residuals.reserve(N);
  for (int n = 1; n <= N; ++n) {
    const auto solve = solve_coefficient(n, a[n], b[n], alpha);
    spec.exponent_coeffs[n] = solve.c;
    report.kappa.push_back(solve.kappa);
    const double r1 = std::fabs(solve.c.real() - a[n]);
    const double r2 =
        std::fabs((solve.c * std::polar(1.0, n * alpha)).real() - b[n]);
    report.residuals.push_back(std::max(r1, r2));
  }
  return {spec, report};
}

FunctionSpec rational_alpha_counterexample(const FunctionSpec& spec, int p,
                                           int q, double lambda) {
  if (spec.kind != SpecKind::power_series)
    throw DataError("counterexample generator needs a power-series spec");
  if (q <= 0) throw DataError("counterexample denominator q must be positive");
  if (std::gcd(std::abs(p), q) != 1)
    throw DataError("counterexample requires gcd(p, q) = 1");
  if (lambda == 0.0)
    throw DataError("lambda = 0 produces a degenerate counterexample (g = f)");

  FunctionSpec g = spec;
  if (g.exponent_coeffs.size() < static_cast<std::size_t>(q + 1))
    g.exponent_coeffs.resize(q + 1, Complex{0.0, 0.0});
  g.exponent_coeffs[q] += Complex{0.0, lambda};
  return g;
}

}  // namespace holophase
