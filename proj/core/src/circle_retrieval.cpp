#include "holophase/circle_retrieval.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "holophase/harmonic.hpp"
#include "holophase/rng.hpp"

namespace holophase {

Complex RhoBlaschke::eval(Complex z) const {
  Complex value{1.0, 0.0};
  for (const auto& zero : zeros) {
    const Complex a = zero.position;
    const Complex denom = rho * rho - std::conj(a) * z;
    if (std::abs(denom) < kProximityTol)
      throw DomainError("rho-Blaschke evaluation at a reflected pole");
    const Complex factor = rho * (z - a) / denom;
    if (zero.multiplicity >= 0)
      for (int j = 0; j < zero.multiplicity; ++j) value *= factor;
    else
      for (int j = 0; j < -zero.multiplicity; ++j) value /= factor;
  }
  return value;
}

double RhoBlaschke::log_modulus(Complex z) const {
  double value = 0.0;
  for (const auto& zero : zeros) {
    const Complex a = zero.position;
    const Complex denom = rho * rho - std::conj(a) * z;
    if (std::abs(denom) < kProximityTol)
      throw DomainError("rho-Blaschke evaluation at a reflected pole");
    value += zero.multiplicity *
             (std::log(rho) + std::log(std::abs(z - a)) - std::log(std::abs(denom)));
  }
  return value;
}

namespace {

double circle_chord(double rho, double dtheta) {
  return 2.0 * rho * std::fabs(std::sin(0.5 * dtheta));
}

// Linear-fit order of the dip at theta0 from samples at offsets 2..8 grid
// steps on both sides; returns the slope and the fit SSE.
std::pair<double, double> dip_slope(const ModulusTrace& trace, double theta0,
                                    std::size_t center) {
  const std::size_t n = trace.params.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  std::vector<std::pair<double, double>> pts;
  for (int off = -8; off <= 8; ++off) {
    if (std::abs(off) < 2) continue;
    const std::size_t j = (center + n + off) % n;
    if (!(trace.values[j] > 0.0)) continue;
    const double dist =
        circle_chord(trace.rho, angle_distance(trace.params[j], theta0));
    if (dist < 1e-14) continue;
    const double x = std::log(dist);
    const double y = std::log(trace.values[j]);
    pts.push_back({x, y});
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++count;
  }
  if (count < 4) return {0.0, 1e300};
  const double denom = count * sxx - sx * sx;
  const double slope = (count * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / count;
  double sse = 0.0;
  for (const auto& [x, y] : pts) {
    const double r = y - slope * x - intercept;
    sse += r * r;
  }
  return {slope, sse};
}

}  // namespace

DeflationResult deflate_circle_zeros(const ModulusTrace& trace,
                                     const std::vector<Complex>* spec_hint) {
  trace.validate();
  if (trace.domain != ModulusTrace::Domain::circle)
    throw DataError("deflation works on circle traces");
  const std::size_t n = trace.params.size();
  if (n < 32) throw DataError("deflation needs a denser circle trace");

  std::vector<double> sorted = trace.values;
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[n / 2];
  const double threshold = 1e-6 * median;

  // Candidate dip centers: local minima below threshold, or the hinted
  // zero angles.
  std::vector<double> centers;
  if (spec_hint) {
    for (Complex z0 : *spec_hint) centers.push_back(std::arg(z0));
  } else {
    std::vector<bool> low(n);
    for (std::size_t j = 0; j < n; ++j) low[j] = trace.values[j] <= threshold;
    for (std::size_t j = 0; j < n; ++j) {
      if (!low[j]) continue;
      const double prev = trace.values[(j + n - 1) % n];
      const double next = trace.values[(j + 1) % n];
      if (trace.values[j] <= prev && trace.values[j] <= next)
        centers.push_back(trace.params[j]);
    }
  }

  DeflationResult result;
  result.deflated = trace;
  if (centers.empty()) return result;

  const double spacing = kTwoPi / static_cast<double>(n);
  for (double theta_center : centers) {
    // Nearest sample index to the candidate angle.
    std::size_t center = 0;
    double best = 1e300;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = angle_distance(trace.params[j], theta_center);
      if (d < best) { best = d; center = j; }
    }
    // Refine theta0 inside the central cell by minimizing the fit SSE.
    double theta0 = trace.params[center];
    double best_sse = dip_slope(trace, theta0, center).second;
    if (!spec_hint) {
      for (int step = -20; step <= 20; ++step) {
        const double cand = trace.params[center] + spacing * step / 20.0;
        const double sse = dip_slope(trace, cand, center).second;
        if (sse < best_sse) { best_sse = sse; theta0 = cand; }
      }
    } else {
      theta0 = theta_center;
    }

    const double slope = dip_slope(trace, theta0, center).first;
    const double rounded = std::round(slope);
    if (std::fabs(slope - rounded) > 0.2 || rounded < 1.0)
      throw DataError(
          "circle-zero order fit gave slope " + std::to_string(slope) +
          "; trace resolution too low to deflate");
    const int order = static_cast<int>(rounded);
    const Complex z0 = std::polar(trace.rho, theta0);
    result.circle_zeros.push_back({z0, order});

    // Divide out |z - z0|^order; nodes sitting on the zero get refilled by
    // neighbour interpolation below.
    std::vector<std::size_t> holes;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = circle_chord(trace.rho,
                                    angle_distance(trace.params[j], theta0));
      if (d < 1e-9 || !(result.deflated.values[j] > 0.0)) {
        holes.push_back(j);
        continue;
      }
      result.deflated.values[j] /= std::pow(d, order);
    }
    for (std::size_t j : holes) {
      const double vm2 = result.deflated.values[(j + n - 2) % n];
      const double vm1 = result.deflated.values[(j + n - 1) % n];
      const double vp1 = result.deflated.values[(j + 1) % n];
      const double vp2 = result.deflated.values[(j + 2) % n];
      // 4-point Lagrange interpolation at the hole.
      result.deflated.values[j] =
          std::max(0.0, (-vm2 + 4.0 * vm1 + 4.0 * vp1 - vp2) / 6.0);
    }
  }
  return result;
}

namespace {

// Zero/pole divisor of the spec inside the rho-disc (poles with negative
// multiplicity); errors out on circle-touching points.
std::vector<ZeroEntry> interior_divisor(const FunctionSpec& spec, double rho) {
  std::vector<ZeroEntry> entries;
  auto classify = [&](Complex p, int mult) {
    const double r = std::abs(p);
    if (std::fabs(r - rho) < kProximityTol)
      throw SingularityError("zero/pole on the rho circle; deflate first");
    if (r < rho) entries.push_back({p, mult});
  };
  switch (spec.kind) {
    case SpecKind::power_series:
      if (spec.origin_order > 0)
        entries.push_back({Complex{0.0, 0.0}, spec.origin_order});
      break;
    case SpecKind::rational:
      for (const auto& z : spec.zeros) classify(z.position, z.multiplicity);
      for (const auto& p : spec.poles) classify(p.position, -p.multiplicity);
      break;
    case SpecKind::factored:
      if (spec.origin_order > 0)
        entries.push_back({Complex{0.0, 0.0}, spec.origin_order});
      for (const auto& z : spec.zeros) classify(z.position, z.multiplicity);
      break;
  }
  return entries;
}

std::vector<Complex> known_zeros_and_poles(const FunctionSpec& spec) {
  std::vector<Complex> pts;
  if (spec.kind != SpecKind::rational && spec.origin_order > 0)
    pts.push_back(Complex{0.0, 0.0});
  for (const auto& z : spec.zeros) pts.push_back(z.position);
  for (const auto& p : spec.poles) pts.push_back(p.position);
  return pts;
}

}  // namespace

double poisson_jensen_check(const FunctionSpec& spec, double rho,
                            const std::vector<Complex>& grid, int n_samples) {
  if (!(rho > 0.0) && !(rho < 1.0))
    throw DataError("poisson_jensen_check needs rho in (0, 1)");
  spec.validate();

  RhoBlaschke divisor{rho, interior_divisor(spec, rho)};

  std::vector<double> boundary(n_samples);
  for (int j = 0; j < n_samples; ++j) {
    const double theta = kTwoPi * j / n_samples;
    boundary[j] = std::log(std::abs(eval(spec, std::polar(rho, theta))));
  }

  double max_residual = 0.0;
  for (Complex z : grid) {
    if (!(std::abs(z) < rho)) throw DomainError("grid point outside rho disc");
    bool skip = false;
    for (const auto& entry : divisor.zeros)
      if (std::abs(z - entry.position) < 1e-6) skip = true;
    if (skip) continue;
    const double lhs =
        std::log(std::abs(eval(spec, z))) - divisor.log_modulus(z);
    const double rhs = poisson_integral(boundary, rho, z);
    max_residual = std::max(max_residual, std::fabs(lhs - rhs));
  }
  return max_residual;
}

EquivalenceVerdict verify_equivalence(const FunctionSpec& f,
                                      const FunctionSpec& g, double rho,
                                      double tol) {
  if (!(rho > 0.0) || !(rho < 1.0))
    throw DataError("verify_equivalence needs rho in (0, 1)");
  f.validate();
  g.validate();

  auto atom_angles = [](const FunctionSpec& spec) {
    std::vector<double> angles;
    for (const auto& a : spec.atoms_num.atoms) angles.push_back(a.theta);
    for (const auto& a : spec.atoms_den.atoms) angles.push_back(a.theta);
    return angles;
  };
  std::vector<double> avoid = atom_angles(f);
  for (double a : atom_angles(g)) avoid.push_back(a);

  EquivalenceVerdict verdict;
  const int n = 512;

  for (int j = 0; j < n; ++j) {
    const double theta = kTwoPi * (j + 0.5) / n;
    bool skip = false;
    for (double a : avoid)
      if (angle_distance(theta, a) < 1e-9) skip = true;
    if (skip) continue;
    const double d = std::fabs(eval_boundary_log_modulus(f, theta) -
                               eval_boundary_log_modulus(g, theta));
    verdict.residual_T = std::max(verdict.residual_T, d);
  }

  for (int j = 0; j < n; ++j) {
    const double theta = kTwoPi * (j + 0.5) / n;
    const Complex z = std::polar(rho, theta);
    const double vf = std::abs(eval(f, z));
    const double vg = std::abs(eval(g, z));
    if (!(vf > 0.0) || !(vg > 0.0))
      throw SingularityError("zero on the rho test circle; deflate first");
    verdict.residual_rhoT =
        std::max(verdict.residual_rhoT, std::fabs(std::log(vf) - std::log(vg)));
  }

  // Constancy of g/f on an interior grid, away from known zeros/poles.
  std::vector<Complex> exclusions = known_zeros_and_poles(f);
  for (Complex p : known_zeros_and_poles(g)) exclusions.push_back(p);
  std::vector<Complex> ratios;
  for (int j = 0; j < 200; ++j) {
    const Complex z = std::polar(0.5 * rho, kTwoPi * (j + 0.31) / 200.0);
    bool skip = false;
    for (Complex p : exclusions)
      if (std::abs(z - p) < 1e-3) skip = true;
    if (skip) continue;
    const Complex fz = eval(f, z);
    if (std::abs(fz) < 1e-300) continue;
    ratios.push_back(eval(g, z) / fz);
  }
  if (ratios.empty()) throw DataError("interior ratio grid is empty");

  Complex mean{0.0, 0.0};
  for (Complex r : ratios) mean += r;
  mean /= static_cast<double>(ratios.size());
  for (Complex r : ratios)
    verdict.interior_ratio_deviation =
        std::max(verdict.interior_ratio_deviation, std::abs(r - mean));
  if (std::abs(mean) > 0.0) verdict.gauge = mean / std::abs(mean);

  verdict.equivalent =
      verdict.residual_T <= tol && verdict.residual_rhoT <= tol &&
      verdict.interior_ratio_deviation <= tol * std::max(1.0, std::abs(mean));
  return verdict;
}

// ---------------------------------------------------------------------------
// Reconstruction in the Blaschke-times-outer setting.
// ---------------------------------------------------------------------------

namespace {

// Roots of c_0 + c_1 t + ... + c_d t^d via the companion matrix.
std::vector<Complex> poly_roots(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && std::abs(coeffs.back()) < 1e-14) coeffs.pop_back();
  if (coeffs.size() < 2) return {};
  const int d = static_cast<int>(coeffs.size()) - 1;
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -coeffs[i] / coeffs[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion);
  std::vector<Complex> roots;
  for (int i = 0; i < d; ++i) roots.push_back(solver.eigenvalues()[i]);
  return roots;
}

struct MisfitModel {
  double rho;
  double log_rho;
  double w0;                   // mean of w on rho T
  std::vector<Complex> target; // measured W_n, n = 1..L

  // Mean and Fourier contributions of log|b_a| on rho T for one zero.
  // Both branches meet continuously at |a| = rho.
  double zero_mean(Complex a) const {
    const double r = std::abs(a);
    return r < rho ? log_rho : std::log(r);
  }

  void accumulate(Complex a, std::vector<Complex>& W) const {
    const double r = std::abs(a);
    const Complex u = std::conj(a) * rho;
    const Complex v = r < rho ? std::conj(a) / rho : rho / a;
    Complex un{1.0, 0.0}, vn{1.0, 0.0};
    for (std::size_t n = 1; n <= W.size(); ++n) {
      un *= u;
      vn *= v;
      W[n - 1] += (un - vn) / static_cast<double>(n);
    }
  }

  int origin_order_for(const std::vector<Complex>& zeros) const {
    double mean = w0;
    for (Complex a : zeros) mean -= zero_mean(a);
    const int k = static_cast<int>(std::lround(mean / log_rho));
    return std::max(0, k);
  }

  Eigen::VectorXd residual(const std::vector<Complex>& zeros) const {
    const std::size_t L = target.size();
    std::vector<Complex> W(L, Complex{0.0, 0.0});
    double mean = 0.0;
    for (Complex a : zeros) {
      accumulate(a, W);
      mean += zero_mean(a);
    }
    const int k = origin_order_for(zeros);
    Eigen::VectorXd r(2 * L + 1);
    r[0] = w0 - k * log_rho - mean;
    for (std::size_t n = 0; n < L; ++n) {
      r[2 * n + 1] = (target[n] - W[n]).real();
      r[2 * n + 2] = (target[n] - W[n]).imag();
    }
    return r;
  }
};

Complex clamp_into_disc(Complex a) {
  const double r = std::abs(a);
  if (r > 0.995) return a * (0.99 / r);
  if (r < 1e-4) return Complex{1e-4, 0.0};
  return a;
}

struct LocalFit {
  std::vector<Complex> zeros;
  double residual = 1e300;
  Eigen::MatrixXd jtj;
};

LocalFit levenberg_marquardt(const MisfitModel& model,
                             std::vector<Complex> zeros) {
  const int m = static_cast<int>(zeros.size());
  LocalFit fit;
  if (m == 0) {
    fit.zeros = zeros;
    fit.residual = model.residual(zeros).norm();
    return fit;
  }

  Eigen::VectorXd r = model.residual(zeros);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  const double h = 1e-7;

  Eigen::MatrixXd J(r.size(), 2 * m);
  for (int iter = 0; iter < 120; ++iter) {
    for (int i = 0; i < m; ++i) {
      for (int part = 0; part < 2; ++part) {
        std::vector<Complex> bumped = zeros;
        bumped[i] += part == 0 ? Complex{h, 0.0} : Complex{0.0, h};
        J.col(2 * i + part) = (model.residual(bumped) - r) / h;
      }
    }
    const Eigen::MatrixXd jtj = J.transpose() * J;
    const Eigen::VectorXd jtr = J.transpose() * r;
    bool stepped = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal().array() += lambda;
      const Eigen::VectorXd delta = damped.ldlt().solve(-jtr);
      std::vector<Complex> trial = zeros;
      for (int i = 0; i < m; ++i)
        trial[i] = clamp_into_disc(trial[i] +
                                   Complex{delta[2 * i], delta[2 * i + 1]});
      const Eigen::VectorXd r_trial = model.residual(trial);
      const double cost_trial = r_trial.squaredNorm();
      if (cost_trial < cost) {
        zeros = std::move(trial);
        r = r_trial;
        cost = cost_trial;
        lambda = std::max(lambda * 0.3, 1e-14);
        stepped = true;
        break;
      }
      lambda *= 4.0;
    }
    if (!stepped || cost < 1e-30) break;
  }

  fit.zeros = zeros;
  fit.residual = std::sqrt(cost);
  // Final curvature for the per-zero confidence report.
  for (int i = 0; i < m; ++i) {
    for (int part = 0; part < 2; ++part) {
      std::vector<Complex> bumped = zeros;
      bumped[i] += part == 0 ? Complex{h, 0.0} : Complex{0.0, h};
      J.col(2 * i + part) = (model.residual(bumped) - r) / h;
    }
  }
  fit.jtj = J.transpose() * J;
  return fit;
}

// Starting guesses from a [m/m] Pade approximant of exp(sum W_n t^n); the
// denominator roots are the reflected coordinates u_i = conj(a_i) rho.
std::vector<Complex> pade_start(const MisfitModel& model, int m) {
  const int L = static_cast<int>(model.target.size());
  if (m == 0 || 2 * m > L) return {};

  std::vector<Complex> E(L + 1, Complex{0.0, 0.0});
  E[0] = 1.0;
  for (int k = 1; k <= L; ++k) {
    Complex acc{0.0, 0.0};
    for (int j = 1; j <= k; ++j)
      acc += static_cast<double>(j) * model.target[j - 1] * E[k - j];
    E[k] = acc / static_cast<double>(k);
  }

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m, m);
  Eigen::VectorXcd rhs(m);
  for (int row = 0; row < m; ++row) {
    const int k = m + 1 + row;
    for (int col = 0; col < m; ++col) A(row, col) = E[k - 1 - col];
    rhs[row] = -E[k];
  }
  const Eigen::VectorXcd b = A.fullPivLu().solve(rhs);

  std::vector<Complex> denom(m + 1);
  denom[0] = 1.0;
  for (int j = 0; j < m; ++j) denom[j + 1] = b[j];

  std::vector<Complex> starts;
  for (Complex root : poly_roots(denom)) {
    if (!is_finite(root) || std::abs(root) < 1e-10) continue;
    const Complex u = 1.0 / root;
    starts.push_back(clamp_into_disc(std::conj(u) / model.rho));
  }
  return starts;
}

}  // namespace

std::pair<FunctionSpec, CircleReconstructionReport> reconstruct_from_circles(
    const CirclePairData& data, int max_zeros,
    const CircleReconstructionOptions& opts) {
  data.outer_trace.validate();
  data.inner_trace.validate();
  if (data.outer_trace.domain != ModulusTrace::Domain::circle ||
      data.inner_trace.domain != ModulusTrace::Domain::circle)
    throw DataError("circle reconstruction needs circle traces");
  if (!(data.rho > 0.0) || !(data.rho < 1.0))
    throw DataError("circle reconstruction needs rho in (0, 1)");
  for (double v : data.outer_trace.values)
    if (!(v > 0.0)) throw DataError("outer trace must be strictly positive");
  for (double v : data.inner_trace.values)
    if (!(v > 0.0)) throw DataError("inner trace must be strictly positive");

  // Step A: outer part from the unit-circle trace.
  const int n_T = static_cast<int>(data.outer_trace.values.size());
  std::vector<double> log_T(n_T);
  for (int j = 0; j < n_T; ++j) log_T[j] = std::log(data.outer_trace.values[j]);
  const int degree = std::min(opts.outer_degree, n_T / 2 - 1);
  TrigPolyLogModulus outer = outer_from_log_modulus(log_T, degree);

  // Step B: residual log-modulus w = log|z^k B| on rho T.
  const int n_R = static_cast<int>(data.inner_trace.values.size());
  MisfitModel model;
  model.rho = data.rho;
  model.log_rho = std::log(data.rho);
  const int L = std::min(opts.fourier_order, n_R / 2 - 1);
  std::vector<double> w(n_R);
  for (int j = 0; j < n_R; ++j) {
    const double theta = data.inner_trace.params[j];
    w[j] = std::log(data.inner_trace.values[j]) -
           outer.log_modulus(std::polar(data.rho, theta));
  }
  model.w0 = std::accumulate(w.begin(), w.end(), 0.0) / n_R;
  model.target.assign(L, Complex{0.0, 0.0});
  for (int k = 1; k <= L; ++k) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < n_R; ++j)
      acc += w[j] * std::polar(1.0, -k * data.inner_trace.params[j]);
    model.target[k - 1] = 2.0 * acc / static_cast<double>(n_R);
  }

  // Step C: joint fit of k and the zeros, smallest model order first.
  for (int m = 0; m <= max_zeros; ++m) {
    std::vector<std::vector<Complex>> starts;
    const std::vector<Complex> pade = pade_start(model, m);
    if (static_cast<int>(pade.size()) == m) starts.push_back(pade);

    CounterRng rng(0x5EEDull + static_cast<std::uint64_t>(opts.multistart_seed));
    for (int s = 0; s < 8; ++s) {
      std::vector<Complex> start(m);
      for (int i = 0; i < m; ++i)
        start[i] = std::polar(rng.next_in(0.15, 0.9), rng.next_in(0.0, kTwoPi));
      starts.push_back(std::move(start));
    }
    if (m == 0) starts.push_back({});

    auto lex_less = [](const std::vector<Complex>& a,
                       const std::vector<Complex>& b) {
      return std::lexicographical_compare(
          a.begin(), a.end(), b.begin(), b.end(), [](Complex x, Complex y) {
            return x.real() != y.real() ? x.real() < y.real()
                                        : x.imag() < y.imag();
          });
    };
    LocalFit best;
    for (const auto& start : starts) {
      LocalFit fit = levenberg_marquardt(model, start);
      if (fit.residual < best.residual ||
          (fit.residual == best.residual && lex_less(fit.zeros, best.zeros)))
        best = std::move(fit);
    }

    if (best.residual < opts.tol) {
      std::sort(best.zeros.begin(), best.zeros.end(),
                [](Complex a, Complex b) {
                  return a.real() != b.real() ? a.real() < b.real()
                                              : a.imag() < b.imag();
                });
      FunctionSpec spec;
      spec.kind = SpecKind::factored;
      spec.gauge_phase = 0.0;
      spec.origin_order = model.origin_order_for(best.zeros);
      spec.outer = outer;
      CircleReconstructionReport report;
      report.zero_count = m;
      report.origin_order = spec.origin_order;
      report.residual = best.residual;
      for (int i = 0; i < m; ++i) {
        spec.zeros.push_back({best.zeros[i], 1});
        const double curvature =
            best.jtj.size() > 0
                ? best.jtj(2 * i, 2 * i) + best.jtj(2 * i + 1, 2 * i + 1)
                : 0.0;
        report.zero_confidence.push_back(std::sqrt(std::max(0.0, curvature)));
      }
      return {spec, report};
    }
  }
  throw ModelMismatchError(
      "circle reconstruction misfit stayed above tolerance at max_zeros; the "
      "data likely carries a singular inner part or more zeros than allowed");
}

}  // namespace holophase
