#include "holophase/generators.hpp"

#include <cmath>

#include "holophase/rng.hpp"

namespace holophase {

void GeneratorConfig::validate() const {
  if (!(zero_radius_min > 0.0) || !(zero_radius_max < 1.0) ||
      !(zero_radius_min <= zero_radius_max))
    throw DataError("zero radius band must sit inside (0, 1)");
  if (!(coefficient_bound > 0.0))
    throw DataError("coefficient bound must be positive");
  if (max_zero_count < 0 || max_series_degree < 0 || max_outer_degree < 0 ||
      max_atoms < 0)
    throw DataError("generator counts must be nonnegative");
}

namespace {

double draw_zero_radius(const GeneratorConfig& cfg, CounterRng& rng) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    const double r = rng.next_in(cfg.zero_radius_min, cfg.zero_radius_max);
    if (cfg.avoid_radius > 0.0 &&
        std::fabs(r - cfg.avoid_radius) < cfg.avoid_margin)
      continue;
    return r;
  }
  throw DataError("zero radius band is fully excluded by the avoid band");
}

}  // namespace

FunctionSpec random_power_series_spec(const GeneratorConfig& cfg, int order) {
  cfg.validate();
  if (order < 0) throw DataError("origin order must be >= 0");
  CounterRng rng(cfg.seed);
  FunctionSpec spec;
  spec.kind = SpecKind::power_series;
  spec.origin_order = order;
  spec.exponent_coeffs.resize(cfg.max_series_degree + 1);
  for (auto& c : spec.exponent_coeffs) {
    // Uniform in the disc of radius coefficient_bound.
    const double r = cfg.coefficient_bound * std::sqrt(rng.next_unit());
    c = std::polar(r, rng.next_in(0.0, kTwoPi));
  }
  return spec;
}

FunctionSpec random_factored_spec(const GeneratorConfig& cfg, bool with_atoms,
                                  bool with_denominator) {
  cfg.validate();
  CounterRng rng(cfg.seed);
  FunctionSpec spec;
  spec.kind = SpecKind::factored;

  spec.origin_order = static_cast<int>(rng.next_u64() % 3);
  const int n_zeros =
      cfg.max_zero_count > 0
          ? static_cast<int>(rng.next_u64() % (cfg.max_zero_count + 1))
          : 0;
  for (int i = 0; i < n_zeros; ++i) {
    Complex a;
    for (int attempt = 0; attempt < 256; ++attempt) {
      a = std::polar(draw_zero_radius(cfg, rng), rng.next_in(0.0, kTwoPi));
      bool clear = true;
      for (const auto& other : spec.zeros)
        if (std::abs(a - other.position) < 0.05) clear = false;
      if (clear) break;
    }
    spec.zeros.push_back({a, 1});
  }

  const int degree = cfg.max_outer_degree > 0
                         ? static_cast<int>(rng.next_u64() %
                                            (cfg.max_outer_degree + 1))
                         : 0;
  spec.outer.mean = rng.next_in(-0.5, 0.5);
  spec.outer.cos_coeffs.resize(degree);
  spec.outer.sin_coeffs.resize(degree);
  for (int n = 1; n <= degree; ++n) {
    spec.outer.cos_coeffs[n - 1] =
        rng.next_symmetric() * cfg.coefficient_bound / (n + 1);
    spec.outer.sin_coeffs[n - 1] =
        rng.next_symmetric() * cfg.coefficient_bound / (n + 1);
  }

  auto draw_atoms = [&](AtomicSingularInner& inner) {
    const int count =
        1 + (cfg.max_atoms > 1
                 ? static_cast<int>(rng.next_u64() % cfg.max_atoms)
                 : 0);
    for (int i = 0; i < count; ++i) {
      double theta = 0.0;
      for (int attempt = 0; attempt < 256; ++attempt) {
        theta = rng.next_in(0.0, kTwoPi);
        bool clear = true;
        for (const auto& atom : spec.atoms_num.atoms)
          if (angle_distance(theta, atom.theta) < 0.1) clear = false;
        for (const auto& atom : spec.atoms_den.atoms)
          if (angle_distance(theta, atom.theta) < 0.1) clear = false;
        if (clear) break;
      }
      inner.atoms.push_back({theta, rng.next_in(0.05, 0.5)});
    }
  };
  if (with_atoms) draw_atoms(spec.atoms_num);
  if (with_denominator) draw_atoms(spec.atoms_den);
  return spec;
}

FunctionSpec make_gauge_variant(const FunctionSpec& spec, double lambda) {
  FunctionSpec out = spec;
  out.gauge_phase += lambda;
  return out;
}

FunctionSpec make_single_circle_impostor(const FunctionSpec& spec,
                                         Complex a_prime, double rho) {
  // The scaled factor is unimodular on |z| = rho for every a', so a' may
  // sit inside or outside the rho disc - just not on either test circle
  // (and neither may the induced pole rho^2 / conj(a')).
  const double r = std::abs(a_prime);
  if (std::fabs(r - rho) < 1e-3 || std::fabs(r - 1.0) < 1e-3)
    throw DomainError("impostor zero a' must stay clear of rho T and T");
  if (r > kProximityTol) {
    const double pole_r = rho * rho / r;
    if (std::fabs(pole_r - rho) < 1e-3 || std::fabs(pole_r - 1.0) < 1e-3)
      throw DomainError(
          "impostor pole rho^2/conj(a') must stay clear of rho T and T");
  }
  if (spec.kind != SpecKind::rational)
    throw DataError(
        "the rho-scaled factor introduces a free pole; only rational specs "
        "can absorb it");
  // rho (z - a')/(rho^2 - conj(a') z) = (-rho/conj(a')) (z - a')/(z - rho^2/conj(a'))
  FunctionSpec out = spec;
  if (std::abs(a_prime) < kProximityTol) {
    // Factor degenerates to z / rho.
    out.zeros.push_back({Complex{0.0, 0.0}, 1});
    out.scale /= rho;
    return out;
  }
  out.zeros.push_back({a_prime, 1});
  out.poles.push_back({rho * rho / std::conj(a_prime), 1});
  out.scale *= -rho / std::conj(a_prime);
  return out;
}

FunctionSpec random_rational_spec(const GeneratorConfig& cfg, int max_poles) {
  cfg.validate();
  CounterRng rng(cfg.seed ^ 0xA11CEull);
  FunctionSpec spec;
  spec.kind = SpecKind::rational;
  spec.scale = std::polar(rng.next_in(0.2, 2.0), rng.next_in(0.0, kTwoPi));

  auto draw_point = [&]() {
    // Radii spread across (0, ~1.6) but clear of both test circles.
    for (int attempt = 0; attempt < 256; ++attempt) {
      const double r = rng.next_in(0.1, 1.6);
      if (std::fabs(r - 1.0) < 0.05) continue;
      if (cfg.avoid_radius > 0.0 && std::fabs(r - cfg.avoid_radius) < cfg.avoid_margin)
        continue;
      return std::polar(r, rng.next_in(0.0, kTwoPi));
    }
    throw DataError("could not place a rational zero/pole");
  };

  const int n_zeros =
      1 + static_cast<int>(rng.next_u64() % std::max(1, cfg.max_zero_count));
  for (int i = 0; i < n_zeros; ++i) spec.zeros.push_back({draw_point(), 1});
  const int n_poles =
      max_poles > 0 ? static_cast<int>(rng.next_u64() % (max_poles + 1)) : 0;
  for (int i = 0; i < n_poles; ++i) {
    Complex p;
    for (int attempt = 0; attempt < 256; ++attempt) {
      p = draw_point();
      bool clear = true;
      for (const auto& zero : spec.zeros)
        if (std::abs(p - zero.position) < 0.05) clear = false;
      if (clear) break;
    }
    spec.poles.push_back({p, 1});
  }
  return spec;
}

}  // namespace holophase
