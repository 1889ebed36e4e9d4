// holophase: phase retrieval of holomorphic functions from modulus data
// on two segments or two concentric circles.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "holophase/circle_retrieval.hpp"
#include "holophase/generators.hpp"
#include "holophase/io.hpp"
#include "holophase/mero_lemma.hpp"
#include "holophase/sampling.hpp"
#include "holophase/segment_retrieval.hpp"
#include "json.hpp"

using namespace holophase;

namespace {

int thread_budget(int trials) {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("HOLOPHASE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::min(n, trials);
}

// Deterministic parallel map: results land in trial order regardless of
// scheduling.
template <typename Fn>
void parallel_trials(int trials, Fn&& body) {
  const int workers = thread_budget(trials);
  if (workers <= 1) {
    for (int t = 0; t < trials; ++t) body(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int t = w; t < trials; t += workers) body(t);
    });
  for (auto& th : pool) th.join();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty())
    std::cout << text;
  else
    write_file_atomic(path, text);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<Complex> disc_grid(double radius, int n) {
  std::vector<Complex> grid;
  grid.push_back(Complex{0.0, 0.0});
  for (int j = 1; j < n; ++j)
    grid.push_back(std::polar(radius * j / (n - 1), 2.399963 * j));
  return grid;
}

double gauge_aligned_sup_error(const FunctionSpec& truth,
                               const FunctionSpec& recon, double radius) {
  const auto grid = disc_grid(radius, 40);
  Complex mean{0.0, 0.0};
  for (Complex z : grid) {
    const Complex tv = eval(truth, z);
    if (std::abs(tv) < 1e-8) continue;
    mean += eval(recon, z) / tv;
  }
  const double norm = std::abs(mean);
  const Complex c = norm > 0 ? mean / norm : Complex{1.0, 0.0};
  double sup = 0.0;
  for (Complex z : grid)
    sup = std::max(sup, std::abs(eval(recon, z) - c * eval(truth, z)));
  return sup;
}

double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double idx = p * (static_cast<double>(v.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(idx);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (idx - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

SegmentPair canonical_pair(double alpha) {
  SegmentPair pair;
  pair.base = SegmentSpec{Complex{0.0, 0.0}, 1.0, 0.0};
  pair.rotation_angle = alpha;
  return pair;
}

// "trace.csv" -> "trace_alpha.csv" for the rotated leg.
std::string alpha_leg_path(const std::string& out) {
  const auto dot = out.rfind('.');
  if (dot == std::string::npos) return out + "_alpha";
  return out.substr(0, dot) + "_alpha" + out.substr(dot);
}

struct ExperimentConfig {
  std::string kind;
  int trials = 1;
  std::uint64_t seed = 1;
  std::vector<double> grid;
  std::string out;
};

ExperimentConfig load_experiment_config(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("experiment config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "kind") cfg.kind = value.get<std::string>();
    else if (key == "trials") cfg.trials = value.get<int>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "grid") cfg.grid = value.get<std::vector<double>>();
    else if (key == "out") cfg.out = value.get<std::string>();
    else throw DataError("unknown experiment config field: " + key);
  }
  if (cfg.trials < 1) throw DataError("experiment trials must be >= 1");
  if (cfg.grid.empty()) throw DataError("experiment grid must be nonempty");
  return cfg;
}

std::string run_alpha_conditioning(const ExperimentConfig& cfg) {
  const int N = 8;
  std::string csv = "alpha,n,kappa,recon_error\n";
  for (double alpha : cfg.grid) {
    GeneratorConfig gen;
    gen.seed = cfg.seed;
    gen.max_series_degree = N;
    const auto truth = random_power_series_spec(gen, 1);
    const auto [trace_I, trace_Ia] =
        sample_segment(truth, canonical_pair(alpha), 401);
    const auto [recon, report] =
        reconstruct_from_segments(trace_I, trace_Ia, alpha, N);
    for (int n = 1; n <= N; ++n) {
      const Complex truth_c = n < static_cast<int>(truth.exponent_coeffs.size())
                                  ? truth.exponent_coeffs[n]
                                  : Complex{0.0, 0.0};
      csv += format_double(alpha) + "," + std::to_string(n) + "," +
             format_double(report.kappa[n - 1]) + "," +
             format_double(std::abs(recon.exponent_coeffs[n] - truth_c)) + "\n";
    }
  }
  return csv;
}

std::string run_noise_robustness(const ExperimentConfig& cfg) {
  const double alpha = std::sqrt(2.0);
  const int N = 8;
  std::string csv = "noise,median_error,p90_error\n";
  for (double level : cfg.grid) {
    std::vector<double> errors(cfg.trials, 0.0);
    std::vector<int> failed(cfg.trials, 0);
    parallel_trials(cfg.trials, [&](int t) {
      GeneratorConfig gen;
      gen.seed = cfg.seed + static_cast<std::uint64_t>(t);
      gen.coefficient_bound = 0.5;
      const auto truth = random_power_series_spec(gen, t % 3);
      auto [trace_I, trace_Ia] =
          sample_segment(truth, canonical_pair(alpha), 401);
      trace_I = add_noise(trace_I, level, gen.seed * 2);
      trace_Ia = add_noise(trace_Ia, level, gen.seed * 2 + 1);
      try {
        SegmentFitOptions opts;
        opts.residual_threshold = std::max(1e-6, 100.0 * level);
        const auto [recon, report] =
            reconstruct_from_segments(trace_I, trace_Ia, alpha, N, opts);
        errors[t] = gauge_aligned_sup_error(truth, recon, 0.3);
      } catch (const ConditioningError&) {
        failed[t] = 1;
      } catch (const DataError&) {
        failed[t] = 1;
      }
    });
    std::vector<double> ok;
    for (int t = 0; t < cfg.trials; ++t)
      if (!failed[t]) ok.push_back(errors[t]);
    if (ok.empty()) throw ModelMismatchError("all trials failed at noise level " +
                                             format_double(level));
    csv += format_double(level) + "," + format_double(percentile(ok, 0.5)) +
           "," + format_double(percentile(ok, 0.9)) + "\n";
  }
  return csv;
}

std::string run_rho_sweep(const ExperimentConfig& cfg) {
  std::string csv = "rho,median_error,p90_error\n";
  for (double rho : cfg.grid) {
    std::vector<double> errors(cfg.trials, 0.0);
    parallel_trials(cfg.trials, [&](int t) {
      GeneratorConfig gen;
      gen.seed = cfg.seed + static_cast<std::uint64_t>(t);
      gen.max_zero_count = 3;
      gen.max_outer_degree = 4;
      gen.avoid_radius = rho;
      const auto truth = random_factored_spec(gen, false, false);
      CirclePairData data;
      data.rho = rho;
      data.outer_trace = sample_circle(truth, 1.0, 1024);
      data.inner_trace = sample_circle(truth, rho, 1024);
      const auto [recon, report] = reconstruct_from_circles(data, 5);
      errors[t] = gauge_aligned_sup_error(truth, recon, 0.3);
    });
    csv += format_double(rho) + "," + format_double(percentile(errors, 0.5)) +
           "," + format_double(percentile(errors, 0.9)) + "\n";
  }
  return csv;
}

int run(int argc, char** argv) {
  CLI::App app{"phase retrieval of holomorphic functions on the unit disc"};
  app.require_subcommand(1);

  // generate
  auto* gen_cmd = app.add_subcommand("generate", "emit a seeded function spec");
  std::uint64_t gen_seed = 1;
  std::string gen_kind = "factored";
  int gen_degree = 0, gen_max_zeros = 5;
  bool gen_atoms = false, gen_denominator = false;
  std::string gen_out;
  gen_cmd->add_option("--seed", gen_seed, "generator seed");
  gen_cmd->add_option("--kind", gen_kind,
                      "power_series | factored | rational");
  gen_cmd->add_option("--degree", gen_degree,
                      "origin order (power_series kind)");
  gen_cmd->add_option("--max-zeros", gen_max_zeros, "zero budget");
  gen_cmd->add_flag("--with-atoms", gen_atoms, "include singular atoms");
  gen_cmd->add_flag("--with-denominator", gen_denominator,
                    "include a singular denominator");
  gen_cmd->add_option("--out", gen_out, "output path (default stdout)");

  // sample
  auto* sample_cmd =
      app.add_subcommand("sample", "sample |f| on a circle or segment pair");
  std::string sample_spec_path, sample_out;
  int sample_n = 512;
  double sample_rho = -1.0, sample_alpha = std::nan("");
  double sample_noise = 0.0;
  std::uint64_t sample_seed = 1;
  sample_cmd->add_option("--spec", sample_spec_path, "spec JSON path")
      ->required();
  sample_cmd->add_option("--samples", sample_n, "sample count");
  sample_cmd->add_option("--rho", sample_rho, "circle radius in (0, 1]");
  sample_cmd->add_option("--alpha", sample_alpha,
                         "segment rotation angle (radians)");
  sample_cmd->add_option("--noise", sample_noise, "multiplicative noise level");
  sample_cmd->add_option("--seed", sample_seed, "noise seed");
  sample_cmd->add_option("--out", sample_out,
                         "output CSV; segment pairs add an _alpha leg");

  // reconstruct-segments
  auto* rseg_cmd = app.add_subcommand(
      "reconstruct-segments", "recover z^k e^phi from two segment traces");
  std::string rseg_i, rseg_ia, rseg_out, rseg_report;
  double rseg_alpha = std::nan("");
  int rseg_degree = 16;
  rseg_cmd->add_option("--trace-i", rseg_i, "trace CSV for I")->required();
  rseg_cmd->add_option("--trace-ialpha", rseg_ia, "trace CSV for I_alpha")
      ->required();
  rseg_cmd->add_option("--alpha", rseg_alpha,
                       "rotation angle (default: trace header)");
  rseg_cmd->add_option("--degree", rseg_degree, "truncation order N");
  rseg_cmd->add_option("--out", rseg_out, "spec JSON output");
  rseg_cmd->add_option("--report", rseg_report, "report JSON output");

  // reconstruct-circles
  auto* rcirc_cmd = app.add_subcommand(
      "reconstruct-circles", "recover z^k B O from two circle traces");
  std::string rcirc_outer, rcirc_inner, rcirc_out, rcirc_report;
  double rcirc_rho = -1.0, rcirc_tol = 1e-8;
  int rcirc_max_zeros = 8;
  rcirc_cmd->add_option("--trace-outer", rcirc_outer, "trace CSV on T")
      ->required();
  rcirc_cmd->add_option("--trace-inner", rcirc_inner, "trace CSV on rho T")
      ->required();
  rcirc_cmd->add_option("--rho", rcirc_rho,
                        "inner radius (default: trace header)");
  rcirc_cmd->add_option("--tol", rcirc_tol, "acceptance residual");
  rcirc_cmd->add_option("--max-zeros", rcirc_max_zeros, "zero budget");
  rcirc_cmd->add_option("--out", rcirc_out, "spec JSON output");
  rcirc_cmd->add_option("--report", rcirc_report, "report JSON output");

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "two-circle equivalence verdict for two specs");
  std::string verify_f, verify_g, verify_out;
  double verify_rho = 0.6, verify_tol = 1e-8;
  verify_cmd->add_option("--f", verify_f, "spec JSON path")->required();
  verify_cmd->add_option("--g", verify_g, "spec JSON path")->required();
  verify_cmd->add_option("--rho", verify_rho, "inner radius");
  verify_cmd->add_option("--tol", verify_tol, "acceptance tolerance");
  verify_cmd->add_option("--out", verify_out, "verdict JSON output");

  // lemma
  auto* lemma_cmd = app.add_subcommand(
      "lemma", "rational two-circle gauge/divisor conclusion");
  std::string lemma_f, lemma_g, lemma_out;
  double lemma_rho = 0.5, lemma_tol = 1e-10;
  int lemma_samples = 256;
  lemma_cmd->add_option("--f", lemma_f, "rational spec JSON")->required();
  lemma_cmd->add_option("--g", lemma_g, "rational spec JSON")->required();
  lemma_cmd->add_option("--rho", lemma_rho, "second radius (may exceed 1)");
  lemma_cmd->add_option("--tol", lemma_tol, "modulus match tolerance");
  lemma_cmd->add_option("--samples", lemma_samples, "angles per circle");
  lemma_cmd->add_option("--out", lemma_out, "report JSON output");

  // experiment
  auto* exp_cmd =
      app.add_subcommand("experiment", "batch experiment to plot-ready CSV");
  std::string exp_config, exp_out;
  exp_cmd->add_option("--config", exp_config, "ExperimentConfig JSON path")
      ->required();
  exp_cmd->add_option("--out", exp_out, "override the config output path");

  CLI11_PARSE(app, argc, argv);

  if (gen_cmd->parsed()) {
    GeneratorConfig cfg;
    cfg.seed = gen_seed;
    cfg.max_zero_count = gen_max_zeros;
    FunctionSpec spec;
    if (gen_kind == "power_series")
      spec = random_power_series_spec(cfg, gen_degree);
    else if (gen_kind == "factored")
      spec = random_factored_spec(cfg, gen_atoms, gen_denominator);
    else if (gen_kind == "rational")
      spec = random_rational_spec(cfg, 3);
    else
      throw DataError("unknown spec kind: " + gen_kind);
    emit(gen_out, spec_to_json(spec));
    return 0;
  }

  if (sample_cmd->parsed()) {
    const auto spec = spec_from_json(read_file(sample_spec_path));
    const bool circle = sample_rho > 0.0;
    const bool segment = !std::isnan(sample_alpha);
    if (circle == segment)
      throw DataError("pass exactly one of --rho and --alpha");
    if (circle) {
      auto trace = sample_circle(spec, sample_rho, sample_n);
      if (sample_noise > 0.0)
        trace = add_noise(trace, sample_noise, sample_seed);
      emit(sample_out, trace_to_csv(trace));
    } else {
      auto [trace_I, trace_Ia] =
          sample_segment(spec, canonical_pair(sample_alpha), sample_n);
      if (sample_noise > 0.0) {
        trace_I = add_noise(trace_I, sample_noise, sample_seed);
        trace_Ia = add_noise(trace_Ia, sample_noise, sample_seed + 1);
      }
      if (sample_out.empty()) {
        std::cout << trace_to_csv(trace_I) << trace_to_csv(trace_Ia);
      } else {
        write_file_atomic(sample_out, trace_to_csv(trace_I));
        write_file_atomic(alpha_leg_path(sample_out), trace_to_csv(trace_Ia));
      }
    }
    return 0;
  }

  if (rseg_cmd->parsed()) {
    const auto trace_I = trace_from_csv(read_file(rseg_i));
    const auto trace_Ia = trace_from_csv(read_file(rseg_ia));
    const double alpha =
        std::isnan(rseg_alpha) ? trace_I.pair_alpha : rseg_alpha;
    const auto [spec, report] =
        reconstruct_from_segments(trace_I, trace_Ia, alpha, rseg_degree);
    emit(rseg_out, spec_to_json(spec));
    if (!rseg_report.empty() || rseg_out.empty())
      emit(rseg_report, segment_report_to_json(spec, report));
    return 0;
  }

  if (rcirc_cmd->parsed()) {
    CirclePairData data;
    data.outer_trace = trace_from_csv(read_file(rcirc_outer));
    data.inner_trace = trace_from_csv(read_file(rcirc_inner));
    data.rho = rcirc_rho > 0.0 ? rcirc_rho : data.inner_trace.rho;
    CircleReconstructionOptions opts;
    opts.tol = rcirc_tol;
    const auto [spec, report] =
        reconstruct_from_circles(data, rcirc_max_zeros, opts);
    emit(rcirc_out, spec_to_json(spec));
    if (!rcirc_report.empty() || rcirc_out.empty())
      emit(rcirc_report, circle_report_to_json(spec, report));
    return 0;
  }

  if (verify_cmd->parsed()) {
    const auto f = spec_from_json(read_file(verify_f));
    const auto g = spec_from_json(read_file(verify_g));
    const auto verdict = verify_equivalence(f, g, verify_rho, verify_tol);
    emit(verify_out, verdict_to_json(verdict));
    return 0;
  }

  if (lemma_cmd->parsed()) {
    const auto f = RationalFunctionSpec::from_function_spec(
        spec_from_json(read_file(lemma_f)));
    const auto g = RationalFunctionSpec::from_function_spec(
        spec_from_json(read_file(lemma_g)));
    const auto match =
        modulus_match_on_circles(f, g, lemma_rho, lemma_samples, lemma_tol);
    const auto conclusion = conclude_gauge(f, g, lemma_rho);
    emit(lemma_out, gauge_conclusion_to_json(conclusion, match));
    return 0;
  }

  // experiment
  auto cfg = load_experiment_config(exp_config);
  if (!exp_out.empty()) cfg.out = exp_out;
  std::string csv;
  if (cfg.kind == "alpha_conditioning") csv = run_alpha_conditioning(cfg);
  else if (cfg.kind == "noise_robustness") csv = run_noise_robustness(cfg);
  else if (cfg.kind == "rho_sweep") csv = run_rho_sweep(cfg);
  else throw DataError("unknown experiment kind: " + cfg.kind);
  emit(cfg.out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConditioningError& e) {
    std::cerr << "{\"error\":\"conditioning\",\"message\":"
              << nlohmann::json(std::string(e.what())).dump() << "}\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "{\"error\":\"data\",\"message\":"
              << nlohmann::json(std::string(e.what())).dump() << "}\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"internal\",\"message\":"
              << nlohmann::json(std::string(e.what())).dump() << "}\n";
    return 1;
  }
}
