#include "holophase/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace holophase {

using nlohmann::json;

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw DataError("expected [re, im] pair in spec JSON");
  return Complex{j[0].get<double>(), j[1].get<double>()};
}

json zeros_to_json(const std::vector<ZeroEntry>& zeros) {
  json arr = json::array();
  for (const auto& z : zeros)
    arr.push_back({{"re", z.position.real()},
                   {"im", z.position.imag()},
                   {"mult", z.multiplicity}});
  return arr;
}

std::vector<ZeroEntry> zeros_from_json(const json& arr) {
  std::vector<ZeroEntry> zeros;
  for (const auto& j : arr) {
    for (const auto& [key, value] : j.items())
      if (key != "re" && key != "im" && key != "mult")
        throw DataError("unknown field in zero entry: " + key);
    zeros.push_back({Complex{j.at("re").get<double>(), j.at("im").get<double>()},
                     j.at("mult").get<int>()});
  }
  return zeros;
}

json atoms_to_json(const AtomicSingularInner& inner) {
  json arr = json::array();
  for (const auto& a : inner.atoms)
    arr.push_back({{"theta", a.theta}, {"mass", a.mass}});
  return arr;
}

AtomicSingularInner atoms_from_json(const json& arr) {
  AtomicSingularInner inner;
  for (const auto& j : arr) {
    for (const auto& [key, value] : j.items())
      if (key != "theta" && key != "mass")
        throw DataError("unknown field in atom entry: " + key);
    inner.atoms.push_back(
        {j.at("theta").get<double>(), j.at("mass").get<double>()});
  }
  return inner;
}

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

}  // namespace

std::string spec_to_json(const FunctionSpec& spec) {
  json j;
  j["gauge_phase"] = spec.gauge_phase;
  switch (spec.kind) {
    case SpecKind::power_series: {
      j["kind"] = "power_series";
      j["origin_order"] = spec.origin_order;
      json coeffs = json::array();
      for (Complex c : spec.exponent_coeffs) coeffs.push_back(complex_to_json(c));
      j["exponent_coeffs"] = coeffs;
      break;
    }
    case SpecKind::rational:
      j["kind"] = "rational";
      j["zeros"] = zeros_to_json(spec.zeros);
      j["poles"] = zeros_to_json(spec.poles);
      j["scale"] = {{"re", spec.scale.real()}, {"im", spec.scale.imag()}};
      break;
    case SpecKind::factored:
      j["kind"] = "factored";
      j["origin_order"] = spec.origin_order;
      j["zeros"] = zeros_to_json(spec.zeros);
      j["outer"] = {{"mean", spec.outer.mean},
                    {"cos", spec.outer.cos_coeffs},
                    {"sin", spec.outer.sin_coeffs}};
      j["atoms_num"] = atoms_to_json(spec.atoms_num);
      j["atoms_den"] = atoms_to_json(spec.atoms_den);
      break;
  }
  return j.dump(2) + "\n";
}

FunctionSpec spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DataError(std::string("spec JSON parse error: ") + e.what());
  }
  const std::string kind = j.at("kind").get<std::string>();

  std::set<std::string> allowed{"kind", "gauge_phase"};
  FunctionSpec spec;
  spec.gauge_phase = j.value("gauge_phase", 0.0);
  if (kind == "power_series") {
    spec.kind = SpecKind::power_series;
    allowed.insert({"origin_order", "exponent_coeffs"});
    spec.origin_order = j.value("origin_order", 0);
    if (j.contains("exponent_coeffs"))
      for (const auto& c : j.at("exponent_coeffs"))
        spec.exponent_coeffs.push_back(complex_from_json(c));
  } else if (kind == "rational") {
    spec.kind = SpecKind::rational;
    allowed.insert({"zeros", "poles", "scale"});
    if (j.contains("zeros")) spec.zeros = zeros_from_json(j.at("zeros"));
    if (j.contains("poles")) spec.poles = zeros_from_json(j.at("poles"));
    if (j.contains("scale")) {
      const auto& s = j.at("scale");
      for (const auto& [key, value] : s.items())
        if (key != "re" && key != "im")
          throw DataError("unknown field in scale: " + key);
      spec.scale = Complex{s.at("re").get<double>(), s.at("im").get<double>()};
    }
  } else if (kind == "factored") {
    spec.kind = SpecKind::factored;
    allowed.insert({"origin_order", "zeros", "outer", "atoms_num", "atoms_den"});
    spec.origin_order = j.value("origin_order", 0);
    if (j.contains("zeros")) spec.zeros = zeros_from_json(j.at("zeros"));
    if (j.contains("outer")) {
      const auto& o = j.at("outer");
      for (const auto& [key, value] : o.items())
        if (key != "mean" && key != "cos" && key != "sin")
          throw DataError("unknown field in outer: " + key);
      spec.outer.mean = o.value("mean", 0.0);
      if (o.contains("cos"))
        spec.outer.cos_coeffs = o.at("cos").get<std::vector<double>>();
      if (o.contains("sin"))
        spec.outer.sin_coeffs = o.at("sin").get<std::vector<double>>();
    }
    if (j.contains("atoms_num")) spec.atoms_num = atoms_from_json(j.at("atoms_num"));
    if (j.contains("atoms_den")) spec.atoms_den = atoms_from_json(j.at("atoms_den"));
  } else {
    throw DataError("unknown spec kind: " + kind);
  }

  for (const auto& [key, value] : j.items())
    if (!allowed.count(key))
      throw DataError("unknown field in spec JSON: " + key);
  spec.validate();
  return spec;
}

std::string trace_to_csv(const ModulusTrace& trace) {
  std::ostringstream os;
  if (trace.domain == ModulusTrace::Domain::circle) {
    os << "# domain=circle\n";
    os << "# rho=" << format_double(trace.rho) << "\n";
  } else {
    os << "# domain=segment\n";
    os << "# midpoint=" << format_double(trace.segment.midpoint.real()) << " "
       << format_double(trace.segment.midpoint.imag())
       << ",half_length=" << format_double(trace.segment.half_length)
       << ",beta=" << format_double(trace.segment.direction_angle)
       << ",alpha=" << format_double(trace.pair_alpha) << "\n";
    if (!trace.leg.empty()) os << "# leg=" << trace.leg << "\n";
  }
  for (std::size_t i = 0; i < trace.params.size(); ++i)
    os << format_double(trace.params[i]) << ","
       << format_double(trace.values[i]) << "\n";
  return os.str();
}

ModulusTrace trace_from_csv(const std::string& text) {
  ModulusTrace trace;
  bool saw_domain = false;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body = body.substr(1);
      if (body.rfind("domain=", 0) == 0) {
        const std::string d = body.substr(7);
        if (d == "circle") trace.domain = ModulusTrace::Domain::circle;
        else if (d == "segment") trace.domain = ModulusTrace::Domain::segment;
        else throw DataError("unknown trace domain: " + d);
        saw_domain = true;
      } else if (body.rfind("rho=", 0) == 0) {
        trace.rho = std::stod(body.substr(4));
      } else if (body.rfind("midpoint=", 0) == 0) {
        double re, im, half, beta, alpha;
        if (std::sscanf(body.c_str(),
                        "midpoint=%lf %lf,half_length=%lf,beta=%lf,alpha=%lf",
                        &re, &im, &half, &beta, &alpha) != 5)
          throw DataError("malformed segment trace header: " + line);
        trace.segment.midpoint = Complex{re, im};
        trace.segment.half_length = half;
        trace.segment.direction_angle = beta;
        trace.pair_alpha = alpha;
      } else if (body.rfind("leg=", 0) == 0) {
        trace.leg = body.substr(4);
      } else {
        throw DataError("unknown trace header line: " + line);
      }
      continue;
    }
    double param, value;
    if (std::sscanf(line.c_str(), "%lf,%lf", &param, &value) != 2)
      throw DataError("malformed trace row: " + line);
    trace.params.push_back(param);
    trace.values.push_back(value);
  }
  if (!saw_domain) throw DataError("trace CSV is missing the domain header");
  trace.validate();
  return trace;
}

std::string segment_report_to_json(const FunctionSpec& spec,
                                   const CoefficientSolveReport& report) {
  json j;
  j["k"] = report.origin_order;
  json coeffs = json::array();
  for (Complex c : spec.exponent_coeffs) coeffs.push_back(complex_to_json(c));
  j["coeffs"] = coeffs;
  j["kappa"] = report.kappa;
  j["fit_residuals"] = {{"I", report.fit_residual_I},
                        {"Ialpha", report.fit_residual_Ialpha}};
  return j.dump(2) + "\n";
}

std::string circle_report_to_json(const FunctionSpec& spec,
                                  const CircleReconstructionReport& report) {
  json j;
  j["m"] = report.zero_count;
  j["k"] = report.origin_order;
  j["residual"] = report.residual;
  json zeros = json::array();
  for (std::size_t i = 0; i < spec.zeros.size(); ++i)
    zeros.push_back({{"re", spec.zeros[i].position.real()},
                     {"im", spec.zeros[i].position.imag()},
                     {"conf", i < report.zero_confidence.size()
                                  ? report.zero_confidence[i]
                                  : 0.0}});
  j["zeros"] = zeros;
  j["gauge_fixed"] = true;
  return j.dump(2) + "\n";
}

std::string verdict_to_json(const EquivalenceVerdict& verdict) {
  json j;
  j["equivalent"] = verdict.equivalent;
  j["gauge"] = {{"re", verdict.gauge.real()}, {"im", verdict.gauge.imag()}};
  j["residual_T"] = verdict.residual_T;
  j["residual_rhoT"] = verdict.residual_rhoT;
  j["interior_ratio_deviation"] = verdict.interior_ratio_deviation;
  return j.dump(2) + "\n";
}

std::string gauge_conclusion_to_json(const GaugeConclusion& conclusion,
                                     const ModulusMatchResult& match) {
  json j;
  j["c"] = {{"re", conclusion.c.real()}, {"im", conclusion.c.imag()}};
  j["m"] = conclusion.m;
  j["ratio_deviation"] = conclusion.ratio_deviation;
  j["unimodular"] = conclusion.unimodular;
  j["rho_consistent"] = conclusion.rho_consistent;
  j["match"] = {{"matched", match.matched},
                {"deviation_T", match.deviation_T},
                {"deviation_rhoT", match.deviation_rhoT}};
  return j.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out.flush()) throw DataError("write failed for " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace holophase
