#pragma once

#include <string>

#include "holophase/circle_retrieval.hpp"
#include "holophase/function_spec.hpp"
#include "holophase/mero_lemma.hpp"
#include "holophase/sampling.hpp"
#include "holophase/segment_retrieval.hpp"

namespace holophase {

// FunctionSpec <-> JSON document.  Unknown fields are rejected.
std::string spec_to_json(const FunctionSpec& spec);
FunctionSpec spec_from_json(const std::string& text);

// Trace <-> CSV ("# domain=..." comment header, then "param,value" rows
// with 17 significant digits).
std::string trace_to_csv(const ModulusTrace& trace);
ModulusTrace trace_from_csv(const std::string& text);

std::string segment_report_to_json(const FunctionSpec& spec,
                                   const CoefficientSolveReport& report);
std::string circle_report_to_json(const FunctionSpec& spec,
                                  const CircleReconstructionReport& report);
std::string verdict_to_json(const EquivalenceVerdict& verdict);
std::string gauge_conclusion_to_json(const GaugeConclusion& conclusion,
                                     const ModulusMatchResult& match);

// Write text to path atomically (temp file in the same directory, then
// rename); partial output is never left behind.
void write_file_atomic(const std::string& path, const std::string& text);
std::string read_file(const std::string& path);

}  // namespace holophase
