#pragma once

// Verification suites and their machine-readable reports.

#include <cstdint>
#include <string>
#include <vector>

#include "otlab/rigidity.hpp"

namespace otlab {

struct Assertion {
  std::string id;
  std::string description;
  std::string expected;  // rendered values; numeric fields use shortest
  std::string actual;    // round-trip formatting for byte determinism
  double tolerance;
  bool pass;
};

// wall_time_ms is runtime telemetry only: it is deliberately left out of
// the serialized form so identical seeds produce byte-identical reports.
struct RunReport {
  std::string suite;
  std::uint64_t seed;
  std::vector<Assertion> assertions;
  double wall_time_ms = 0.0;

  bool all_pass() const;
};

// Known suites: ray-formulas, delta2-chart, exotic, frechet,
// cylinder-branching, suspension-midpoints, conditions.
// Throws input_error for unknown names. Deterministic for a fixed seed.
RunReport run_suite(const std::string& name, std::uint64_t seed);

const std::vector<std::string>& suite_names();

std::string report_to_json(const RunReport& report);
std::string report_to_csv(const RunReport& report);
RunReport report_from_json(const std::string& text);

}  // namespace otlab
