#pragma once

#include <cstdint>
#include <string>

#include "parasol/applications.hpp"
#include "parasol/heat.hpp"
#include "parasol/kaplan.hpp"
#include "parasol/propagator.hpp"
#include "parasol/report.hpp"

namespace parasol {

// Config-driven front end shared by the CLI and the tests.  The document is
// a single JSON object with strictly checked keys:
//   {"scenario": "heat"|"parabolic"|"propagator"|"verify"|"constants",
//    "seed": 1, "threads": 1,
//    "operator": {...}, "form": {...}, "grid": {...}, "source": {...},
//    "tolerances": {...}, "output": {...}}
struct Tolerances {
  double heat_agreement_rel = 1e-3;     // stepped vs resolvent heat solutions
  double energy_residual_dt_factor = 20.0;  // energy equality, times dt*scale
  double represent_dt_factor = 5.0;     // representation vs direct, times dt
};

struct RunConfig {
  std::string scenario;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out_dir;  // default artifact directory (--out overrides)
  Tolerances tol;
  std::string raw;  // canonical dump for hashing and echo

  // Parsed sections (kept as JSON snippets; builders below interpret them).
  std::string operator_spec, form_spec, grid_spec, source_spec;
};

RunConfig parse_config(const std::string& json_text);

// Section builders (also used directly by tests).
OpPtr build_operator(const std::string& json_text, std::uint64_t seed);
TimeGrid build_grid(const std::string& json_text);
FormFamily build_form(const std::string& json_text, OpPtr op, const TimeGrid& grid);
SourceSpec build_source(const std::string& json_text, const TimeGrid& grid,
                        const OpPtr& op, std::uint64_t seed);

// Executes the scenario, writes artifacts (trajectory CSVs, propagator
// files, report.json) under out_dir, and returns the report.
Report run_scenario(const RunConfig& config, const std::string& out_dir);

// The full seeded invariant battery across operators x forms x grids,
// including the convergence tables.  Cells execute in a worker pool of
// config.threads workers (PARASOL_THREADS overrides); assembly of the
// report is deterministic.
Report verify_suite(const RunConfig& config);

// The process exit policy: 0 all checks pass, 1 a check failed,
// 2 config parse error, 3 numeric failure.
int exit_code_for(const Report& rep);

}  // namespace parasol
