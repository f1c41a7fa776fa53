#pragma once

/// Experiment orchestration: builds the model stack from a RunConfig, runs
/// one of the named experiments, and writes the report artifacts (summary
/// JSON with config/ledger hashes and per-monitor verdicts, CSV time series,
/// the exported constants ledger, binary snapshots). The exit code is a pure
/// function of the monitor verdicts: 0 iff every enabled monitor passed.

#include <optional>
#include <string>

#include "calmedns/config.hpp"
#include "calmedns/model.hpp"

namespace calmedns {

enum class ExperimentKind { Simulate, Pullback, Absorb, Flatten, Cauchy, VerifyCalming, Validate };

std::optional<ExperimentKind> experiment_from_string(const std::string& name);
std::string to_string(ExperimentKind k);

struct ExperimentResult {
  int exit_code = 1;
  bool pass = false;
  std::string summary_path;
};

ExperimentResult run_experiment(const RunConfig& cfg, ExperimentKind kind,
                                const std::string& out_dir);

// Builders shared with the test suites.
GridPtr make_grid(const RunConfig& cfg);
SpectralField make_h(const RunConfig& cfg, GridPtr grid);
ForcingSpec make_forcing(const RunConfig& cfg, GridPtr grid);
ModelParams make_model(const RunConfig& cfg, GridPtr grid);
SpectralField make_initial(const RunConfig& cfg, GridPtr grid);
StepperConfig make_stepper_config(const RunConfig& cfg);

}  // namespace calmedns
