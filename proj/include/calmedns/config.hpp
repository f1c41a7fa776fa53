#pragma once

/// Run configuration: a flat key = value document with dotted sections.
/// Parsing validates every key (unknown keys are rejected) and collects all
/// errors instead of stopping at the first. The canonical serialization of
/// the effective configuration (defaults filled in) is hashed into
/// config_hash; every output artifact embeds it.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "calmedns/calming.hpp"
#include "calmedns/integrator.hpp"

namespace calmedns {

struct RunConfig {
  // grid
  int grid_n = 16;
  double grid_dealias = 2.0 / 3.0;
  // model
  double nu = 1.0;
  double alpha = 0.0;   // 0 → νλ₁/2
  double lambda = 0.0;  // 0 → largest resolved eigenvalue
  bool stokes_only = false;  // test hook: drop nonlinearity, forcing and noise
  // calming
  CalmingVariant calming_variant = CalmingVariant::Z1;
  double calming_eps = 2.0;
  // noise
  std::uint64_t noise_seed = 1;
  double noise_gamma = 1.0;
  double noise_dt = 5e-3;
  double noise_horizon = 40.0;
  OuInit noise_init = OuInit::StationarySample;
  // noise profile h
  std::string h_mode = "taylor_green";  // preset name or snapshot path
  double h_scale = 1.0;                 // V-norm
  // forcing
  std::string forcing_kind = "constant";  // zero | constant | exp_window
  double forcing_sigma = 0.0;
  double forcing_amplitude = 0.5;  // L² norm of the profile
  std::string forcing_profile = "shear";
  // stepper
  Scheme scheme = Scheme::ExpEuler;
  double dt = 5e-3;
  double t0 = 0.0;
  double t1 = 10.0;
  int stride = 10;
  // initial state
  std::string initial_mode = "random";  // random | taylor_green | zero | snapshot
  double initial_vnorm = 1.0;
  std::uint64_t initial_seed = 7;
  std::string initial_snapshot;
  // experiment parameters
  double tau = 0.0;
  std::vector<double> horizons{2.0, 4.0, 8.0, 16.0};
  std::vector<double> initial_scales{0.1, 1.0, 3.0, 10.0};
  std::vector<double> thresholds;  // empty → resolved eigenvalue shells
  double delta = 1e-2;
  int seeds = 3;
  // diagnostics
  std::vector<double> tails{1.0, 4.0, 9.0, 25.0};
  bool weak_residual = false;

  std::string canonical() const;
  std::string hash() const;  // 16 hex digits of fnv1a(canonical())
};

struct ParseOutcome {
  std::optional<RunConfig> config;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty() && config.has_value(); }
};

/// Parses and validates; returns either a config or the full error list.
ParseOutcome parse_config(const std::string& text);

ParseOutcome parse_config_file(const std::string& path);

}  // namespace calmedns
