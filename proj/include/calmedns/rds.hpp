#pragma once

/// Random-dynamical-systems layer: the cocycle Φ induced by the v-equation,
/// pullback experiments at a fixed observation time, absorbing-radius
/// estimation, spectral-tail (flattening) analysis and attractor-convergence
/// diagnostics.
///
/// Φ(t, τ, ω, u_τ) = v(t+τ; τ, θ_{−τ}ω, u_τ − h z(ω)) + h z(θ_t ω); a pullback
/// evaluation Φ(t, τ−t, θ_{−t}ω, u₀) therefore integrates the v-equation over
/// [τ−t, τ] with the OU driver read at clock time s − τ of one fixed master
/// path. Experiments keep one realized path per seed (quenched); ensembles
/// loop over seeds. Independent (seed, initial, horizon) cells run in
/// parallel and are merged by cell index, so reports do not depend on
/// scheduling.

#include <cstdint>
#include <vector>

#include "calmedns/diagnostics.hpp"
#include "calmedns/integrator.hpp"
#include "calmedns/model.hpp"
#include "calmedns/noise.hpp"

namespace calmedns {

struct TheoryOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoiseConfig {
  std::uint64_t seed = 1;
  double gamma = 1.0;
  double dt = 5e-3;
  double horizon = 40.0;  // path spans [−horizon, horizon]
  OuInit init = OuInit::StationarySample;
};

struct NoiseRealization {
  std::uint64_t seed = 0;
  WienerPath wiener;
  OUPath z;
  static NoiseRealization make(const NoiseConfig& cfg);
};

/// Φ(t, τ, ω, u_τ); path_shift replaces ω by θ_shift ω (grid-aligned).
SpectralField cocycle(const ModelParams& m, const StepperConfig& cfg,
                      const NoiseRealization& noise, double t, double tau,
                      const SpectralField& u_tau, double path_shift = 0.0);

struct PullbackRun {
  double horizon = 0.0;
  TrajectoryRecord record;     // v-trajectory over [τ−t, τ]
  SpectralField terminal_u;    // u(τ) = v(τ) + h z(0)
  double z_at_tau = 0.0;
  double z_at_start = 0.0;
};

/// Φ(t, τ−t, θ_{−t}ω, u₀) with the full in-flight record.
PullbackRun pullback_run(const ModelParams& m, const StepperConfig& cfg,
                         const NoiseRealization& noise, double tau, double t,
                         const SpectralField& u0);

struct PullbackFamilyEntry {
  int initial_index = 0;
  double horizon = 0.0;
  double terminal_grad_sq = 0.0;  // ‖∇u(τ)‖²
  SpectralField terminal_u;
};

/// States at time τ started t in the past, for every (initial, t) pair.
std::vector<PullbackFamilyEntry> pullback_family(const ModelParams& m, const StepperConfig& cfg,
                                                 const NoiseRealization& noise, double tau,
                                                 const std::vector<double>& t_list,
                                                 const std::vector<SpectralField>& initials);

struct AbsorbingEstimate {
  double m1 = 0.0;
  double bracket = 0.0;     // 1 + z(0)² + ∫ e^{κr}(‖f(r+τ)‖² + z(r)²) dr
  double r_v = 0.0;         // M₁ · bracket
  double z0_sq = 0.0;
  double f_integral = 0.0;
  double z_integral = 0.0;
  double truncation = 0.0;  // e^{−κT}
};

/// Quadrature of the absorbing-radius bracket over [−T, 0] at the path step.
/// Requires κ > 0 and e^{−κT} < 1e−6. `shift` evaluates R_V(τ+shift, θ_shift ω).
AbsorbingEstimate absorbing_radius(const ModelParams& m, const ConstantsLedger& lg,
                                   const NoiseRealization& noise, double tau, double T,
                                   double shift = 0.0);

struct AbsorbingCell {
  std::uint64_t seed = 0;
  int initial_index = 0;
  double initial_grad_norm = 0.0;
  double horizon = 0.0;
  double terminal_grad_sq = 0.0;
  double r_v = 0.0;
  bool absorbed = false;          // terminal ‖∇u(τ)‖² ≤ R_V
  double entry_time = 0.0;        // first record time with the tail of the
                                  // trajectory inside the ball (+inf if never)
  bool envelope_applicable = false;  // e^{−κt}‖∇v(start)‖² ≤ 1
  double envelope_worst_ratio = 0.0; // max_s ‖∇v(s)‖² / uniform envelope
};

struct AbsorbingReport {
  std::vector<double> horizons;
  std::vector<double> initial_scales;
  std::vector<std::uint64_t> seeds;
  std::vector<double> r_v_per_seed;
  std::vector<AbsorbingCell> cells;  // seed-major, then initial, then horizon
  bool all_families_absorb = true;   // each (seed, initial): absorbed for all
                                     // horizons past its entry horizon, and at
                                     // the largest horizon
  bool entry_times_monotone = true;  // absolute entry time nonincreasing in t
  bool envelope_ok = true;           // uniform estimate holds where applicable
};

/// Pullback absorption experiment: initial V-norms are scale·√R_V per seed.
AbsorbingReport absorbing_experiment(const ModelParams& m, const StepperConfig& cfg,
                                     const ConstantsLedger& lg,
                                     const std::vector<std::uint64_t>& seeds,
                                     const NoiseConfig& noise_cfg, double tau,
                                     const std::vector<double>& initial_scales,
                                     const std::vector<double>& horizons,
                                     double envelope_tol = 1.05);

struct FlatteningRow {
  double lambda = 0.0;
  double lambda_next = 0.0;
  bool resolved = true;       // false: threshold at/beyond grid resolution
  double tail_v = 0.0;        // ‖(I−P_Λ)v(τ)‖_V
  double tail_u = 0.0;        // ‖(I−P_Λ)u(τ)‖_V
  double noise_tail = 0.0;    // |z(0)|·‖(I−P_Λ)h‖_V
  double i1 = 0.0, i2 = 0.0, i3 = 0.0, i4 = 0.0;  // tail energy budget terms
  double i2_envelope = 0.0;   // (2M_ε²/ν)·c_unif·bracket/(νλ_next − κ)
  double budget = 0.0;        // I₁+I₂+I₃+I₄, bounds tail_v²
  bool below_delta = false;   // tail_u < δ
};

struct FlatteningReport {
  double delta = 0.0;
  double horizon = 0.0;
  bool entry_ok = false;  // e^{−κt}‖∇v(start)‖² ≤ 1
  std::vector<FlatteningRow> rows;
  double smallest_passing_lambda = 0.0;  // 0 when none
};

FlatteningReport flattening_analysis(const ModelParams& m, const StepperConfig& cfg,
                                     const ConstantsLedger& lg, const NoiseRealization& noise,
                                     double tau, double t, const std::vector<double>& thresholds,
                                     double delta, const SpectralField& u0);

struct CauchyReport {
  std::vector<double> horizons;
  // gap_horizon[i][j] = ‖U_i(t_j) − U_i(t_{j+1})‖_V for initial i
  std::vector<std::vector<double>> gap_horizon;
  // gap_initial[j] = ‖U_0(t_j) − U_1(t_j)‖_V
  std::vector<double> gap_initial;
  double noise_floor = 0.0;  // dt-halved control at the largest horizon
  bool horizon_gaps_decreasing = true;
  bool initial_gaps_decreasing = true;
};

CauchyReport attractor_cauchy_test(const ModelParams& m, const StepperConfig& cfg,
                                   const NoiseRealization& noise, double tau,
                                   const std::vector<SpectralField>& initials,
                                   const std::vector<double>& horizons);

struct CalmingProbeReport {
  double sup_v_gap = 0.0;
  double compared_until = 0.0;
  bool truncated_by_blowup = false;
};

/// Sup-over-time V-gap between two models differing only in their calming map
/// (no noise), integrated from the same initial state.
CalmingProbeReport calming_consistency_probe(const ModelParams& a, const ModelParams& b,
                                             const StepperConfig& cfg, const SpectralField& v0);

}  // namespace calmedns
