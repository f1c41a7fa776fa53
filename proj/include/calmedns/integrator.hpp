#pragma once

/// Time integration of the Galerkin system in v-form. After the OU transform
/// the dynamics is a pathwise random ODE, so deterministic exponential
/// steppers apply: the Stokes part is integrated exactly by the per-mode
/// factor e^{−ν|k|²dt} and the remainder N explicitly.
///
///   exp_euler : v⁺ = e^{Ldt}(v + dt·N(v, t_n))
///   etdrk2    : a  = e^{Ldt}v + dt·φ₁(Ldt)·N(v, t_n)
///               v⁺ = a + dt·φ₂(Ldt)·(N(a, t_{n+1}) − N(v, t_n))
///
/// The OU value z is frozen per step at the cell of the step start, matching
/// the piecewise-constant driver semantics of OUPath: every aligned step size
/// integrates the same non-autonomous ODE, so dt-refinement studies are
/// well-posed. The stepper dt must divide the noise grid dt.

#include <optional>
#include <vector>

#include "calmedns/model.hpp"
#include "calmedns/noise.hpp"

namespace calmedns {

enum class Scheme { ExpEuler, Etdrk2 };
std::string to_string(Scheme s);

struct StepperConfig {
  Scheme scheme = Scheme::ExpEuler;
  double dt = 5e-3;
  double t0 = 0.0;
  double t1 = 1.0;
  int snapshot_stride = 10;
  std::vector<double> tail_thresholds;
  bool record_weak_residual = false;
};

struct BlowUpError : std::runtime_error {
  explicit BlowUpError(double t);
  double time;
};

/// Time-shifted view of an OU path: z(t) = ou->cell_value(t + offset).
/// A null path means z ≡ 0.
struct PathFrame {
  const OUPath* ou = nullptr;
  double offset = 0.0;
  double z_cell(double t) const { return ou ? ou->cell_value(t + offset) : 0.0; }
};

struct TrajectoryRecord {
  std::vector<double> t;
  std::vector<double> norm_v, norm_grad_v, norm_av, z, norm_f;
  std::vector<double> tail_thresholds;
  std::vector<std::vector<double>> tails;  // tails[j][i]: tail V-norm at threshold j
  std::vector<double> weak_residual;       // empty unless recorded
  std::optional<SpectralField> final_state;
  double dt = 0.0;
  Scheme scheme = Scheme::ExpEuler;

  std::size_t size() const { return t.size(); }
};

class Stepper {
 public:
  Stepper(const ModelParams& m, StepperConfig cfg);

  const StepperConfig& config() const { return cfg_; }
  const ModelParams& model() const { return m_; }

  /// One step in place; t is the step start time.
  void step(SpectralField& v, double t, const PathFrame& frame);

  /// March from t0 to t1, recording diagnostics every snapshot_stride steps
  /// (and always at t1). Throws BlowUpError on non-finite state.
  TrajectoryRecord integrate(const SpectralField& v0, const PathFrame& frame);

 private:
  void record(TrajectoryRecord& rec, const SpectralField& v, double t, const PathFrame& frame,
              const SpectralField* v_prev, const SpectralField* rhs_prev);

  const ModelParams& m_;
  StepperConfig cfg_;
  SpectralWorkspace ws_;
  std::vector<double> decay_, phi1dt_, phi2dt_;
  SpectralField n0_, n1_, stage_;
  std::vector<SpectralField> battery_;  // weak-formulation test fields
};

struct ContinuousDependenceReport {
  std::vector<double> t;
  std::vector<double> gap_sq;      // ‖u_a − u_b‖²_{L²}
  std::vector<double> bound;       // e^{c_dep ∫‖Au_b‖^{4/3}} ‖ũ₀‖²
  double initial_gap_sq = 0.0;
  double max_gap_sq = 0.0;
  double worst_ratio = 0.0;        // max gap²/bound
  bool satisfied = true;
};

/// Runs the pair on the same frame and checks the uniqueness-style bound with
/// the supplied Grönwall coefficient.
ContinuousDependenceReport continuous_dependence_experiment(
    const ModelParams& m, const StepperConfig& cfg, const PathFrame& frame,
    const SpectralField& v0_a, const SpectralField& v0_b, double c_dep);

}  // namespace calmedns
