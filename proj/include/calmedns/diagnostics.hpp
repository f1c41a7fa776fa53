#pragma once

/// Energy functionals, the explicit-constants ledger, and inequality monitors.
///
/// The ledger pins every generic constant appearing in the monitored
/// estimates to a concrete number with its derivation chain:
///
///   energy balance (inner product with Av, w = v + hz):
///     d/dt‖∇v‖² + ν‖Av‖² ≤ (2M_ε²/ν)‖∇v‖² + β_f‖f‖² + β_z|z|²
///   with the Young splits (Av budget ν/2 + 4·ν/8):
///     β_f = 8/ν,
///     β_z = 8(M_ε²‖∇h‖² + γ²‖h‖²)/ν + 8ν‖Ah‖²,
///   then Poincaré gives the decay rate κ = νλ₁ − 2M_ε²/ν and the integrated
///   bound ‖∇v(t)‖² ≤ e^{−κ(t−t₀)}‖∇v(t₀)‖² + ∫ e^{−κ(t−s)}(β_f‖f‖²+β_z z²).
///
///   difference estimate (uniqueness route):
///     d/dt‖ũ‖² ≤ (c_dep‖Au₂‖^{4/3} − κ)‖ũ‖²,  c_dep = (3/2)ν^{−1/3}(C_a C_b)^{4/3},
///   where C_a bounds ‖w‖_{L³} ≤ C_a‖w‖^{1/2}‖∇w‖^{1/2} and C_b bounds
///   ‖∇×w‖_{L⁶} ≤ C_b‖Aw‖ on the discrete space. C_a, C_b are sampled grid
///   constants (seeded sweep, safety factor 2) — recorded as such.
///
///   absorbing radius: R_V = M₁[1 + z(0)² + ∫_{−∞}^0 e^{κr}(‖f‖² + z²) dr]
///   with M₁ = 2·max(1, ‖∇h‖², β_f, β_z), and the uniform in-flight envelope
///   constant c_unif = max(1, β_f, β_z).
///
/// Monitors are pure functions of recorded time series and can be re-run
/// offline from the CSV artifacts.

#include <cstdint>
#include <string>
#include <vector>

#include "calmedns/integrator.hpp"
#include "calmedns/model.hpp"

namespace calmedns {

struct LedgerEntry {
  std::string name;
  double value = 0.0;
  std::string formula;
  std::vector<std::string> chain;
};

struct ConstantsLedger {
  double nu = 0.0, gamma = 0.0, m_eps = 0.0;
  double h_l2 = 0.0, h_v = 0.0, h_a = 0.0;
  double kappa = 0.0;
  double beta_f = 0.0, beta_z = 0.0;
  double c_sobolev_l3 = 0.0;  // C_a
  double c_sobolev_l6 = 0.0;  // C_b
  double c_dep = 0.0;
  double c_unif = 0.0;
  double m1 = 0.0;
  std::vector<LedgerEntry> entries;

  const LedgerEntry* find(const std::string& name) const;
};

/// Builds the ledger for a model; samples the grid Sobolev constants with the
/// fixed internal seed so the result is deterministic.
ConstantsLedger build_ledger(const ModelParams& m);

std::string export_ledger_text(const ConstantsLedger& lg);
std::string export_ledger_json(const ConstantsLedger& lg);
std::uint64_t ledger_hash(const ConstantsLedger& lg);

/// Grid L^p norm of a physical field, ((2π)³/n³ Σ |u(x)|^p)^{1/p}.
double physical_lp_norm(const PhysicalField& u, double p);

struct EnergyRow {
  double t = 0.0, norm_v = 0.0, norm_grad_v = 0.0, norm_av = 0.0, z = 0.0, norm_f = 0.0;
  std::vector<double> tails;
};

EnergyRow energy_record(const SpectralField& v, double t, double z, const ModelParams& m,
                        const std::vector<double>& tail_thresholds);

struct MonitorResult {
  bool pass = true;
  double worst_slack = 0.0;  // max over records of lhs − rhs (can be negative)
  double worst_time = 0.0;
  int violations = 0;        // records with slack > tolerance
  double tolerance = 0.0;
};

/// Integrated energy bound along a recorded trajectory:
///   ‖∇v(t_i)‖² ≤ e^{−κ(t_i−t_0)}‖∇v(t_0)‖² + ∫ e^{−κ(t_i−s)}(β_f‖f‖²+β_z z²)
/// with the source integral accumulated by the trapezoidal rule on the record
/// grid. The additive tolerance models the time-discretization error.
MonitorResult gronwall_monitor(const TrajectoryRecord& rec, const ConstantsLedger& lg,
                               double tolerance);

/// Per-interval differential form of the same inequality:
///   Δ‖∇v‖²/Δt ≤ −κ‖∇v‖² + β_f‖f‖² + β_z|z|² + tol.
MonitorResult energy_slope_monitor(const TrajectoryRecord& rec, const ConstantsLedger& lg,
                                   double tolerance);

/// Measured discretization size of the trajectory functional: the largest
/// |‖∇v‖²(coarse) − ‖∇v‖²(fine)| over shared record times. Used as the O(dt)
/// tolerance coefficient source (records must share snapshot times).
double measure_dt_tolerance(const TrajectoryRecord& coarse, const TrajectoryRecord& fine);

// CSV artifacts: schema "t,norm_v,norm_grad_v,norm_Av,z,norm_f[,tail_L<Λ>...]"
// with %.17g formatting (units: time in simulation time, norms in L²([0,2π)³)).
std::string trajectory_csv(const TrajectoryRecord& rec);
void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path);
TrajectoryRecord read_trajectory_csv(const std::string& path);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace calmedns
