#pragma once

/// Seeded scalar Wiener paths on a uniform grid with shift semantics
/// (θ_sω)(t) = ω(s+t) − ω(s), and the derived Ornstein–Uhlenbeck path solving
/// dz + γz dt = dW along the realized increments.
///
/// Increments are counter-keyed by (seed, refinement level, absolute grid
/// index), so extending the grid leftward or shifting the window never
/// changes an increment that was already defined. refined() halves the step
/// by dyadic bridge sampling of the same underlying path.
///
/// The OU recursion is z_{i+1} = e^{−γ dt} z_i + e^{−γ dt} ΔW_i. Relative to
/// the exact stochastic convolution this update carries an O(dt) bias (the
/// increment is damped through the whole step instead of being integrated
/// against e^{−γ(t−s)}); the bias shrinks first order under refinement.
/// Consumers treat z as a piecewise-constant driver on its grid (cell_value).

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace calmedns {

struct InsufficientHorizon : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class WienerPath {
 public:
  /// Path on the grid {i·dt : i_min ≤ i ≤ i_max} covering [t_min, t_max]
  /// (bounds snapped outward), with ω(0) = 0. Requires t_min ≤ 0 ≤ t_max.
  static WienerPath sample(std::uint64_t seed, double t_min, double t_max, double dt);
  /// ω ≡ 0 on the same kind of grid (synthetic, for diagnostics and tests).
  static WienerPath flat(double t_min, double t_max, double dt);

  std::uint64_t seed() const { return seed_; }
  double dt() const;
  int level() const { return level_; }
  double t_min() const { return i_min_ * dt(); }
  double t_max() const { return i_max_ * dt(); }
  std::int64_t i_min() const { return i_min_; }
  std::int64_t i_max() const { return i_max_; }

  double value(std::int64_t i) const;
  double value_at_time(double t) const;

  /// ΔW over [t_i, t_{i+1}] (local index), reproducible from the seed alone.
  double increment(std::int64_t i) const;

  /// θ_s shift; s must be grid-aligned and lie inside the stored range.
  WienerPath shifted(double s) const;

  /// Same path, step halved by Brownian-bridge refinement. Restriction of the
  /// refined path to the coarse nodes reproduces this path exactly.
  WienerPath refined() const;

  WienerPath() = default;  // empty path, assign before use

 private:
  void build_values();
  double raw_increment(std::int64_t absolute_index) const;

  std::uint64_t seed_ = 0;
  bool flat_ = false;
  double base_dt_ = 0.0;   // level-0 step
  int level_ = 0;          // dt = base_dt / 2^level
  std::int64_t offset_ = 0;  // absolute index of local index 0 at this level
  std::int64_t i_min_ = 0, i_max_ = 0;  // local index range
  std::vector<double> values_;
};

enum class OuInit { StationarySample, Zero };

class OUPath {
 public:
  static OUPath from_wiener(const WienerPath& w, double gamma,
                            OuInit init = OuInit::StationarySample);
  /// Synthetic constant path (diagnostics oracle).
  static OUPath constant(double value, double t_min, double t_max, double dt);

  double gamma() const { return gamma_; }
  double dt() const { return dt_; }
  double t_min() const { return i_min_ * dt_; }
  double t_max() const { return i_max_ * dt_; }
  std::int64_t i_min() const { return i_min_; }
  std::int64_t i_max() const { return i_max_; }

  double value(std::int64_t i) const;
  double value_at_time(double t) const;
  /// Piecewise-constant driver lookup: value of the grid cell containing t.
  double cell_value(double t) const;

  /// e^{−γ(t − t_min)}: size of the startup transient at time t (the integral
  /// defining z over (−∞, t_min] is truncated there).
  double truncation_factor(double t) const;

  OUPath() = default;  // empty path, assign before use

 private:
  double gamma_ = 0.0;
  double dt_ = 0.0;
  std::int64_t i_min_ = 0, i_max_ = 0;
  std::vector<double> values_;
};

struct TemperednessReport {
  double max_sublinear_ratio = 0.0;  // max |z(t)| / (1+|t|)
  double horizon = 0.0;
  std::vector<std::pair<double, double>> integrals;  // (κ, ∫_{−T}^0 e^{κr} z² dr)
};

/// Finite-horizon evidence for sub-linear growth of |z| and finiteness of the
/// exponentially weighted square integrals. Requires T ≥ 10/γ within range.
TemperednessReport ou_temperedness_check(const OUPath& z, const std::vector<double>& kappas,
                                         double T);

/// Trapezoidal ∫_{−T}^{0} e^{κ r} z(r)² dr on the path grid.
double exp_weighted_sq_integral(const OUPath& z, double kappa, double T);

}  // namespace calmedns
