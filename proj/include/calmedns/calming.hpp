#pragma once

/// Bounded Lipschitz-1 truncations of the identity on ℝ³ ("calming" maps),
/// applied pointwise inside the advective nonlinearity. Four closed-form
/// variants plus the identity passthrough:
///   z1: x/(1+ε|x|)        z2: x/(1+ε²|x|²)
///   z3: arctan(ε·)/ε component-wise
///   z4: radial profile q(|x|)·x/|x| with
///       q(r) = r on [0,1/ε), −(ε/2)(r−2/ε)² + 3/(2ε) on [1/ε,2/ε), 3/(2ε) after.
/// The middle branch's coefficient −ε/2 is the unique quadratic making q
/// C¹ at both breakpoints (value 1/ε and slope 1 at r = 1/ε, value 3/(2ε)
/// and slope 0 at r = 2/ε).
///
/// Each variant is 1-Lipschitz, bounded by the closed-form sup norm M_ε, and
/// deviates from the identity by at most C ε^α |x|^β with per-variant
/// constants carried alongside.

#include <array>
#include <cstdint>
#include <string>

#include "calmedns/exec.hpp"
#include "calmedns/spectral_field.hpp"

namespace calmedns {

enum class CalmingVariant : std::uint8_t { Z1, Z2, Z3, Z4, Identity };

std::string to_string(CalmingVariant v);

struct ResidualConstants {
  double C = 0.0;
  double alpha = 0.0;  // > 0
  double beta = 0.0;   // >= 1
};

class CalmingSpec {
 public:
  CalmingSpec(CalmingVariant variant, double eps);

  CalmingVariant variant() const { return variant_; }
  double eps() const { return eps_; }

  /// Closed-form sup norm M_ε = ‖ζ‖_{L∞}; throws for the unbounded identity.
  double sup_norm() const;
  /// Same, but +inf for the identity (used by derived-constant formulas).
  double sup_norm_or_inf() const;

  double lipschitz_bound() const { return 1.0; }
  /// Per-variant (C, α, β) with |ζ(x) − x| ≤ C ε^α |x|^β.
  ResidualConstants residual_constants() const;

  std::array<double, 3> eval(const std::array<double, 3>& x) const;

 private:
  CalmingVariant variant_;
  double eps_;
};

/// Pointwise application on every collocation node.
void calm_field(const CalmingSpec& spec, const PhysicalField& in, PhysicalField& out,
                ExecPolicy pol = exec::policy());

// serial/OpenMP pair behind calm_field
void calm_field_serial(const CalmingSpec& spec, const PhysicalField& in, PhysicalField& out);
void calm_field_parallel(const CalmingSpec& spec, const PhysicalField& in, PhysicalField& out);

struct AxiomSample {
  std::array<double, 3> x{};
  std::array<double, 3> y{};
  double value = 0.0;
};

struct AxiomReport {
  bool lipschitz_ok = true;
  bool bounded_ok = true;
  bool residual_ok = true;
  double worst_lipschitz_ratio = 0.0;  // max |ζx−ζy|/|x−y|
  double worst_bound_excess = 0.0;     // max |ζx| − M_ε
  double worst_residual_ratio = 0.0;   // max |ζx−x| / (C ε^α |x|^β)
  AxiomSample lipschitz_witness;
  AxiomSample bound_witness;
  AxiomSample residual_witness;
  bool all_ok() const { return lipschitz_ok && bounded_ok && residual_ok; }
};

/// Samples seeded point pairs in the ball of the given radius and checks the
/// three defining conditions: |ζx−ζy| ≤ (1+1e−9)|x−y|, |ζx| ≤ M_ε + 1e−12 and
/// |ζx−x| ≤ C ε^α |x|^β. The identity variant fails boundedness by design.
AxiomReport verify_calming_axioms(const CalmingSpec& spec, std::size_t sample_count,
                                  double radius, std::uint64_t seed = 20240901);

inline constexpr double kLipschitzTol = 1e-9;   // multiplicative
inline constexpr double kBoundedTol = 1e-12;    // absolute

}  // namespace calmedns
