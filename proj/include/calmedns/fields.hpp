#pragma once

/// Deterministic field constructors: analytic presets (noise profile, forcing
/// profiles) and seeded random divergence-free fields with Gaussian spectral
/// decay. Random coefficients are keyed on the signed wavevector, so a field
/// with a given seed does not depend on grid storage order.

#include <cstdint>

#include "calmedns/spectral_field.hpp"
#include "calmedns/transform.hpp"

namespace calmedns {

/// Taylor–Green-like low-mode field (sin x cos y cos z, −cos x sin y cos z, 0)
/// scaled to the requested V-norm. Divergence-free by construction.
SpectralField taylor_green(GridPtr grid, double v_norm = 1.0);

/// Unidirectional shear (sin y, 0, 0) scaled to the requested L² norm.
SpectralField shear_profile(GridPtr grid, double l2_norm = 1.0);

/// Gradient field ∇φ for φ = cos x (not divergence-free; pressure tests).
SpectralField gradient_profile(GridPtr grid);

/// φ = cos x as a scalar spectral field.
ScalarField cosx_scalar(GridPtr grid);

/// Seeded random divergence-free field: Gaussian-decay coefficients
/// exp(−|k|²/(2·decay_scale²)) with unit-normal real/imaginary parts,
/// conjugate-symmetrized, Leray-projected, dealiased and scaled to v_norm
/// (‖∇u‖). Throws if the result would be identically zero.
SpectralField random_divfree(GridPtr grid, std::uint64_t seed, double v_norm,
                             double decay_scale = 2.0);

/// Same construction scaled to a requested L² norm instead.
SpectralField random_divfree_l2(GridPtr grid, std::uint64_t seed, double l2_norm,
                                double decay_scale = 2.0);

/// Named presets used by the run configuration ("taylor_green", "shear",
/// "zero"); throws on unknown names.
SpectralField named_profile(const std::string& name, GridPtr grid, double norm);

}  // namespace calmedns
