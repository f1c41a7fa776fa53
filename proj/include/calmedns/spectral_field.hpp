#pragma once

/// Divergence-free vector fields stored as Fourier coefficients on a WaveGrid
/// (the Galerkin unknown), plus the spectral operators acting on them: Leray
/// projection, Stokes operator, eigenvalue-threshold truncation, dealiasing,
/// Sobolev norms and the projection-tail estimate.
///
/// Conventions: u(x) = Σ_k û_k e^{ik·x}; all L²-type norms are physical-space
/// integrals over [0,2π)³, so ‖u‖² = (2π)³ Σ_full |û_k|². The k = 0 (mean)
/// mode is pinned to zero by the projection and by all field constructors.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "calmedns/exec.hpp"
#include "calmedns/wave_grid.hpp"

namespace calmedns {

using cxd = std::complex<double>;

class SpectralField {
 public:
  explicit SpectralField(GridPtr grid);

  const WaveGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

  std::span<cxd> comp(int c) { return {data_.data() + c * grid_->modes(), grid_->modes()}; }
  std::span<const cxd> comp(int c) const {
    return {data_.data() + c * grid_->modes(), grid_->modes()};
  }
  std::span<cxd> data() { return {data_.data(), data_.size()}; }
  std::span<const cxd> data() const { return {data_.data(), data_.size()}; }

  cxd& at(int c, std::size_t m) { return data_[c * grid_->modes() + m]; }
  const cxd& at(int c, std::size_t m) const { return data_[c * grid_->modes() + m]; }

  void set_zero();

 private:
  GridPtr grid_;
  std::vector<cxd> data_;  // 3 × modes, component-major
};

/// Scalar spectral field (pressure diagnostics).
class ScalarField {
 public:
  explicit ScalarField(GridPtr grid);
  const WaveGrid& grid() const { return *grid_; }
  std::span<cxd> coeffs() { return {data_.data(), data_.size()}; }
  std::span<const cxd> coeffs() const { return {data_.data(), data_.size()}; }

 private:
  GridPtr grid_;
  std::vector<cxd> data_;
};

/// Real point values on the n³ collocation grid, 3 components.
class PhysicalField {
 public:
  explicit PhysicalField(GridPtr grid);
  const WaveGrid& grid() const { return *grid_; }
  std::span<double> comp(int c) { return {data_.data() + c * grid_->nodes(), grid_->nodes()}; }
  std::span<const double> comp(int c) const {
    return {data_.data() + c * grid_->nodes(), grid_->nodes()};
  }

 private:
  GridPtr grid_;
  std::vector<double> data_;
};

struct TailBoundReport {
  double tail_sq = 0.0;     // ‖(I−P_Λ)u‖²_{L²}
  double lambda_next = 0.0; // smallest eigenvalue above Λ (inf if none)
  double bound = 0.0;       // λ_next^{−s} ‖u‖²_{H^s}
  bool satisfied = true;
  bool degenerate = false;  // no stored mode above Λ
};

// ---- operations -------------------------------------------------------------

/// In-place Leray projection û ↦ û − k(k·û)/|k|²; zeroes the mean mode.
void leray_project(SpectralField& u, ExecPolicy pol = exec::policy());

/// Mode-wise multiplication by |k|² (A = −P_σΔ on divergence-free fields).
void apply_stokes(const SpectralField& u, SpectralField& out, ExecPolicy pol = exec::policy());
SpectralField apply_stokes(const SpectralField& u, ExecPolicy pol = exec::policy());

/// Zero all modes with |k|² > lambda (inclusive threshold, eigenvalue shells
/// kept or dropped together).
void galerkin_truncate(SpectralField& u, double lambda, ExecPolicy pol = exec::policy());
/// Complementary projection: keep only |k|² > lambda.
void galerkin_tail(SpectralField& u, double lambda, ExecPolicy pol = exec::policy());

/// Zero all modes with any |k_i| beyond the grid's dealias cutoff.
void dealias(SpectralField& u, ExecPolicy pol = exec::policy());

/// Homogeneous Sobolev norm (Σ (2π)³ |k|^{2s} |û|²)^{1/2}; s = 0 → ‖u‖_{L²},
/// s = 1 → ‖∇u‖_{L²} (the V-norm), s = 2 → ‖Au‖_{L²}. With inhomogeneous =
/// true the weight is (1+|k|²)^s instead.
double sobolev_norm(const SpectralField& u, double s, bool inhomogeneous = false,
                    ExecPolicy pol = exec::policy());

/// L² inner product ⟨u, w⟩ = ∫ u·w dx.
double l2_inner(const SpectralField& u, const SpectralField& w, ExecPolicy pol = exec::policy());

/// w = i k × u (spectral curl).
void curl(const SpectralField& u, SpectralField& out, ExecPolicy pol = exec::policy());

/// max_k |k·û_k| over stored modes (divergence residual).
double divergence_max(const SpectralField& u);

/// max_m |û_{conj(m)} − conj(û_m)| over the self-paired planes.
double conjugate_asymmetry(const SpectralField& u);
/// Symmetrize the self-paired planes and realify their fixed points.
void enforce_conjugate_symmetry(SpectralField& u);

/// ‖(I−P_Λ)u‖² against λ_next^{−s}‖u‖²_{H^s} (homogeneous H^s).
TailBoundReport tail_sobolev_bound_check(const SpectralField& u, double lambda, double s,
                                         ExecPolicy pol = exec::policy());

// Linear-algebra helpers on matching grids.
void axpy(double a, const SpectralField& x, SpectralField& y, ExecPolicy pol = exec::policy());
void scale(SpectralField& x, double a, ExecPolicy pol = exec::policy());
void copy_into(const SpectralField& x, SpectralField& y);

}  // namespace calmedns
