#pragma once

/// Truncated wavevector lattice for the periodic box [0,2π)³ in the
/// real-input transform layout: modes are stored for kz ∈ [0, n/2] only, the
/// kz < 0 half being implied by conjugate symmetry. Index layout is
/// m = (ix·n + iy)·(n/2+1) + iz with kx = ix ≤ n/2 ? ix : ix−n (same for ky)
/// and kz = iz. Planes iz = 0 and iz = n/2 carry their own conjugate partners
/// through the involution conj_partner(); all other stored modes represent a
/// ±k pair and enter quadratic sums with Hermitian weight 2.
///
/// On this lattice the Stokes operator is diagonal with eigenvalues |k|², so
/// λ₁ = min_{k≠0} |k|² = 1.

#include <cstdint>
#include <memory>
#include <vector>

namespace calmedns {

class WaveGrid {
 public:
  static std::shared_ptr<const WaveGrid> create(int n_per_axis,
                                                double dealias_fraction = 2.0 / 3.0);

  int n() const { return n_; }
  int nzc() const { return n_ / 2 + 1; }
  std::size_t modes() const { return kx_.size(); }
  std::size_t nodes() const {
    return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) *
           static_cast<std::size_t>(n_);
  }
  double dealias_fraction() const { return dealias_fraction_; }
  int dealias_kmax() const { return dealias_kmax_; }

  double volume() const;          // (2π)³
  double lambda1() const { return 1.0; }

  const std::vector<int>& kx() const { return kx_; }
  const std::vector<int>& ky() const { return ky_; }
  const std::vector<int>& kz() const { return kz_; }
  const std::vector<double>& ksq() const { return ksq_; }
  /// Hermitian multiplicity (1 or 2) of each stored mode in full-lattice sums.
  const std::vector<double>& weight() const { return weight_; }
  const std::vector<std::uint8_t>& dealias_mask() const { return mask_; }

  /// Largest |k|² among dealias-retained modes.
  double max_lambda() const { return max_lambda_; }
  /// Distinct |k|² values present on the stored lattice, ascending (0 first).
  const std::vector<int>& shells() const { return shells_; }
  /// Distinct |k|² values among dealias-retained modes, ascending.
  const std::vector<int>& resolved_shells() const { return resolved_shells_; }
  /// Smallest stored eigenvalue strictly above lambda; +inf when none exists.
  double next_lambda_above(double lambda) const;

  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * n_ + iy) * nzc() + iz;
  }
  /// Index of the stored conjugate partner. Identity away from the iz = 0 and
  /// iz = n/2 planes (where the partner is implicit) and an involution on them.
  std::size_t conj_partner(std::size_t m) const;

 private:
  explicit WaveGrid(int n, double dealias_fraction);

  int n_;
  double dealias_fraction_;
  int dealias_kmax_;
  double max_lambda_ = 0.0;
  std::vector<int> kx_, ky_, kz_;
  std::vector<double> ksq_;
  std::vector<double> weight_;
  std::vector<std::uint8_t> mask_;
  std::vector<int> shells_, resolved_shells_;
};

using GridPtr = std::shared_ptr<const WaveGrid>;

}  // namespace calmedns
