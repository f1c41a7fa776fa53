#include "calmedns/wave_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace calmedns {

std::shared_ptr<const WaveGrid> WaveGrid::create(int n_per_axis, double dealias_fraction) {
  if (n_per_axis < 4 || n_per_axis % 2 != 0)
    throw std::invalid_argument("WaveGrid: n_per_axis must be even and >= 4");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0))
    throw std::invalid_argument("WaveGrid: dealias_fraction must lie in (0, 1]");
  return std::shared_ptr<const WaveGrid>(new WaveGrid(n_per_axis, dealias_fraction));
}

WaveGrid::WaveGrid(int n, double dealias_fraction)
    : n_(n), dealias_fraction_(dealias_fraction) {
  dealias_kmax_ = static_cast<int>(std::floor(dealias_fraction * (n / 2) + 1e-12));
  const int nz = nzc();
  const std::size_t m = static_cast<std::size_t>(n) * n * nz;
  kx_.resize(m);
  ky_.resize(m);
  kz_.resize(m);
  ksq_.resize(m);
  weight_.resize(m);
  mask_.resize(m);

  std::set<int> shell_set, resolved_set;
  std::size_t idx = 0;
  for (int ix = 0; ix < n; ++ix) {
    const int kxv = ix <= n / 2 ? ix : ix - n;
    for (int iy = 0; iy < n; ++iy) {
      const int kyv = iy <= n / 2 ? iy : iy - n;
      for (int iz = 0; iz < nz; ++iz, ++idx) {
        const int kzv = iz;
        kx_[idx] = kxv;
        ky_[idx] = kyv;
        kz_[idx] = kzv;
        const int k2 = kxv * kxv + kyv * kyv + kzv * kzv;
        ksq_[idx] = static_cast<double>(k2);
        weight_[idx] = (iz == 0 || iz == n / 2) ? 1.0 : 2.0;
        const bool keep = std::abs(kxv) <= dealias_kmax_ && std::abs(kyv) <= dealias_kmax_ &&
                          std::abs(kzv) <= dealias_kmax_;
        mask_[idx] = keep ? 1 : 0;
        shell_set.insert(k2);
        if (keep) {
          resolved_set.insert(k2);
          max_lambda_ = std::max(max_lambda_, static_cast<double>(k2));
        }
      }
    }
  }
  shells_.assign(shell_set.begin(), shell_set.end());
  resolved_shells_.assign(resolved_set.begin(), resolved_set.end());
}

double WaveGrid::volume() const {
  const double L = 2.0 * std::numbers::pi;
  return L * L * L;
}

double WaveGrid::next_lambda_above(double lambda) const {
  auto it = std::upper_bound(shells_.begin(), shells_.end(), lambda);
  if (it == shells_.end()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(*it);
}

std::size_t WaveGrid::conj_partner(std::size_t m) const {
  const int nz = nzc();
  const int iz = static_cast<int>(m % nz);
  if (iz != 0 && iz != n_ / 2) return m;
  const std::size_t rest = m / nz;
  const int iy = static_cast<int>(rest % n_);
  const int ix = static_cast<int>(rest / n_);
  const int jx = (n_ - ix) % n_;
  const int jy = (n_ - iy) % n_;
  return index(jx, jy, iz);
}

}  // namespace calmedns
