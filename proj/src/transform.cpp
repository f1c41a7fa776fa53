#include "calmedns/transform.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace calmedns {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Transform::Transform(GridPtr grid) : grid_(std::move(grid)) {
  const int n = grid_->n();
  real_ = fftw_alloc_real(grid_->nodes());
  cplx_ = fftw_alloc_complex(grid_->modes());
  std::lock_guard<std::mutex> lock(planner_mutex());
  plan_r2c_ = fftw_plan_dft_r2c_3d(n, n, n, real_, static_cast<fftw_complex*>(cplx_),
                                   FFTW_ESTIMATE);
  plan_c2r_ = fftw_plan_dft_c2r_3d(n, n, n, static_cast<fftw_complex*>(cplx_), real_,
                                   FFTW_ESTIMATE);
  if (plan_r2c_ == nullptr || plan_c2r_ == nullptr)
    throw std::runtime_error("Transform: FFTW plan creation failed");
}

Transform::~Transform() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_r2c_) fftw_destroy_plan(static_cast<fftw_plan>(plan_r2c_));
  if (plan_c2r_) fftw_destroy_plan(static_cast<fftw_plan>(plan_c2r_));
  fftw_free(real_);
  fftw_free(cplx_);
}

void Transform::comp_to_physical(std::span<const cxd> coeffs, std::span<double> nodes) {
  if (coeffs.size() != grid_->modes() || nodes.size() != grid_->nodes())
    throw std::invalid_argument("Transform: shape mismatch");
  // c2r destroys its input, so work from the scratch copy
  std::memcpy(cplx_, coeffs.data(), coeffs.size() * sizeof(cxd));
  fftw_execute(static_cast<fftw_plan>(plan_c2r_));
  std::memcpy(nodes.data(), real_, nodes.size() * sizeof(double));
}

void Transform::comp_to_spectral(std::span<const double> nodes, std::span<cxd> coeffs) {
  if (coeffs.size() != grid_->modes() || nodes.size() != grid_->nodes())
    throw std::invalid_argument("Transform: shape mismatch");
  std::memcpy(real_, nodes.data(), nodes.size() * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(plan_r2c_));
  const double inv = 1.0 / static_cast<double>(grid_->nodes());
  const auto* src = static_cast<const fftw_complex*>(cplx_);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    coeffs[i] = cxd(src[i][0] * inv, src[i][1] * inv);
}

void Transform::to_physical(const SpectralField& u, PhysicalField& out) {
  for (int c = 0; c < 3; ++c) comp_to_physical(u.comp(c), out.comp(c));
}

void Transform::to_spectral(const PhysicalField& p, SpectralField& out) {
  for (int c = 0; c < 3; ++c) comp_to_spectral(p.comp(c), out.comp(c));
}

}  // namespace calmedns
