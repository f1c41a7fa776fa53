#pragma once

/// FFTW-backed transforms between coefficient space and the collocation grid.
/// Each Transform owns its plans and work buffers, so distinct instances may
/// run concurrently; plan creation itself is serialized internally (the FFTW
/// planner is not thread-safe). Plans use FFTW_ESTIMATE so planning is
/// deterministic and runs are reproducible.

#include <span>

#include "calmedns/spectral_field.hpp"

namespace calmedns {

class Transform {
 public:
  explicit Transform(GridPtr grid);
  ~Transform();
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;

  const WaveGrid& grid() const { return *grid_; }

  void to_physical(const SpectralField& u, PhysicalField& out);
  void to_spectral(const PhysicalField& p, SpectralField& out);

  /// Single-component transforms; sizes must match the grid.
  void comp_to_physical(std::span<const cxd> coeffs, std::span<double> nodes);
  void comp_to_spectral(std::span<const double> nodes, std::span<cxd> coeffs);

 private:
  GridPtr grid_;
  double* real_ = nullptr;  // fftw-allocated, n³
  void* cplx_ = nullptr;    // fftw-allocated, n·n·(n/2+1) complex
  void* plan_r2c_ = nullptr;
  void* plan_c2r_ = nullptr;
};

}  // namespace calmedns
