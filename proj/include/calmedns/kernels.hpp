#pragma once

/// Data-parallel inner loops shared by the spectral operators and the time
/// stepper. Every kernel comes in a serial reference version and an OpenMP
/// version; the dispatching overload picks one from the ExecPolicy. Map-type
/// kernels are element-independent, so both versions produce bit-identical
/// output. Reductions share a fixed block decomposition (partials combined in
/// block order), so they are bit-identical too, independent of thread count.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "calmedns/exec.hpp"

namespace calmedns::kernels {

using cxd = std::complex<double>;

inline constexpr std::size_t kReduceBlock = 4096;

/// y[i] = gain[i] * x[i]
void mode_scale_serial(std::span<const cxd> x, std::span<const double> gain, std::span<cxd> y);
void mode_scale_parallel(std::span<const cxd> x, std::span<const double> gain, std::span<cxd> y);
void mode_scale(std::span<const cxd> x, std::span<const double> gain, std::span<cxd> y,
                ExecPolicy pol);

/// y[i] = a*x[i] + b*y[i]
void mode_axpby_serial(double a, std::span<const cxd> x, double b, std::span<cxd> y);
void mode_axpby_parallel(double a, std::span<const cxd> x, double b, std::span<cxd> y);
void mode_axpby(double a, std::span<const cxd> x, double b, std::span<cxd> y, ExecPolicy pol);

/// v[i] = decay[i] * (v[i] + dt*n[i])  — integrating-factor Euler inner loop
void mode_if_step_serial(std::span<const double> decay, double dt, std::span<const cxd> n,
                         std::span<cxd> v);
void mode_if_step_parallel(std::span<const double> decay, double dt, std::span<const cxd> n,
                           std::span<cxd> v);
void mode_if_step(std::span<const double> decay, double dt, std::span<const cxd> n,
                  std::span<cxd> v, ExecPolicy pol);

/// Per-mode Leray projection: u -= k (k·u)/|k|², k = 0 mode zeroed.
void leray_serial(const int* kx, const int* ky, const int* kz, std::size_t m, cxd* ux, cxd* uy,
                  cxd* uz);
void leray_parallel(const int* kx, const int* ky, const int* kz, std::size_t m, cxd* ux, cxd* uy,
                    cxd* uz);
void leray(const int* kx, const int* ky, const int* kz, std::size_t m, cxd* ux, cxd* uy, cxd* uz,
           ExecPolicy pol);

/// w = i k × u
void curl_serial(const int* kx, const int* ky, const int* kz, std::size_t m, const cxd* ux,
                 const cxd* uy, const cxd* uz, cxd* wx, cxd* wy, cxd* wz);
void curl_parallel(const int* kx, const int* ky, const int* kz, std::size_t m, const cxd* ux,
                   const cxd* uy, const cxd* uz, cxd* wx, cxd* wy, cxd* wz);
void curl(const int* kx, const int* ky, const int* kz, std::size_t m, const cxd* ux, const cxd* uy,
          const cxd* uz, cxd* wx, cxd* wy, cxd* wz, ExecPolicy pol);

/// x[i] = 0 where keep[i] == 0
void apply_mask_serial(std::span<const std::uint8_t> keep, std::span<cxd> x);
void apply_mask_parallel(std::span<const std::uint8_t> keep, std::span<cxd> x);
void apply_mask(std::span<const std::uint8_t> keep, std::span<cxd> x, ExecPolicy pol);

/// Physical-space cross product: o = a × b, n nodes per component.
void cross3_serial(const double* ax, const double* ay, const double* az, const double* bx,
                   const double* by, const double* bz, double* ox, double* oy, double* oz,
                   std::size_t n);
void cross3_parallel(const double* ax, const double* ay, const double* az, const double* bx,
                     const double* by, const double* bz, double* ox, double* oy, double* oz,
                     std::size_t n);
void cross3(const double* ax, const double* ay, const double* az, const double* bx,
            const double* by, const double* bz, double* ox, double* oy, double* oz, std::size_t n,
            ExecPolicy pol);

/// Deterministic blocked reduction of term(i) over [0, n).
template <class F>
double blocked_sum(std::size_t n, ExecPolicy pol, F&& term) {
  const std::size_t nb = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(nb, 0.0);
#if defined(_OPENMP)
  if (pol == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(nb); ++b) {
      const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
      const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += term(i);
      partial[static_cast<std::size_t>(b)] = s;
    }
  } else
#endif
  {
    (void)pol;
    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t lo = b * kReduceBlock;
      const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += term(i);
      partial[b] = s;
    }
  }
  double total = 0.0;
  for (double p : partial) total += p;  // fixed combine order
  return total;
}

/// Σ w[i] |x[i]|²
double sum_weighted_sq(std::span<const cxd> x, std::span<const double> w, ExecPolicy pol);

/// Σ w[i] Re(x[i] conj(y[i]))
double sum_weighted_prod(std::span<const cxd> x, std::span<const cxd> y,
                         std::span<const double> w, ExecPolicy pol);

/// Parallel loop helper for module-local kernels that follow the same pattern.
template <class F>
void parallel_for(std::size_t n, ExecPolicy pol, F&& body) {
#if defined(_OPENMP)
  if (pol == ExecPolicy::Parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) body(static_cast<std::size_t>(i));
    return;
  }
#endif
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace calmedns::kernels
