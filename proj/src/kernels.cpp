#include "calmedns/kernels.hpp"

namespace calmedns::kernels {

void mode_scale_serial(std::span<const cxd> x, std::span<const double> gain, std::span<cxd> y) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) y[i] = gain[i] * x[i];
}

void mode_scale_parallel(std::span<const cxd> x, std::span<const double> gain, std::span<cxd> y) {
  const long long n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) y[i] = gain[i] * x[i];
}

void mode_scale(std::span<const cxd> x, std::span<const double> gain, std::span<cxd> y,
                ExecPolicy pol) {
  if (pol == ExecPolicy::Parallel && exec::openmp_compiled())
    mode_scale_parallel(x, gain, y);
  else
    mode_scale_serial(x, gain, y);
}

void mode_axpby_serial(double a, std::span<const cxd> x, double b, std::span<cxd> y) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void mode_axpby_parallel(double a, std::span<const cxd> x, double b, std::span<cxd> y) {
  const long long n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void mode_axpby(double a, std::span<const cxd> x, double b, std::span<cxd> y, ExecPolicy pol) {
  if (pol == ExecPolicy::Parallel && exec::openmp_compiled())
    mode_axpby_parallel(a, x, b, y);
  else
    mode_axpby_serial(a, x, b, y);
}

void mode_if_step_serial(std::span<const double> decay, double dt, std::span<const cxd> n,
                         std::span<cxd> v) {
  const std::size_t m = v.size();
  for (std::size_t i = 0; i < m; ++i) v[i] = decay[i] * (v[i] + dt * n[i]);
}

void mode_if_step_parallel(std::span<const double> decay, double dt, std::span<const cxd> n,
                           std::span<cxd> v) {
  const long long m = static_cast<long long>(v.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < m; ++i) v[i] = decay[i] * (v[i] + dt * n[i]);
}

void mode_if_step(std::span<const double> decay, double dt, std::span<const cxd> n,
                  std::span<cxd> v, ExecPolicy pol) {
  if (pol == ExecPolicy::Parallel && exec::openmp_compiled())
    mode_if_step_parallel(decay, dt, n, v);
  else
    mode_if_step_serial(decay, dt, n, v);
}

namespace {
inline void leray_one(int kx, int ky, int kz, cxd& ux, cxd& uy, cxd& uz) {
  const double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                    static_cast<double>(kz) * kz;
  if (k2 == 0.0) {
    ux = uy = uz = cxd(0.0, 0.0);
    return;
  }
  const cxd kd = (static_cast<double>(kx) * ux + static_cast<double>(ky) * uy +
                  static_cast<double>(kz) * uz) /
                 k2;
  ux -= static_cast<double>(kx) * kd;
  uy -= static_cast<double>(ky) * kd;
  uz -= static_cast<double>(kz) * kd;
}
}  // namespace

void leray_serial(const int* kx, const int* ky, const int* kz, std::size_t m, cxd* ux, cxd* uy,
                  cxd* uz) {
  for (std::size_t i = 0; i < m; ++i) leray_one(kx[i], ky[i], kz[i], ux[i], uy[i], uz[i]);
}

void leray_parallel(const int* kx, const int* ky, const int* kz, std::size_t m, cxd* ux, cxd* uy,
                    cxd* uz) {
  const long long n = static_cast<long long>(m);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) leray_one(kx[i], ky[i], kz[i], ux[i], uy[i], uz[i]);
}

void leray(const int* kx, const int* ky, const int* kz, std::size_t m, cxd* ux, cxd* uy, cxd* uz,
           ExecPolicy pol) {
  if (pol == ExecPolicy::Parallel && exec::openmp_compiled())
    leray_parallel(kx, ky, kz, m, ux, uy, uz);
  else
    leray_serial(kx, ky, kz, m, ux, uy, uz);
}

namespace {
inline void curl_one(int kx, int ky, int kz, const cxd& ux, const cxd& uy, const cxd& uz, cxd& wx,
                     cxd& wy, cxd& wz) {
  // i k × u; i*(a+bi) = -b + ai
  const cxd cx = static_cast<double>(ky) * uz - static_cast<double>(kz) * uy;
  const cxd cy = static_cast<double>(kz) * ux - static_cast<double>(kx) * uz;
  const cxd cz = static_cast<double>(kx) * uy - static_cast<double>(ky) * ux;
  wx = cxd(-cx.imag(), cx.real());
  wy = cxd(-cy.imag(), cy.real());
  wz = cxd(-cz.imag(), cz.real());
}
}  // namespace

void curl_serial(const int* kx, const int* ky, const int* kz, std::size_t m, const cxd* ux,
                 const cxd* uy, const cxd* uz, cxd* wx, cxd* wy, cxd* wz) {
  for (std::size_t i = 0; i < m; ++i)
    curl_one(kx[i], ky[i], kz[i], ux[i], uy[i], uz[i], wx[i], wy[i], wz[i]);
}

void curl_parallel(const int* kx, const int* ky, const int* kz, std::size_t m, const cxd* ux,
                   const cxd* uy, const cxd* uz, cxd* wx, cxd* wy, cxd* wz) {
  const long long n = static_cast<long long>(m);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i)
    curl_one(kx[i], ky[i], kz[i], ux[i], uy[i], uz[i], wx[i], wy[i], wz[i]);
}

void curl(const int* kx, const int* ky, const int* kz, std::size_t m, const cxd* ux, const cxd* uy,
          const cxd* uz, cxd* wx, cxd* wy, cxd* wz, ExecPolicy pol) {
  if (pol == ExecPolicy::Parallel && exec::openmp_compiled())
    curl_parallel(kx, ky, kz, m, ux, uy, uz, wx, wy, wz);
  else
    curl_serial(kx, ky, kz, m, ux, uy, uz, wx, wy, wz);
}

void apply_mask_serial(std::span<const std::uint8_t> keep, std::span<cxd> x) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!keep[i]) x[i] = cxd(0.0, 0.0);
}

void apply_mask_parallel(std::span<const std::uint8_t> keep, std::span<cxd> x) {
  const long long n = static_cast<long long>(x.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i)
    if (!keep[i]) x[i] = cxd(0.0, 0.0);
}

void apply_mask(std::span<const std::uint8_t> keep, std::span<cxd> x, ExecPolicy pol) {
  if (pol == ExecPolicy::Parallel && exec::openmp_compiled())
    apply_mask_parallel(keep, x);
  else
    apply_mask_serial(keep, x);
}

void cross3_serial(const double* ax, const double* ay, const double* az, const double* bx,
                   const double* by, const double* bz, double* ox, double* oy, double* oz,
                   std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    ox[i] = ay[i] * bz[i] - az[i] * by[i];
    oy[i] = az[i] * bx[i] - ax[i] * bz[i];
    oz[i] = ax[i] * by[i] - ay[i] * bx[i];
  }
}

void cross3_parallel(const double* ax, const double* ay, const double* az, const double* bx,
                     const double* by, const double* bz, double* ox, double* oy, double* oz,
                     std::size_t n) {
  const long long m = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < m; ++i) {
    ox[i] = ay[i] * bz[i] - az[i] * by[i];
    oy[i] = az[i] * bx[i] - ax[i] * bz[i];
    oz[i] = ax[i] * by[i] - ay[i] * bx[i];
  }
}

void cross3(const double* ax, const double* ay, const double* az, const double* bx,
            const double* by, const double* bz, double* ox, double* oy, double* oz, std::size_t n,
            ExecPolicy pol) {
  if (pol == ExecPolicy::Parallel && exec::openmp_compiled())
    cross3_parallel(ax, ay, az, bx, by, bz, ox, oy, oz, n);
  else
    cross3_serial(ax, ay, az, bx, by, bz, ox, oy, oz, n);
}

double sum_weighted_sq(std::span<const cxd> x, std::span<const double> w, ExecPolicy pol) {
  return blocked_sum(x.size(), pol, [&](std::size_t i) {
    return w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
  });
}

double sum_weighted_prod(std::span<const cxd> x, std::span<const cxd> y,
                         std::span<const double> w, ExecPolicy pol) {
  return blocked_sum(x.size(), pol, [&](std::size_t i) {
    return w[i] * (x[i].real() * y[i].real() + x[i].imag() * y[i].imag());
  });
}

}  // namespace calmedns::kernels
