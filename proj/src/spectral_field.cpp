#include "calmedns/spectral_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "calmedns/kernels.hpp"

namespace calmedns {

namespace {
void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (&a.grid() != &b.grid()) throw std::invalid_argument("fields live on different grids");
}
}  // namespace

SpectralField::SpectralField(GridPtr grid)
    : grid_(std::move(grid)), data_(3 * grid_->modes(), cxd(0.0, 0.0)) {}

void SpectralField::set_zero() { std::fill(data_.begin(), data_.end(), cxd(0.0, 0.0)); }

ScalarField::ScalarField(GridPtr grid)
    : grid_(std::move(grid)), data_(grid_->modes(), cxd(0.0, 0.0)) {}

PhysicalField::PhysicalField(GridPtr grid)
    : grid_(std::move(grid)), data_(3 * grid_->nodes(), 0.0) {}

void leray_project(SpectralField& u, ExecPolicy pol) {
  const WaveGrid& g = u.grid();
  kernels::leray(g.kx().data(), g.ky().data(), g.kz().data(), g.modes(), u.comp(0).data(),
                 u.comp(1).data(), u.comp(2).data(), pol);
}

void apply_stokes(const SpectralField& u, SpectralField& out, ExecPolicy pol) {
  require_same_grid(u, out);
  const auto& ksq = u.grid().ksq();
  for (int c = 0; c < 3; ++c) kernels::mode_scale(u.comp(c), ksq, out.comp(c), pol);
}

SpectralField apply_stokes(const SpectralField& u, ExecPolicy pol) {
  SpectralField out(u.grid_ptr());
  apply_stokes(u, out, pol);
  return out;
}

namespace {
void threshold_mask(SpectralField& u, double lambda, bool keep_below, ExecPolicy pol) {
  const auto& ksq = u.grid().ksq();
  const std::size_t m = u.grid().modes();
  for (int c = 0; c < 3; ++c) {
    auto x = u.comp(c);
    kernels::parallel_for(m, pol, [&](std::size_t i) {
      const bool below = ksq[i] <= lambda;
      if (below != keep_below) x[i] = cxd(0.0, 0.0);
    });
  }
}
}  // namespace

void galerkin_truncate(SpectralField& u, double lambda, ExecPolicy pol) {
  threshold_mask(u, lambda, true, pol);
}

void galerkin_tail(SpectralField& u, double lambda, ExecPolicy pol) {
  threshold_mask(u, lambda, false, pol);
  // mean mode is below any threshold, but keep it pinned regardless
  const std::size_t zero = u.grid().index(0, 0, 0);
  for (int c = 0; c < 3; ++c) u.at(c, zero) = cxd(0.0, 0.0);
}

void dealias(SpectralField& u, ExecPolicy pol) {
  const auto& mask = u.grid().dealias_mask();
  for (int c = 0; c < 3; ++c) kernels::apply_mask(mask, u.comp(c), pol);
}

double sobolev_norm(const SpectralField& u, double s, bool inhomogeneous, ExecPolicy pol) {
  const WaveGrid& g = u.grid();
  const auto& ksq = g.ksq();
  const auto& w = g.weight();
  const double vol = g.volume();
  const std::size_t m = g.modes();
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto x = u.comp(c);
    total += kernels::blocked_sum(m, pol, [&](std::size_t i) {
      const double base = inhomogeneous ? 1.0 + ksq[i] : ksq[i];
      double mult;
      if (s == 0.0)
        mult = inhomogeneous ? 1.0 : 1.0;
      else if (s == 1.0)
        mult = base;
      else if (s == 2.0)
        mult = base * base;
      else
        mult = (base == 0.0) ? 0.0 : std::pow(base, s);
      if (!inhomogeneous && ksq[i] == 0.0 && s > 0.0) mult = 0.0;
      const double a2 = x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
      return w[i] * mult * a2;
    });
  }
  return std::sqrt(vol * total);
}

double l2_inner(const SpectralField& u, const SpectralField& w, ExecPolicy pol) {
  require_same_grid(u, w);
  const WaveGrid& g = u.grid();
  double total = 0.0;
  for (int c = 0; c < 3; ++c)
    total += kernels::sum_weighted_prod(u.comp(c), w.comp(c), g.weight(), pol);
  return g.volume() * total;
}

void curl(const SpectralField& u, SpectralField& out, ExecPolicy pol) {
  require_same_grid(u, out);
  const WaveGrid& g = u.grid();
  kernels::curl(g.kx().data(), g.ky().data(), g.kz().data(), g.modes(), u.comp(0).data(),
                u.comp(1).data(), u.comp(2).data(), out.comp(0).data(), out.comp(1).data(),
                out.comp(2).data(), pol);
}

double divergence_max(const SpectralField& u) {
  const WaveGrid& g = u.grid();
  const std::size_t m = g.modes();
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const cxd d = static_cast<double>(g.kx()[i]) * u.comp(0)[i] +
                  static_cast<double>(g.ky()[i]) * u.comp(1)[i] +
                  static_cast<double>(g.kz()[i]) * u.comp(2)[i];
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

double conjugate_asymmetry(const SpectralField& u) {
  const WaveGrid& g = u.grid();
  const std::size_t m = g.modes();
  double worst = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = g.conj_partner(i);
    if (j == i) continue;
    for (int c = 0; c < 3; ++c)
      worst = std::max(worst, std::abs(u.comp(c)[j] - std::conj(u.comp(c)[i])));
  }
  return worst;
}

void enforce_conjugate_symmetry(SpectralField& u) {
  const WaveGrid& g = u.grid();
  const std::size_t m = g.modes();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = g.conj_partner(i);
    if (j == i) continue;
    if (j < i) continue;  // handle each pair once
    for (int c = 0; c < 3; ++c) {
      const cxd avg = 0.5 * (u.comp(c)[i] + std::conj(u.comp(c)[j]));
      u.comp(c)[i] = avg;
      u.comp(c)[j] = std::conj(avg);
    }
  }
  // fixed points of the involution must be real
  for (std::size_t i = 0; i < m; ++i)
    if (g.conj_partner(i) == i && (g.kz()[i] == 0 || g.kz()[i] == g.n() / 2)) {
      // self-conjugate only when (−kx,−ky) ≡ (kx,ky) mod n
      const bool fixed = ((2 * g.kx()[i]) % g.n() == 0) && ((2 * g.ky()[i]) % g.n() == 0);
      if (fixed)
        for (int c = 0; c < 3; ++c) u.comp(c)[i] = cxd(u.comp(c)[i].real(), 0.0);
    }
}

TailBoundReport tail_sobolev_bound_check(const SpectralField& u, double lambda, double s,
                                         ExecPolicy pol) {
  TailBoundReport r;
  const WaveGrid& g = u.grid();
  const auto& ksq = g.ksq();
  const auto& w = g.weight();
  const std::size_t m = g.modes();
  double tail = 0.0;
  for (int c = 0; c < 3; ++c) {
    auto x = u.comp(c);
    tail += kernels::blocked_sum(m, pol, [&](std::size_t i) {
      if (ksq[i] <= lambda) return 0.0;
      return w[i] * (x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
    });
  }
  r.tail_sq = g.volume() * tail;
  r.lambda_next = g.next_lambda_above(lambda);
  if (std::isinf(r.lambda_next)) {
    r.degenerate = true;
    r.bound = 0.0;
    r.satisfied = true;
    return r;
  }
  const double hs = sobolev_norm(u, s, false, pol);
  r.bound = std::pow(r.lambda_next, -s) * hs * hs;
  // round-off slack on an exact inequality
  r.satisfied = r.tail_sq <= r.bound * (1.0 + 1e-12) + 1e-300;
  return r;
}

void axpy(double a, const SpectralField& x, SpectralField& y, ExecPolicy pol) {
  require_same_grid(x, y);
  for (int c = 0; c < 3; ++c) kernels::mode_axpby(a, x.comp(c), 1.0, y.comp(c), pol);
}

void scale(SpectralField& x, double a, ExecPolicy pol) {
  for (int c = 0; c < 3; ++c) kernels::mode_axpby(0.0, x.comp(c), a, x.comp(c), pol);
}

void copy_into(const SpectralField& x, SpectralField& y) {
  require_same_grid(x, y);
  std::copy(x.data().begin(), x.data().end(), y.data().begin());
}

}  // namespace calmedns
