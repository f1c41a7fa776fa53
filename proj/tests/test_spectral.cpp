/// Spectral core: lattice bookkeeping, Leray projection, Stokes operator,
/// eigenvalue truncation, Sobolev norms, transforms, dealiasing, and the
/// projection-tail estimate. Expected values are either one-step arithmetic
/// on single modes or direct mode-sum oracles evaluated here.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "calmedns/fields.hpp"
#include "calmedns/kernels.hpp"
#include "calmedns/rng.hpp"
#include "calmedns/spectral_field.hpp"
#include "calmedns/transform.hpp"

using namespace calmedns;

namespace {

GridPtr grid16() {
  static GridPtr g = WaveGrid::create(16);
  return g;
}

SpectralField single_mode(GridPtr g, int kx, int ky, int kz, cxd ux, cxd uy, cxd uz) {
  SpectralField u(g);
  const int ix = kx >= 0 ? kx : g->n() + kx;
  const int iy = ky >= 0 ? ky : g->n() + ky;
  REQUIRE(kz >= 0);
  const std::size_t m = g->index(ix, iy, kz);
  u.comp(0)[m] = ux;
  u.comp(1)[m] = uy;
  u.comp(2)[m] = uz;
  if (kz == 0 || kz == g->n() / 2) {
    const std::size_t mc = g->conj_partner(m);
    if (mc != m) {
      u.comp(0)[mc] = std::conj(ux);
      u.comp(1)[mc] = std::conj(uy);
      u.comp(2)[mc] = std::conj(uz);
    }
  }
  return u;
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

double max_coeff_gap(const SpectralField& a, const SpectralField& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    gap = std::max(gap, std::abs(a.data()[i] - b.data()[i]));
  return gap;
}

}  // namespace

TEST_CASE("wave grid: lambda1 is 1 and the conjugate map is an involution") {
  auto g = grid16();
  CHECK(g->lambda1() == 1.0);
  double smallest = 1e300;
  for (std::size_t i = 0; i < g->modes(); ++i)
    if (g->ksq()[i] > 0.0) smallest = std::min(smallest, g->ksq()[i]);
  CHECK(smallest == 1.0);
  for (std::size_t i = 0; i < g->modes(); ++i) {
    const std::size_t j = g->conj_partner(i);
    CHECK(g->conj_partner(j) == i);
    CHECK(g->ksq()[i] == g->ksq()[j]);
  }
}

TEST_CASE("wave grid: hermitian weights count the full lattice") {
  auto g = grid16();
  double total = 0.0;
  for (std::size_t i = 0; i < g->modes(); ++i) total += g->weight()[i];
  CHECK(total == doctest::Approx(std::pow(16.0, 3)).epsilon(1e-14));
}

TEST_CASE("leray: gradient field maps to zero") {
  // u_k parallel to k is the range of the gradient
  auto u = single_mode(grid16(), 2, 1, 3, cxd(2, 1), cxd(1, 0.5), cxd(3, 1.5));
  leray_project(u);
  CHECK(sobolev_norm(u, 0.0) <= 1e-14);
}

TEST_CASE("leray: divergence-free input unchanged, projection idempotent") {
  auto u = random_divfree(grid16(), 11, 1.0);
  SpectralField v(grid16());
  copy_into(u, v);
  leray_project(v);
  CHECK(max_coeff_gap(u, v) <= 1e-14);
}

TEST_CASE("leray: single mode k=(1,0,0), u=(1,1,0) -> (0,1,0)") {
  auto u = single_mode(grid16(), 1, 0, 0, cxd(1, 0), cxd(1, 0), cxd(0, 0));
  leray_project(u);
  const std::size_t m = grid16()->index(1, 0, 0);
  CHECK(std::abs(u.comp(0)[m]) <= 1e-15);
  CHECK(std::abs(u.comp(1)[m] - cxd(1, 0)) <= 1e-15);
  CHECK(std::abs(u.comp(2)[m]) <= 1e-15);
}

TEST_CASE("leray: self-adjoint under the L2 inner product") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    SpectralField u(grid16()), w(grid16());
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < grid16()->modes(); ++i) {
        u.comp(c)[i] = cxd(rng::normal(s, 1, 2 * i + c * 131071),
                           rng::normal(s, 2, 2 * i + c * 131071));
        w.comp(c)[i] = cxd(rng::normal(s, 3, 2 * i + c * 131071),
                           rng::normal(s, 4, 2 * i + c * 131071));
      }
    enforce_conjugate_symmetry(u);
    enforce_conjugate_symmetry(w);
    SpectralField pu(grid16()), pw(grid16());
    copy_into(u, pu);
    copy_into(w, pw);
    leray_project(pu);
    leray_project(pw);
    CHECK(rel_gap(l2_inner(pu, w), l2_inner(u, pw)) <= 1e-10);
  }
}

TEST_CASE("stokes: eigenmodes scale by |k|^2") {
  auto u1 = single_mode(grid16(), 0, 1, 0, cxd(1, 0), cxd(0, 0), cxd(0.5, 0));
  auto a1 = apply_stokes(u1);
  const std::size_t m = grid16()->index(0, 1, 0);
  CHECK(a1.comp(0)[m] == u1.comp(0)[m]);  // lambda = 1 exactly

  auto u2 = single_mode(grid16(), 1, 1, 0, cxd(1, 0), cxd(-1, 0), cxd(0, 0));
  auto a2 = apply_stokes(u2);
  const std::size_t m2 = grid16()->index(1, 1, 0);
  CHECK(a2.comp(0)[m2] == 2.0 * u2.comp(0)[m2]);
  CHECK(a2.comp(1)[m2] == 2.0 * u2.comp(1)[m2]);

  SpectralField z(grid16());
  CHECK(sobolev_norm(apply_stokes(z), 0.0) == 0.0);
}

TEST_CASE("stokes: positivity <Au,u> = |grad u|^2 >= lambda1 |u|^2") {
  for (std::uint64_t s = 100; s < 110; ++s) {
    auto u = random_divfree(grid16(), s, 1.0);
    const double quad = l2_inner(apply_stokes(u), u);
    const double v = sobolev_norm(u, 1.0);
    const double l2 = sobolev_norm(u, 0.0);
    CHECK(rel_gap(quad, v * v) <= 1e-12);
    CHECK(quad >= l2 * l2 * (1.0 - 1e-12));
  }
  auto e = single_mode(grid16(), 1, 0, 0, cxd(0, 0), cxd(1, 0), cxd(0, 0));
  CHECK(rel_gap(l2_inner(apply_stokes(e), e), std::pow(sobolev_norm(e, 0.0), 2)) <= 1e-13);
}

TEST_CASE("galerkin truncation: threshold semantics inclusive, ties together") {
  auto g = grid16();
  auto u = single_mode(g, 2, 0, 0, cxd(0, 0), cxd(1, 0), cxd(0, 0));  // |k|^2 = 4
  SpectralField a(g);
  copy_into(u, a);
  galerkin_truncate(a, 3.0);
  CHECK(sobolev_norm(a, 0.0) == 0.0);
  copy_into(u, a);
  galerkin_truncate(a, 4.0);
  CHECK(sobolev_norm(a, 0.0) == doctest::Approx(sobolev_norm(u, 0.0)).epsilon(1e-15));

  auto r = random_divfree(g, 7, 1.0);
  SpectralField full(g);
  copy_into(r, full);
  galerkin_truncate(full, g->max_lambda());
  CHECK(max_coeff_gap(full, r) == 0.0);  // top threshold is the identity

  copy_into(r, full);
  galerkin_truncate(full, 0.0);
  CHECK(sobolev_norm(full, 0.0) == 0.0);  // mean mode pinned to zero
}

TEST_CASE("galerkin truncation: P and I-P are orthogonal and complementary") {
  auto g = grid16();
  for (double lam : {1.0, 4.0, 9.0, 30.0}) {
    auto u = random_divfree(g, 23, 1.0);
    SpectralField low(g), high(g);
    copy_into(u, low);
    copy_into(u, high);
    galerkin_truncate(low, lam);
    galerkin_tail(high, lam);
    CHECK(std::abs(l2_inner(low, high)) <= 1e-12);
    axpy(1.0, high, low);
    CHECK(max_coeff_gap(low, u) <= 1e-15);
  }
}

TEST_CASE("sobolev norms: single modes and the two-mode pythagoras") {
  auto g = grid16();
  auto e = single_mode(g, 1, 0, 0, cxd(0, 0), cxd(1, 0), cxd(0, 0));
  const double n0 = sobolev_norm(e, 0.0);
  CHECK(rel_gap(n0, sobolev_norm(e, 1.0)) <= 1e-15);
  CHECK(rel_gap(n0, sobolev_norm(e, 2.0)) <= 1e-15);

  SpectralField z(g);
  CHECK(sobolev_norm(z, 0.0) == 0.0);
  CHECK(sobolev_norm(z, 1.0) == 0.0);
  CHECK(sobolev_norm(z, 2.0) == 0.0);

  // |k|^2 = 1 and |k|^2 = 4 modes with equal L2 mass a: V-norm = a*sqrt(1+4)
  SpectralField two(g);
  auto m1 = single_mode(g, 1, 0, 0, cxd(0, 0), cxd(1, 0), cxd(0, 0));
  auto m4 = single_mode(g, 0, 2, 0, cxd(1, 0), cxd(0, 0), cxd(0, 0));
  const double a1 = sobolev_norm(m1, 0.0);
  copy_into(m1, two);
  axpy(a1 / sobolev_norm(m4, 0.0), m4, two);
  CHECK(rel_gap(sobolev_norm(two, 1.0), a1 * std::sqrt(5.0)) <= 1e-13);

  for (std::uint64_t s = 40; s < 44; ++s) {
    auto u = random_divfree(g, s, 2.0);
    const double l2 = sobolev_norm(u, 0.0), v = sobolev_norm(u, 1.0), av = sobolev_norm(u, 2.0);
    CHECK(l2 <= v * (1.0 + 1e-12));
    CHECK(v <= av * (1.0 + 1e-12));
  }
}

TEST_CASE("tail bound: one-mode equality case and summation oracle") {
  auto g = grid16();
  auto u = single_mode(g, 2, 0, 0, cxd(0, 0), cxd(0.7, 0.1), cxd(0, 0));
  auto rep = tail_sobolev_bound_check(u, 3.0, 1.0);
  CHECK(rep.lambda_next == 4.0);
  CHECK(rel_gap(rep.tail_sq, rep.bound) <= 1e-12);  // equality case
  CHECK(rep.satisfied);

  auto low = single_mode(g, 1, 0, 0, cxd(0, 0), cxd(1, 0), cxd(0, 0));
  auto rep2 = tail_sobolev_bound_check(low, 9.0, 1.0);
  CHECK(rep2.tail_sq == 0.0);
  CHECK(rep2.satisfied);

  for (std::uint64_t s = 60; s < 70; ++s) {
    auto r = random_divfree(g, s, 1.0, 4.0);
    for (double lam : {2.0, 6.0, 14.0, 27.0})
      for (double order : {1.0, 2.0}) {
        auto t = tail_sobolev_bound_check(r, lam, order);
        CHECK(t.satisfied);
        double oracle = 0.0;
        for (int c = 0; c < 3; ++c)
          for (std::size_t i = 0; i < g->modes(); ++i)
            if (g->ksq()[i] > lam) oracle += g->weight()[i] * std::norm(r.comp(c)[i]);
        oracle *= g->volume();
        CHECK(rel_gap(t.tail_sq + 1e-300, oracle + 1e-300) <= 1e-12);
      }
  }
}

TEST_CASE("transforms: round trips and analytic cosine samples") {
  auto g = grid16();
  Transform tf(g);
  PhysicalField p(g);

  SpectralField zero(g);
  tf.to_physical(zero, p);
  SpectralField back(g);
  tf.to_spectral(p, back);
  CHECK(sobolev_norm(back, 0.0) == 0.0);

  // component 1 carries cos(2x): coefficient 1/2 at k = (±2, 0, 0)
  auto c = single_mode(g, 2, 0, 0, cxd(0, 0), cxd(0.5, 0), cxd(0, 0));
  tf.to_physical(c, p);
  const int n = g->n();
  for (int ix = 0; ix < n; ++ix) {
    const double x = 2.0 * std::numbers::pi * ix / n;
    const std::size_t node = static_cast<std::size_t>(ix) * n * n;  // (ix, 0, 0)
    CHECK(std::abs(p.comp(1)[node] - std::cos(2 * x)) <= 1e-12);
  }

  auto u = random_divfree(g, 3, 1.0);
  tf.to_physical(u, p);
  tf.to_spectral(p, back);
  double scale = 0.0;
  for (std::size_t i = 0; i < u.data().size(); ++i)
    scale = std::max(scale, std::abs(u.data()[i]));
  CHECK(max_coeff_gap(u, back) <= 1e-12 * scale);
}

TEST_CASE("parseval: coefficient norm equals physical quadrature norm") {
  auto g = grid16();
  Transform tf(g);
  PhysicalField p(g);
  for (std::uint64_t s = 81; s < 86; ++s) {
    auto u = random_divfree(g, s, 1.0);
    tf.to_physical(u, p);
    double quad = 0.0;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < g->nodes(); ++i) quad += p.comp(c)[i] * p.comp(c)[i];
    quad = std::sqrt(quad * g->volume() / static_cast<double>(g->nodes()));
    CHECK(rel_gap(quad, sobolev_norm(u, 0.0)) <= 1e-12);
  }
}

TEST_CASE("dealias: band-limited fields unchanged, top modes zeroed, idempotent") {
  auto g = grid16();
  auto inside = single_mode(g, 3, 2, 1, cxd(0.3, 0.1), cxd(0, 0), cxd(0.2, -0.4));
  SpectralField a(g);
  copy_into(inside, a);
  dealias(a);
  CHECK(max_coeff_gap(a, inside) == 0.0);

  auto top = single_mode(g, 7, 0, 0, cxd(0, 0), cxd(1, 0), cxd(0, 0));
  dealias(top);
  CHECK(sobolev_norm(top, 0.0) == 0.0);

  auto r = random_divfree(g, 5, 1.0);
  SpectralField once(g), twice(g);
  copy_into(r, once);
  dealias(once);
  copy_into(once, twice);
  dealias(twice);
  CHECK(max_coeff_gap(once, twice) == 0.0);
}

TEST_CASE("conjugate symmetry: preserved by the spectral operators") {
  auto g = grid16();
  auto u = random_divfree(g, 17, 1.0);
  CHECK(conjugate_asymmetry(u) <= 1e-14);
  auto au = apply_stokes(u);
  CHECK(conjugate_asymmetry(au) <= 1e-13);
  SpectralField cu(g);
  curl(u, cu);
  CHECK(conjugate_asymmetry(cu) <= 1e-13);
}

TEST_CASE("kernels: serial and parallel paths agree bitwise") {
  auto g = grid16();
  auto u = random_divfree(g, 19, 1.0);
  SpectralField a(g), b(g);

  copy_into(u, a);
  copy_into(u, b);
  kernels::leray_serial(g->kx().data(), g->ky().data(), g->kz().data(), g->modes(),
                        a.comp(0).data(), a.comp(1).data(), a.comp(2).data());
  kernels::leray_parallel(g->kx().data(), g->ky().data(), g->kz().data(), g->modes(),
                          b.comp(0).data(), b.comp(1).data(), b.comp(2).data());
  CHECK(max_coeff_gap(a, b) == 0.0);

  const double rs = kernels::sum_weighted_sq(u.comp(0), g->weight(), ExecPolicy::Serial);
  const double rp = kernels::sum_weighted_sq(u.comp(0), g->weight(), ExecPolicy::Parallel);
  CHECK(rs == rp);  // blocked reduction: identical combine order

  double naive = 0.0;
  for (std::size_t i = 0; i < g->modes(); ++i) naive += g->weight()[i] * std::norm(u.comp(0)[i]);
  CHECK(rel_gap(rs, naive) <= 1e-13);
}
