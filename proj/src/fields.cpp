#include "calmedns/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "calmedns/rng.hpp"

namespace calmedns {

namespace {

// evaluate an analytic vector field on the nodes and transform
template <class F>
SpectralField from_analytic(GridPtr grid, F&& f) {
  PhysicalField phys(grid);
  const int n = grid->n();
  const double h = 2.0 * std::numbers::pi / n;
  std::size_t idx = 0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz, ++idx) {
        const auto v = f(ix * h, iy * h, iz * h);
        phys.comp(0)[idx] = v[0];
        phys.comp(1)[idx] = v[1];
        phys.comp(2)[idx] = v[2];
      }
  SpectralField out(grid);
  Transform tf(grid);
  tf.to_spectral(phys, out);
  return out;
}

void scale_to(SpectralField& u, double target, double s) {
  const double cur = sobolev_norm(u, s);
  if (cur == 0.0) throw std::runtime_error("field preset is identically zero");
  scale(u, target / cur);
}

}  // namespace

SpectralField taylor_green(GridPtr grid, double v_norm) {
  auto u = from_analytic(grid, [](double x, double y, double z) {
    return std::array<double, 3>{std::sin(x) * std::cos(y) * std::cos(z),
                                 -std::cos(x) * std::sin(y) * std::cos(z), 0.0};
  });
  scale_to(u, v_norm, 1.0);
  return u;
}

SpectralField shear_profile(GridPtr grid, double l2_norm) {
  auto u = from_analytic(grid, [](double, double y, double) {
    return std::array<double, 3>{std::sin(y), 0.0, 0.0};
  });
  scale_to(u, l2_norm, 0.0);
  return u;
}

SpectralField gradient_profile(GridPtr grid) {
  return from_analytic(grid, [](double x, double, double) {
    return std::array<double, 3>{-std::sin(x), 0.0, 0.0};
  });
}

ScalarField cosx_scalar(GridPtr grid) {
  ScalarField phi(grid);
  // cos x = (e^{ix} + e^{−ix})/2: stored mode (1,0,0) gets 1/2, partner implied
  // lives on the iz = 0 plane, so both signed modes are stored explicitly.
  phi.coeffs()[grid->index(1, 0, 0)] = cxd(0.5, 0.0);
  phi.coeffs()[grid->index(grid->n() - 1, 0, 0)] = cxd(0.5, 0.0);
  return phi;
}

namespace {
std::uint64_t mode_key(int kx, int ky, int kz) {
  const auto e = [](int k) { return static_cast<std::uint64_t>(k + 512); };
  return (e(kx) * 1024 + e(ky)) * 1024 + e(kz);
}
}  // namespace

SpectralField random_divfree(GridPtr grid, std::uint64_t seed, double v_norm,
                             double decay_scale) {
  SpectralField u(grid);
  const WaveGrid& g = *grid;
  const std::size_t m = g.modes();
  for (std::size_t i = 0; i < m; ++i) {
    if (!g.dealias_mask()[i] || g.ksq()[i] == 0.0) continue;
    const double amp = std::exp(-g.ksq()[i] / (2.0 * decay_scale * decay_scale));
    const std::uint64_t key = mode_key(g.kx()[i], g.ky()[i], g.kz()[i]);
    for (int c = 0; c < 3; ++c) {
      const double re = rng::normal(seed, rng::kInitialField + c, 2 * key);
      const double im = rng::normal(seed, rng::kInitialField + c, 2 * key + 1);
      u.comp(c)[i] = amp * cxd(re, im);
    }
  }
  enforce_conjugate_symmetry(u);
  leray_project(u);
  dealias(u);
  scale_to(u, v_norm, 1.0);
  return u;
}

SpectralField random_divfree_l2(GridPtr grid, std::uint64_t seed, double l2_norm,
                                double decay_scale) {
  auto u = random_divfree(grid, seed, 1.0, decay_scale);
  scale_to(u, l2_norm, 0.0);
  return u;
}

SpectralField named_profile(const std::string& name, GridPtr grid, double norm) {
  if (name == "taylor_green") return taylor_green(grid, norm);
  if (name == "shear") return shear_profile(grid, norm);
  if (name == "zero") return SpectralField(grid);
  throw std::invalid_argument("unknown field preset: " + name);
}

}  // namespace calmedns
