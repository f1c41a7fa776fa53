#include "calmedns/calming.hpp"

#include <cmath>
#include <stdexcept>

#include "calmedns/kernels.hpp"
#include "calmedns/rng.hpp"

namespace calmedns {

std::string to_string(CalmingVariant v) {
  switch (v) {
    case CalmingVariant::Z1: return "z1";
    case CalmingVariant::Z2: return "z2";
    case CalmingVariant::Z3: return "z3";
    case CalmingVariant::Z4: return "z4";
    case CalmingVariant::Identity: return "identity";
  }
  return "?";
}

CalmingSpec::CalmingSpec(CalmingVariant variant, double eps) : variant_(variant), eps_(eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("CalmingSpec: eps must be positive");
}

double CalmingSpec::sup_norm() const {
  switch (variant_) {
    case CalmingVariant::Z1: return 1.0 / eps_;
    case CalmingVariant::Z2: return 1.0 / (2.0 * eps_);
    case CalmingVariant::Z3: return std::sqrt(3.0) * std::numbers::pi / (2.0 * eps_);
    case CalmingVariant::Z4: return 1.5 / eps_;
    case CalmingVariant::Identity:
      throw std::domain_error("sup_norm: identity variant is unbounded");
  }
  return 0.0;
}

double CalmingSpec::sup_norm_or_inf() const {
  if (variant_ == CalmingVariant::Identity) return std::numeric_limits<double>::infinity();
  return sup_norm();
}

ResidualConstants CalmingSpec::residual_constants() const {
  switch (variant_) {
    case CalmingVariant::Z1: return {1.0, 1.0, 2.0};
    case CalmingVariant::Z2: return {1.0, 2.0, 3.0};
    case CalmingVariant::Z3: return {1.0 / 3.0, 2.0, 3.0};
    case CalmingVariant::Z4: return {2.5, 1.0, 2.0};
    case CalmingVariant::Identity: return {0.0, 1.0, 1.0};
  }
  return {};
}

namespace {

inline double q4(double r, double eps) {
  if (r < 1.0 / eps) return r;
  if (r < 2.0 / eps) {
    const double d = r - 2.0 / eps;
    return -(eps / 2.0) * d * d + 1.5 / eps;
  }
  return 1.5 / eps;
}

inline void eval_one(CalmingVariant v, double eps, double x0, double x1, double x2, double& o0,
                     double& o1, double& o2) {
  switch (v) {
    case CalmingVariant::Z1: {
      const double r = std::sqrt(x0 * x0 + x1 * x1 + x2 * x2);
      const double s = 1.0 / (1.0 + eps * r);
      o0 = s * x0;
      o1 = s * x1;
      o2 = s * x2;
      return;
    }
    case CalmingVariant::Z2: {
      const double r2 = x0 * x0 + x1 * x1 + x2 * x2;
      const double s = 1.0 / (1.0 + eps * eps * r2);
      o0 = s * x0;
      o1 = s * x1;
      o2 = s * x2;
      return;
    }
    case CalmingVariant::Z3: {
      o0 = std::atan(eps * x0) / eps;
      o1 = std::atan(eps * x1) / eps;
      o2 = std::atan(eps * x2) / eps;
      return;
    }
    case CalmingVariant::Z4: {
      const double r = std::sqrt(x0 * x0 + x1 * x1 + x2 * x2);
      // q(r)/r = 1 on [0, 1/eps), which also covers the removable r = 0 point
      const double s = (r < 1.0 / eps) ? 1.0 : q4(r, eps) / r;
      o0 = s * x0;
      o1 = s * x1;
      o2 = s * x2;
      return;
    }
    case CalmingVariant::Identity:
      o0 = x0;
      o1 = x1;
      o2 = x2;
      return;
  }
}

}  // namespace

std::array<double, 3> CalmingSpec::eval(const std::array<double, 3>& x) const {
  std::array<double, 3> out{};
  eval_one(variant_, eps_, x[0], x[1], x[2], out[0], out[1], out[2]);
  return out;
}

void calm_field_serial(const CalmingSpec& spec, const PhysicalField& in, PhysicalField& out) {
  const std::size_t n = in.grid().nodes();
  const auto v = spec.variant();
  const double eps = spec.eps();
  const double *ax = in.comp(0).data(), *ay = in.comp(1).data(), *az = in.comp(2).data();
  double *ox = out.comp(0).data(), *oy = out.comp(1).data(), *oz = out.comp(2).data();
  for (std::size_t i = 0; i < n; ++i)
    eval_one(v, eps, ax[i], ay[i], az[i], ox[i], oy[i], oz[i]);
}

void calm_field_parallel(const CalmingSpec& spec, const PhysicalField& in, PhysicalField& out) {
  const long long n = static_cast<long long>(in.grid().nodes());
  const auto v = spec.variant();
  const double eps = spec.eps();
  const double *ax = in.comp(0).data(), *ay = in.comp(1).data(), *az = in.comp(2).data();
  double *ox = out.comp(0).data(), *oy = out.comp(1).data(), *oz = out.comp(2).data();
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i)
    eval_one(v, eps, ax[i], ay[i], az[i], ox[i], oy[i], oz[i]);
}

void calm_field(const CalmingSpec& spec, const PhysicalField& in, PhysicalField& out,
                ExecPolicy pol) {
  if (pol == ExecPolicy::Parallel && exec::openmp_compiled())
    calm_field_parallel(spec, in, out);
  else
    calm_field_serial(spec, in, out);
}

namespace {

inline double norm3(const std::array<double, 3>& x) {
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

std::array<double, 3> ball_point(std::uint64_t seed, std::uint64_t base, double radius) {
  // direction from three normals, radius via u^{1/3}
  std::array<double, 3> d{rng::normal(seed, rng::kAxiomSamples, base),
                          rng::normal(seed, rng::kAxiomSamples, base + 1),
                          rng::normal(seed, rng::kAxiomSamples, base + 2)};
  double nd = norm3(d);
  if (nd == 0.0) nd = 1.0;
  const double u = rng::uniform(seed, rng::kAxiomSamples, base + 3);
  const double r = radius * std::cbrt(u);
  return {d[0] / nd * r, d[1] / nd * r, d[2] / nd * r};
}

}  // namespace

AxiomReport verify_calming_axioms(const CalmingSpec& spec, std::size_t sample_count,
                                  double radius, std::uint64_t seed) {
  AxiomReport rep;
  const double m_eps = spec.sup_norm_or_inf();
  const ResidualConstants rc = spec.residual_constants();
  const double residual_scale = rc.C * std::pow(spec.eps(), rc.alpha);

  for (std::size_t i = 0; i < sample_count; ++i) {
    const std::uint64_t base = 16 * i;
    const auto x = ball_point(seed, base, radius);
    // half the pairs are independent, half are short displacements so the
    // local Lipschitz ratio is probed too
    std::array<double, 3> y;
    if (i % 2 == 0) {
      y = ball_point(seed, base + 8, radius);
    } else {
      const auto d = ball_point(seed, base + 8, 1.0);
      const double h = 1e-5 + 1e-2 * rng::uniform(seed, rng::kAxiomSamples, base + 12);
      y = {x[0] + h * d[0], x[1] + h * d[1], x[2] + h * d[2]};
    }

    const auto zx = spec.eval(x);
    const auto zy = spec.eval(y);

    const std::array<double, 3> dxy{x[0] - y[0], x[1] - y[1], x[2] - y[2]};
    const std::array<double, 3> dz{zx[0] - zy[0], zx[1] - zy[1], zx[2] - zy[2]};
    const double nxy = norm3(dxy);
    if (nxy > 0.0) {
      const double ratio = norm3(dz) / nxy;
      if (ratio > rep.worst_lipschitz_ratio) {
        rep.worst_lipschitz_ratio = ratio;
        rep.lipschitz_witness = {x, y, ratio};
      }
    }

    const double nz = norm3(zx);
    const double excess = nz - (std::isinf(m_eps) ? nz - 1.0 : m_eps);
    if (std::isinf(m_eps)) {
      // identity: any sample beyond every candidate bound witnesses unboundedness;
      // report the largest value seen
      if (nz > rep.worst_bound_excess) {
        rep.worst_bound_excess = nz;
        rep.bound_witness = {x, x, nz};
      }
    } else if (excess > rep.worst_bound_excess) {
      rep.worst_bound_excess = excess;
      rep.bound_witness = {x, x, nz};
    }

    const double nx = norm3(x);
    if (rc.C > 0.0 && nx > 0.0) {
      const std::array<double, 3> res{zx[0] - x[0], zx[1] - x[1], zx[2] - x[2]};
      const double ratio = norm3(res) / (residual_scale * std::pow(nx, rc.beta));
      if (ratio > rep.worst_residual_ratio) {
        rep.worst_residual_ratio = ratio;
        rep.residual_witness = {x, x, ratio};
      }
    }
  }

  rep.lipschitz_ok = rep.worst_lipschitz_ratio <= spec.lipschitz_bound() + kLipschitzTol;
  if (spec.variant() == CalmingVariant::Identity) {
    // unbounded: boundedness fails by definition
    rep.bounded_ok = false;
  } else {
    rep.bounded_ok = rep.worst_bound_excess <= kBoundedTol;
  }
  rep.residual_ok = rep.worst_residual_ratio <= 1.0 + 1e-9;
  return rep;
}

}  // namespace calmedns
