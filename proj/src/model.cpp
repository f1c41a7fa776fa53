#include "calmedns/model.hpp"

#include <cmath>
#include <stdexcept>

#include "calmedns/kernels.hpp"

namespace calmedns {

ForcingSpec ForcingSpec::zero() { return ForcingSpec(); }

ForcingSpec ForcingSpec::constant(SpectralField profile) {
  ForcingSpec f;
  f.kind_ = Kind::Constant;
  f.profile_norm_ = sobolev_norm(profile, 0.0);
  f.profile_ = std::move(profile);
  return f;
}

ForcingSpec ForcingSpec::exp_window(SpectralField profile, double sigma) {
  ForcingSpec f;
  f.kind_ = Kind::ExpWindow;
  f.sigma_ = sigma;
  f.profile_norm_ = sobolev_norm(profile, 0.0);
  f.profile_ = std::move(profile);
  return f;
}

double ForcingSpec::coef(double t) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Constant: return 1.0;
    case Kind::ExpWindow: return std::exp(sigma_ * t);
  }
  return 0.0;
}

double ForcingSpec::norm_l2(double t) const { return coef(t) * profile_norm_; }

SpectralWorkspace::SpectralWorkspace(GridPtr grid)
    : tf(grid), s_w(grid), s_curl(grid), s_tmp(grid), p_a(grid), p_b(grid), p_c(grid) {}

ModelParams::ModelParams(GridPtr grid, double nu, CalmingSpec calming, double gamma,
                         SpectralField h, ForcingSpec forcing, double alpha,
                         double lambda_active)
    : grid_(std::move(grid)),
      nu_(nu),
      calming_(calming),
      gamma_(gamma),
      h_(std::move(h)),
      Ah_(grid_),
      forcing_(std::move(forcing)),
      forcing_rhs_(grid_) {
  if (!(nu_ > 0.0)) throw std::invalid_argument("ModelParams: nu must be positive");
  if (!(gamma_ > 0.0)) throw std::invalid_argument("ModelParams: gamma must be positive");
  if (&h_.grid() != grid_.get()) throw std::invalid_argument("ModelParams: h grid mismatch");

  lambda_active_ = lambda_active > 0.0 ? lambda_active : grid_->max_lambda();
  alpha_ = alpha > 0.0 ? alpha : 0.5 * nu_ * grid_->lambda1();
  if (!(alpha_ > 0.0 && alpha_ < nu_ * grid_->lambda1()))
    throw std::invalid_argument("ModelParams: alpha must lie in (0, nu*lambda1)");

  // noise profile must lie in D(A): divergence-free and resolved
  if (divergence_max(h_) > 1e-10 * (1.0 + sobolev_norm(h_, 0.0)))
    throw std::invalid_argument("ModelParams: h must be divergence-free");
  dealias(h_);
  galerkin_truncate(h_, lambda_active_);
  apply_stokes(h_, Ah_);
  h_l2_ = sobolev_norm(h_, 0.0);
  h_v_ = sobolev_norm(h_, 1.0);
  h_a_ = sobolev_norm(h_, 2.0);

  if (forcing_.has_profile()) {
    copy_into(forcing_.profile(), forcing_rhs_);
    leray_project(forcing_rhs_);
    dealias(forcing_rhs_);
    galerkin_truncate(forcing_rhs_, lambda_active_);
  }
}

double ModelParams::kappa() const {
  const double me = m_eps();
  if (std::isinf(me)) return -std::numeric_limits<double>::infinity();
  return nu_ * grid_->lambda1() - 2.0 * me * me / nu_;
}

void rotational_bilinear(const SpectralField& a, const SpectralField& b, SpectralField& out,
                         SpectralWorkspace& ws) {
  if (&a.grid() != &b.grid() || &a.grid() != &out.grid())
    throw std::invalid_argument("rotational_bilinear: grid mismatch");
  // curl b, band-limit, to nodes
  curl(b, ws.s_curl);
  dealias(ws.s_curl);
  ws.tf.to_physical(ws.s_curl, ws.p_a);
  // band-limited a to nodes
  copy_into(a, ws.s_tmp);
  dealias(ws.s_tmp);
  ws.tf.to_physical(ws.s_tmp, ws.p_b);
  // (∇×b) × a pointwise, back to modes, clean up
  kernels::cross3(ws.p_a.comp(0).data(), ws.p_a.comp(1).data(), ws.p_a.comp(2).data(),
                  ws.p_b.comp(0).data(), ws.p_b.comp(1).data(), ws.p_b.comp(2).data(),
                  ws.p_c.comp(0).data(), ws.p_c.comp(1).data(), ws.p_c.comp(2).data(),
                  a.grid().nodes(), exec::policy());
  ws.tf.to_spectral(ws.p_c, out);
  dealias(out);
  leray_project(out);
}

double trilinear(const SpectralField& a, const SpectralField& b, const SpectralField& c,
                 SpectralWorkspace& ws) {
  SpectralField bab(a.grid_ptr());
  rotational_bilinear(a, b, bab, ws);
  return l2_inner(bab, c);
}

namespace {

// out = P_Λ B(ζ(w), w) for w already band-limited
void calmed_advection(const ModelParams& m, const SpectralField& w, SpectralField& out,
                      SpectralWorkspace& ws) {
  curl(w, ws.s_curl);
  dealias(ws.s_curl);
  ws.tf.to_physical(ws.s_curl, ws.p_a);
  copy_into(w, ws.s_tmp);
  dealias(ws.s_tmp);
  ws.tf.to_physical(ws.s_tmp, ws.p_b);
  calm_field(m.calming(), ws.p_b, ws.p_b);  // in-place is element-safe
  kernels::cross3(ws.p_a.comp(0).data(), ws.p_a.comp(1).data(), ws.p_a.comp(2).data(),
                  ws.p_b.comp(0).data(), ws.p_b.comp(1).data(), ws.p_b.comp(2).data(),
                  ws.p_c.comp(0).data(), ws.p_c.comp(1).data(), ws.p_c.comp(2).data(),
                  w.grid().nodes(), exec::policy());
  ws.tf.to_spectral(ws.p_c, out);
  dealias(out);
  leray_project(out);
  galerkin_truncate(out, m.lambda_active());
}

}  // namespace

void rhs_nonstiff(const ModelParams& m, const SpectralField& v, double t, double z,
                  SpectralField& out, SpectralWorkspace& ws) {
  if (&v.grid() != &m.grid()) throw std::invalid_argument("rhs: grid mismatch");
  const double znoise = m.terms().noise ? z : 0.0;
  // w = v + h z
  copy_into(v, ws.s_w);
  if (znoise != 0.0) axpy(znoise, m.h(), ws.s_w);

  if (m.terms().nonlinear) {
    calmed_advection(m, ws.s_w, out, ws);
    scale(out, -1.0);
  } else {
    out.set_zero();
  }
  if (znoise != 0.0) {
    axpy(-m.nu() * znoise, m.stokes_h(), out);  // −νA(hz)
    axpy(m.gamma() * znoise, m.h(), out);       // +γhz
  }
  if (m.terms().forcing && m.forcing().has_profile()) {
    const double c = m.forcing().coef(t);
    if (c != 0.0) axpy(c, m.forcing_rhs_, out);
  }
  galerkin_truncate(out, m.lambda_active());
}

void rhs_v(const ModelParams& m, const SpectralField& v, double t, double z, SpectralField& out,
           SpectralWorkspace& ws) {
  rhs_nonstiff(m, v, t, z, out, ws);
  // −νA v, fused per mode
  const auto& ksq = m.grid().ksq();
  const double nu = m.nu();
  const std::size_t nm = m.grid().modes();
  for (int c = 0; c < 3; ++c) {
    auto vv = v.comp(c);
    auto oo = out.comp(c);
    kernels::parallel_for(nm, exec::policy(),
                          [&](std::size_t i) { oo[i] -= nu * ksq[i] * vv[i]; });
  }
}

void pressure_rhs(const ModelParams& m, const SpectralField& u, double t, SpectralField& out,
                  SpectralWorkspace& ws) {
  // −(∇×u) × ζ(u), unprojected
  curl(u, ws.s_curl);
  dealias(ws.s_curl);
  ws.tf.to_physical(ws.s_curl, ws.p_a);
  copy_into(u, ws.s_tmp);
  dealias(ws.s_tmp);
  ws.tf.to_physical(ws.s_tmp, ws.p_b);
  calm_field(m.calming(), ws.p_b, ws.p_b);
  kernels::cross3(ws.p_a.comp(0).data(), ws.p_a.comp(1).data(), ws.p_a.comp(2).data(),
                  ws.p_b.comp(0).data(), ws.p_b.comp(1).data(), ws.p_b.comp(2).data(),
                  ws.p_c.comp(0).data(), ws.p_c.comp(1).data(), ws.p_c.comp(2).data(),
                  u.grid().nodes(), exec::policy());
  ws.tf.to_spectral(ws.p_c, out);
  dealias(out);
  scale(out, -1.0);
  if (m.forcing().has_profile()) {
    const double c = m.forcing().coef(t);
    if (c != 0.0) axpy(c, m.forcing().profile(), out);
  }
}

ScalarField recover_pressure(const ModelParams& m, const SpectralField& u, double t,
                             SpectralWorkspace& ws) {
  SpectralField N(u.grid_ptr());
  pressure_rhs(m, u, t, N, ws);
  ScalarField pi(u.grid_ptr());
  const WaveGrid& g = u.grid();
  const std::size_t nm = g.modes();
  auto out = pi.coeffs();
  for (std::size_t i = 0; i < nm; ++i) {
    const double k2 = g.ksq()[i];
    if (k2 == 0.0) {
      out[i] = cxd(0.0, 0.0);
      continue;
    }
    const cxd kdotN = static_cast<double>(g.kx()[i]) * N.comp(0)[i] +
                      static_cast<double>(g.ky()[i]) * N.comp(1)[i] +
                      static_cast<double>(g.kz()[i]) * N.comp(2)[i];
    // π̂ = −i (k·N̂)/|k|²
    out[i] = cxd(kdotN.imag(), -kdotN.real()) / k2;
  }
  return pi;
}

void gradient(const ScalarField& phi, SpectralField& out) {
  const WaveGrid& g = phi.grid();
  const std::size_t nm = g.modes();
  auto p = phi.coeffs();
  for (std::size_t i = 0; i < nm; ++i) {
    const cxd ip = cxd(-p[i].imag(), p[i].real());  // i·π̂
    out.comp(0)[i] = static_cast<double>(g.kx()[i]) * ip;
    out.comp(1)[i] = static_cast<double>(g.ky()[i]) * ip;
    out.comp(2)[i] = static_cast<double>(g.kz()[i]) * ip;
  }
}

AssumptionReport validate_assumptions(const ModelParams& m, double evidence_horizon) {
  AssumptionReport r;
  r.m_eps = m.m_eps();
  r.a3_threshold = m.nu() * std::sqrt(m.grid().lambda1() / 2.0);
  r.kappa = m.kappa();
  r.a3_ok = r.m_eps < r.a3_threshold;
  if (!r.a3_ok)
    r.notes.push_back("a3 violated: sup norm " + std::to_string(r.m_eps) +
                      " >= " + std::to_string(r.a3_threshold) +
                      "; decay rate kappa is not positive and the absorbing-set "
                      "theory does not apply");

  const auto kind = m.forcing().kind();
  const double alpha = m.alpha();
  const double sigma = m.forcing().sigma();
  switch (kind) {
    case ForcingSpec::Kind::Zero:
      r.a1_ok = true;
      r.a2_ok = true;
      break;
    case ForcingSpec::Kind::Constant:
      r.a1_ok = true;  // ∫ e^{αs} ds < ∞ on (−∞, τ]
      r.a2_ok = true;  // e^{ct}·const → 0
      break;
    case ForcingSpec::Kind::ExpWindow:
      r.a1_ok = alpha + 2.0 * sigma > 0.0;
      // e^{ct} e^{2σt} → 0 as t → −∞ for every c > 0 requires σ ≥ 0
      r.a2_ok = sigma >= 0.0;
      if (!r.a1_ok)
        r.notes.push_back("a1 violated: alpha + 2*sigma <= 0 makes the weighted "
                          "integral of ||f||^2 diverge");
      if (!r.a2_ok)
        r.notes.push_back("a2 violated: sigma < 0 defeats the limit for small c");
      break;
  }

  // finite-horizon numeric evidence: trapezoid of e^{αs}‖f(s)‖² over [−T, 0]
  const double T = evidence_horizon;
  const int steps = 4000;
  const double hstep = T / steps;
  double acc = 0.0;
  double prev = std::exp(alpha * (-T)) * m.forcing().norm_sq(-T);
  for (int i = 1; i <= steps; ++i) {
    const double s = -T + i * hstep;
    const double cur = std::exp(alpha * s) * m.forcing().norm_sq(s);
    acc += 0.5 * (prev + cur) * hstep;
    prev = cur;
  }
  r.a1_integral = acc;
  r.a2_tail_value = std::exp(1.0 * (-T)) * acc;
  return r;
}

}  // namespace calmedns
