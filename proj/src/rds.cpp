#include "calmedns/rds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "calmedns/fields.hpp"

namespace calmedns {

NoiseRealization NoiseRealization::make(const NoiseConfig& cfg) {
  NoiseRealization n;
  n.seed = cfg.seed;
  n.wiener = WienerPath::sample(cfg.seed, -cfg.horizon, cfg.horizon, cfg.dt);
  n.z = OUPath::from_wiener(n.wiener, cfg.gamma, cfg.init);
  return n;
}

SpectralField cocycle(const ModelParams& m, const StepperConfig& cfg,
                      const NoiseRealization& noise, double t, double tau,
                      const SpectralField& u_tau, double path_shift) {
  StepperConfig c = cfg;
  c.t0 = tau;
  c.t1 = tau + t;
  PathFrame frame{&noise.z, path_shift - tau};
  SpectralField v(u_tau.grid_ptr());
  copy_into(u_tau, v);
  const double z0 = noise.z.value_at_time(path_shift);
  axpy(-z0, m.h(), v);  // v_τ = u_τ − h z(ω)
  Stepper st(m, c);
  TrajectoryRecord rec = st.integrate(v, frame);
  SpectralField u(u_tau.grid_ptr());
  copy_into(*rec.final_state, u);
  const double zt = noise.z.value_at_time(path_shift + t);
  axpy(zt, m.h(), u);  // u = v + h z(θ_t ω)
  return u;
}

PullbackRun pullback_run(const ModelParams& m, const StepperConfig& cfg,
                         const NoiseRealization& noise, double tau, double t,
                         const SpectralField& u0) {
  PullbackRun run{t, {}, SpectralField(u0.grid_ptr()), 0.0, 0.0};
  StepperConfig c = cfg;
  c.t0 = tau - t;
  c.t1 = tau;
  PathFrame frame{&noise.z, -tau};
  run.z_at_start = noise.z.value_at_time(-t);
  run.z_at_tau = noise.z.value_at_time(0.0);
  SpectralField v(u0.grid_ptr());
  copy_into(u0, v);
  axpy(-run.z_at_start, m.h(), v);  // v_{τ−t} = u₀ − h z(θ_{−t}ω)
  Stepper st(m, c);
  run.record = st.integrate(v, frame);
  copy_into(*run.record.final_state, run.terminal_u);
  axpy(run.z_at_tau, m.h(), run.terminal_u);
  return run;
}

namespace {

struct CellError {
  bool failed = false;
  std::string what;
};

template <class Body>
void run_cells(std::size_t count, Body&& body) {
  std::vector<CellError> errors(count);
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = {true, e.what()};
    }
  }
  for (const auto& e : errors)
    if (e.failed) throw std::runtime_error("experiment cell failed: " + e.what);
}

}  // namespace

std::vector<PullbackFamilyEntry> pullback_family(const ModelParams& m, const StepperConfig& cfg,
                                                 const NoiseRealization& noise, double tau,
                                                 const std::vector<double>& t_list,
                                                 const std::vector<SpectralField>& initials) {
  for (std::size_t j = 1; j < t_list.size(); ++j)
    if (!(t_list[j] > t_list[j - 1]))
      throw std::invalid_argument("pullback_family: t_list must be increasing");
  const std::size_t cells = t_list.size() * initials.size();
  std::vector<PullbackFamilyEntry> out;
  out.reserve(cells);
  for (std::size_t i = 0; i < initials.size(); ++i)
    for (std::size_t j = 0; j < t_list.size(); ++j)
      out.push_back({static_cast<int>(i), t_list[j], 0.0, SpectralField(m.grid_ptr())});

  run_cells(cells, [&](std::size_t c) {
    const auto& e = out[c];
    if (e.horizon == 0.0) {
      // t = 0: the cocycle is the identity
      copy_into(initials[e.initial_index], out[c].terminal_u);
    } else {
      PullbackRun run = pullback_run(m, cfg, noise, tau, e.horizon, initials[e.initial_index]);
      copy_into(run.terminal_u, out[c].terminal_u);
    }
    const double g = sobolev_norm(out[c].terminal_u, 1.0);
    out[c].terminal_grad_sq = g * g;
  });
  return out;
}

AbsorbingEstimate absorbing_radius(const ModelParams& m, const ConstantsLedger& lg,
                                   const NoiseRealization& noise, double tau, double T,
                                   double shift) {
  const double kappa = lg.kappa;
  if (!(kappa > 0.0))
    throw TheoryOutOfRange("absorbing_radius: kappa <= 0, the absorbing-set bound needs "
                           "a strictly positive decay rate");
  AbsorbingEstimate est;
  est.m1 = lg.m1;
  est.truncation = std::exp(-kappa * T);
  if (!(est.truncation < 1e-6))
    throw std::invalid_argument("absorbing_radius: horizon too short, e^{-kappa T} >= 1e-6");
  const double dt = noise.z.dt();
  const auto steps = static_cast<std::int64_t>(std::llround(T / dt));
  const double z0 = noise.z.value_at_time(shift);
  est.z0_sq = z0 * z0;
  double f_acc = 0.0, z_acc = 0.0;
  auto f_term = [&](std::int64_t i) {
    const double r = static_cast<double>(i) * dt;
    return std::exp(kappa * r) * m.forcing().norm_sq(r + tau + shift);
  };
  auto z_term = [&](std::int64_t i) {
    const double r = static_cast<double>(i) * dt;
    const double z = noise.z.value_at_time(r + shift);
    return std::exp(kappa * r) * z * z;
  };
  double fp = f_term(-steps), zp = z_term(-steps);
  for (std::int64_t i = -steps + 1; i <= 0; ++i) {
    const double fc = f_term(i), zc = z_term(i);
    f_acc += 0.5 * (fp + fc) * dt;
    z_acc += 0.5 * (zp + zc) * dt;
    fp = fc;
    zp = zc;
  }
  est.f_integral = f_acc;
  est.z_integral = z_acc;
  est.bracket = 1.0 + est.z0_sq + f_acc + z_acc;
  est.r_v = est.m1 * est.bracket;
  return est;
}

AbsorbingReport absorbing_experiment(const ModelParams& m, const StepperConfig& cfg,
                                     const ConstantsLedger& lg,
                                     const std::vector<std::uint64_t>& seeds,
                                     const NoiseConfig& noise_cfg, double tau,
                                     const std::vector<double>& initial_scales,
                                     const std::vector<double>& horizons,
                                     double envelope_tol) {
  AbsorbingReport rep;
  rep.horizons = horizons;
  rep.initial_scales = initial_scales;
  rep.seeds = seeds;

  const double tail_T = noise_cfg.horizon;

  struct SeedData {
    NoiseRealization noise;
    double r_v;
    std::vector<SpectralField> initials;
  };
  std::vector<SeedData> per_seed;
  per_seed.reserve(seeds.size());
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    NoiseConfig nc = noise_cfg;
    nc.seed = seeds[s];
    SeedData sd{NoiseRealization::make(nc), 0.0, {}};
    sd.r_v = absorbing_radius(m, lg, sd.noise, tau, tail_T).r_v;
    for (std::size_t i = 0; i < initial_scales.size(); ++i)
      sd.initials.push_back(random_divfree(m.grid_ptr(), seeds[s] * 1009 + i,
                                           initial_scales[i] * std::sqrt(sd.r_v)));
    rep.r_v_per_seed.push_back(sd.r_v);
    per_seed.push_back(std::move(sd));
  }

  const std::size_t ni = initial_scales.size(), nh = horizons.size();
  rep.cells.assign(seeds.size() * ni * nh, {});

  run_cells(rep.cells.size(), [&](std::size_t c) {
    const std::size_t s = c / (ni * nh);
    const std::size_t i = (c / nh) % ni;
    const std::size_t h = c % nh;
    const SeedData& sd = per_seed[s];
    AbsorbingCell cell;
    cell.seed = seeds[s];
    cell.initial_index = static_cast<int>(i);
    cell.horizon = horizons[h];
    cell.r_v = sd.r_v;
    cell.initial_grad_norm = sobolev_norm(sd.initials[i], 1.0);

    PullbackRun run = pullback_run(m, cfg, sd.noise, tau, cell.horizon, sd.initials[i]);
    const double g = sobolev_norm(run.terminal_u, 1.0);
    cell.terminal_grad_sq = g * g;
    cell.absorbed = cell.terminal_grad_sq <= sd.r_v;

    // in-flight "enter and stay" time against the τ-ball, in u-variables
    // (‖∇u(s)‖ ≤ ‖∇v(s)‖ + |z|‖∇h‖); scan backwards for the last excursion
    const auto& rec = run.record;
    cell.entry_time = std::numeric_limits<double>::infinity();
    std::ptrdiff_t last_out = -1;
    for (std::size_t r = 0; r < rec.size(); ++r) {
      const double gu = rec.norm_grad_v[r] + std::abs(rec.z[r]) * lg.h_v;
      if (gu * gu > sd.r_v) last_out = static_cast<std::ptrdiff_t>(r);
    }
    if (last_out + 1 < static_cast<std::ptrdiff_t>(rec.size()))
      cell.entry_time = rec.t[static_cast<std::size_t>(last_out + 1)];

    // uniform envelope along the flight
    const double g0 = rec.norm_grad_v[0] * rec.norm_grad_v[0];
    cell.envelope_applicable = std::exp(-lg.kappa * cell.horizon) * g0 <= 1.0;
    if (cell.envelope_applicable) {
      double f_int = 0.0, z_int = 0.0;
      double fp = 0.0, zp = 0.0;
      bool first = true;
      double worst = 0.0;
      for (std::size_t r = 0; r < rec.size(); ++r) {
        const double rr = rec.t[r] - tau;  // ∈ [−t, 0]
        const double fc = std::exp(lg.kappa * rr) * rec.norm_f[r] * rec.norm_f[r];
        const double zc = std::exp(lg.kappa * rr) * rec.z[r] * rec.z[r];
        if (!first) {
          const double dtp = rec.t[r] - rec.t[r - 1];
          f_int += 0.5 * (fp + fc) * dtp;
          z_int += 0.5 * (zp + zc) * dtp;
        }
        first = false;
        fp = fc;
        zp = zc;
        const double envelope =
            lg.c_unif * std::exp(-lg.kappa * rr) * (1.0 + f_int + z_int);
        const double lhs = rec.norm_grad_v[r] * rec.norm_grad_v[r];
        if (envelope > 0.0) worst = std::max(worst, lhs / envelope);
      }
      cell.envelope_worst_ratio = worst;
    }
    rep.cells[c] = cell;
  });

  // family-level verdicts
  for (std::size_t s = 0; s < seeds.size(); ++s)
    for (std::size_t i = 0; i < ni; ++i) {
      int entry_h = -1;
      for (std::size_t h = 0; h < nh; ++h) {
        const auto& cell = rep.cells[(s * ni + i) * nh + h];
        if (cell.absorbed && entry_h < 0) entry_h = static_cast<int>(h);
        if (entry_h >= 0 && !cell.absorbed) rep.all_families_absorb = false;
      }
      if (entry_h < 0) rep.all_families_absorb = false;  // never absorbed
      double prev_entry = std::numeric_limits<double>::infinity();
      for (std::size_t h = 0; h < nh; ++h) {
        const auto& cell = rep.cells[(s * ni + i) * nh + h];
        const double slack = cfg.dt * cfg.snapshot_stride + 1e-9;
        if (cell.entry_time > prev_entry + slack) rep.entry_times_monotone = false;
        prev_entry = std::min(prev_entry, cell.entry_time);
      }
    }
  for (const auto& cell : rep.cells)
    if (cell.envelope_applicable && cell.envelope_worst_ratio > envelope_tol)
      rep.envelope_ok = false;
  return rep;
}

FlatteningReport flattening_analysis(const ModelParams& m, const StepperConfig& cfg,
                                     const ConstantsLedger& lg, const NoiseRealization& noise,
                                     double tau, double t, const std::vector<double>& thresholds,
                                     double delta, const SpectralField& u0) {
  FlatteningReport rep;
  rep.delta = delta;
  rep.horizon = t;

  StepperConfig c = cfg;
  PullbackRun run = pullback_run(m, c, noise, tau, t, u0);
  const auto& rec = run.record;
  const double g0 = rec.norm_grad_v[0] * rec.norm_grad_v[0];
  rep.entry_ok = std::exp(-lg.kappa * t) * g0 <= 1.0;

  SpectralField v_tau(m.grid_ptr());
  copy_into(*run.record.final_state, v_tau);
  SpectralField v_start(m.grid_ptr());
  copy_into(u0, v_start);
  axpy(-run.z_at_start, m.h(), v_start);

  const double m_eps = lg.m_eps;
  const double nu = lg.nu;
  const double kappa = lg.kappa;
  // pullback bracket for the envelope constant
  const double bracket = absorbing_radius(m, lg, noise, tau, -noise.z.t_min()).bracket;

  rep.smallest_passing_lambda = 0.0;
  for (double lam : thresholds) {
    FlatteningRow row;
    row.lambda = lam;
    row.lambda_next = m.grid().next_lambda_above(lam);
    row.resolved = lam < m.grid().max_lambda() && std::isfinite(row.lambda_next);
    if (!row.resolved) {
      // cannot certify beyond the resolved band; report the zero tail as-is
      row.tail_v = 0.0;
      row.tail_u = 0.0;
      row.noise_tail = 0.0;
      row.below_delta = true;
      rep.rows.push_back(row);
      continue;
    }
    SpectralField tail(m.grid_ptr());
    copy_into(v_tau, tail);
    galerkin_tail(tail, lam);
    row.tail_v = sobolev_norm(tail, 1.0);
    copy_into(run.terminal_u, tail);
    galerkin_tail(tail, lam);
    row.tail_u = sobolev_norm(tail, 1.0);
    copy_into(m.h(), tail);
    galerkin_tail(tail, lam);
    row.noise_tail = std::abs(run.z_at_tau) * sobolev_norm(tail, 1.0);

    // tail energy budget: I₁ start tail, I₂ state integral, I₃ forcing, I₄ noise
    const double lamn = row.lambda_next;
    copy_into(v_start, tail);
    galerkin_tail(tail, lam);
    const double tail0 = sobolev_norm(tail, 1.0);
    row.i1 = std::exp(-nu * lamn * t) * tail0 * tail0;
    double i2 = 0.0, i3 = 0.0, i4 = 0.0;
    for (std::size_t r = 1; r < rec.size(); ++r) {
      const double dtp = rec.t[r] - rec.t[r - 1];
      auto weight = [&](std::size_t q) { return std::exp(nu * lamn * (rec.t[q] - tau)); };
      i2 += 0.5 * dtp *
            (weight(r - 1) * rec.norm_grad_v[r - 1] * rec.norm_grad_v[r - 1] +
             weight(r) * rec.norm_grad_v[r] * rec.norm_grad_v[r]);
      i3 += 0.5 * dtp *
            (weight(r - 1) * rec.norm_f[r - 1] * rec.norm_f[r - 1] +
             weight(r) * rec.norm_f[r] * rec.norm_f[r]);
      i4 += 0.5 * dtp *
            (weight(r - 1) * rec.z[r - 1] * rec.z[r - 1] + weight(r) * rec.z[r] * rec.z[r]);
    }
    row.i2 = (2.0 * m_eps * m_eps / nu) * i2;
    row.i3 = lg.beta_f * i3;
    row.i4 = lg.beta_z * i4;
    row.budget = row.i1 + row.i2 + row.i3 + row.i4;
    row.i2_envelope =
        (2.0 * m_eps * m_eps / nu) * lg.c_unif * bracket / (nu * lamn - kappa);
    row.below_delta = row.tail_u < delta;
    if (row.below_delta && rep.smallest_passing_lambda == 0.0)
      rep.smallest_passing_lambda = lam;
    rep.rows.push_back(row);
  }
  return rep;
}

CauchyReport attractor_cauchy_test(const ModelParams& m, const StepperConfig& cfg,
                                   const NoiseRealization& noise, double tau,
                                   const std::vector<SpectralField>& initials,
                                   const std::vector<double>& horizons) {
  CauchyReport rep;
  rep.horizons = horizons;
  const std::size_t ni = initials.size(), nh = horizons.size();
  std::vector<SpectralField> terminal;
  terminal.reserve(ni * nh);
  for (std::size_t i = 0; i < ni * nh; ++i) terminal.emplace_back(m.grid_ptr());

  run_cells(ni * nh, [&](std::size_t c) {
    const std::size_t i = c / nh, h = c % nh;
    PullbackRun run = pullback_run(m, cfg, noise, tau, horizons[h], initials[i]);
    copy_into(run.terminal_u, terminal[c]);
  });

  SpectralField diff(m.grid_ptr());
  auto vgap = [&](const SpectralField& a, const SpectralField& b) {
    copy_into(a, diff);
    axpy(-1.0, b, diff);
    return sobolev_norm(diff, 1.0);
  };

  rep.gap_horizon.assign(ni, {});
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t h = 0; h + 1 < nh; ++h) {
      const double g = vgap(terminal[i * nh + h], terminal[i * nh + h + 1]);
      rep.gap_horizon[i].push_back(g);
    }
    for (std::size_t j = 1; j < rep.gap_horizon[i].size(); ++j)
      if (rep.gap_horizon[i][j] > rep.gap_horizon[i][j - 1])
        rep.horizon_gaps_decreasing = false;
  }
  if (ni >= 2) {
    for (std::size_t h = 0; h < nh; ++h)
      rep.gap_initial.push_back(vgap(terminal[0 * nh + h], terminal[1 * nh + h]));
    for (std::size_t j = 1; j < rep.gap_initial.size(); ++j)
      if (rep.gap_initial[j] > rep.gap_initial[j - 1]) rep.initial_gaps_decreasing = false;
  }

  // integrator noise floor: dt-halved control at the largest horizon
  StepperConfig fine = cfg;
  fine.dt = cfg.dt / 2.0;
  fine.snapshot_stride = cfg.snapshot_stride * 2;
  PullbackRun coarse_run = pullback_run(m, cfg, noise, tau, horizons.back(), initials[0]);
  PullbackRun fine_run = pullback_run(m, fine, noise, tau, horizons.back(), initials[0]);
  rep.noise_floor = vgap(coarse_run.terminal_u, fine_run.terminal_u);
  return rep;
}

CalmingProbeReport calming_consistency_probe(const ModelParams& a, const ModelParams& b,
                                             const StepperConfig& cfg, const SpectralField& v0) {
  CalmingProbeReport rep;
  Stepper sa(a, cfg), sb(b, cfg);
  PathFrame frame{};  // no noise: the probe compares the deterministic flows
  SpectralField va(v0.grid_ptr()), vb(v0.grid_ptr()), diff(v0.grid_ptr());
  copy_into(v0, va);
  copy_into(v0, vb);
  const auto n = static_cast<long long>(std::llround((cfg.t1 - cfg.t0) / cfg.dt));
  rep.compared_until = cfg.t0;
  for (long long i = 0; i < n; ++i) {
    const double t = cfg.t0 + static_cast<double>(i) * cfg.dt;
    try {
      sa.step(va, t, frame);
      sb.step(vb, t, frame);
    } catch (const BlowUpError&) {
      rep.truncated_by_blowup = true;
      return rep;
    }
    copy_into(va, diff);
    axpy(-1.0, vb, diff);
    const double g = sobolev_norm(diff, 1.0);
    if (!std::isfinite(g)) {
      rep.truncated_by_blowup = true;
      return rep;
    }
    rep.sup_v_gap = std::max(rep.sup_v_gap, g);
    rep.compared_until = t + cfg.dt;
  }
  return rep;
}

}  // namespace calmedns
