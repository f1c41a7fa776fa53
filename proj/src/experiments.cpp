#include "calmedns/experiments.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "calmedns/diagnostics.hpp"
#include "calmedns/fields.hpp"
#include "calmedns/rds.hpp"
#include "calmedns/snapshot.hpp"

namespace calmedns {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::optional<ExperimentKind> experiment_from_string(const std::string& name) {
  if (name == "simulate") return ExperimentKind::Simulate;
  if (name == "pullback") return ExperimentKind::Pullback;
  if (name == "absorb") return ExperimentKind::Absorb;
  if (name == "flatten") return ExperimentKind::Flatten;
  if (name == "cauchy") return ExperimentKind::Cauchy;
  if (name == "verify-calming") return ExperimentKind::VerifyCalming;
  if (name == "validate") return ExperimentKind::Validate;
  return std::nullopt;
}

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Simulate: return "simulate";
    case ExperimentKind::Pullback: return "pullback";
    case ExperimentKind::Absorb: return "absorb";
    case ExperimentKind::Flatten: return "flatten";
    case ExperimentKind::Cauchy: return "cauchy";
    case ExperimentKind::VerifyCalming: return "verify-calming";
    case ExperimentKind::Validate: return "validate";
  }
  return "?";
}

GridPtr make_grid(const RunConfig& cfg) { return WaveGrid::create(cfg.grid_n, cfg.grid_dealias); }

SpectralField make_h(const RunConfig& cfg, GridPtr grid) {
  if (cfg.h_scale == 0.0 || cfg.h_mode == "zero") return SpectralField(grid);
  if (cfg.h_mode == "taylor_green" || cfg.h_mode == "shear")
    return named_profile(cfg.h_mode, grid, cfg.h_scale);
  // otherwise a snapshot path
  auto fields = read_snapshot(cfg.h_mode, grid);
  SpectralField h = std::move(fields.at(0));
  const double cur = sobolev_norm(h, 1.0);
  if (cur > 0.0) scale(h, cfg.h_scale / cur);
  return h;
}

ForcingSpec make_forcing(const RunConfig& cfg, GridPtr grid) {
  if (cfg.forcing_kind == "zero" || cfg.forcing_amplitude == 0.0) return ForcingSpec::zero();
  SpectralField g = named_profile(cfg.forcing_profile, grid, 1.0);
  const double cur = sobolev_norm(g, 0.0);
  scale(g, cfg.forcing_amplitude / cur);
  if (cfg.forcing_kind == "constant") return ForcingSpec::constant(std::move(g));
  return ForcingSpec::exp_window(std::move(g), cfg.forcing_sigma);
}

ModelParams make_model(const RunConfig& cfg, GridPtr grid) {
  ModelParams m(grid, cfg.nu, CalmingSpec(cfg.calming_variant, cfg.calming_eps), cfg.noise_gamma,
                make_h(cfg, grid), make_forcing(cfg, grid),
                cfg.alpha > 0.0 ? cfg.alpha : -1.0, cfg.lambda > 0.0 ? cfg.lambda : -1.0);
  if (cfg.stokes_only) {
    m.terms().nonlinear = false;
    m.terms().forcing = false;
    m.terms().noise = false;
  }
  return m;
}

SpectralField make_initial(const RunConfig& cfg, GridPtr grid) {
  if (cfg.initial_mode == "zero" || cfg.initial_vnorm == 0.0) return SpectralField(grid);
  if (cfg.initial_mode == "taylor_green") return taylor_green(grid, cfg.initial_vnorm);
  if (cfg.initial_mode == "snapshot") {
    auto fields = read_snapshot(cfg.initial_snapshot, grid);
    return std::move(fields.at(0));
  }
  return random_divfree(grid, cfg.initial_seed, cfg.initial_vnorm);
}

StepperConfig make_stepper_config(const RunConfig& cfg) {
  StepperConfig sc;
  sc.scheme = cfg.scheme;
  sc.dt = cfg.dt;
  sc.t0 = cfg.t0;
  sc.t1 = cfg.t1;
  sc.snapshot_stride = cfg.stride;
  sc.tail_thresholds = cfg.tails;
  sc.record_weak_residual = cfg.weak_residual;
  return sc;
}

namespace {

NoiseConfig make_noise_config(const RunConfig& cfg) {
  return NoiseConfig{cfg.noise_seed, cfg.noise_gamma, cfg.noise_dt, cfg.noise_horizon,
                     cfg.noise_init};
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + p.string());
  f << body;
}

struct Reporter {
  RunConfig cfg;
  ExperimentKind kind;
  fs::path dir;
  ojson monitors = ojson::object();
  ojson extra = ojson::object();
  std::string ledger_hash_hex;

  void monitor(const std::string& name, bool pass, ojson detail = ojson::object()) {
    detail["pass"] = pass;
    monitors[name] = std::move(detail);
  }

  bool all_pass() const {
    for (const auto& [k, v] : monitors.items())
      if (!v.at("pass").get<bool>()) return false;
    return true;
  }

  ExperimentResult finalize() {
    ojson s;
    s["experiment"] = to_string(kind);
    s["config_hash"] = cfg.hash();
    s["seed"] = cfg.noise_seed;
    s["ledger_hash"] = ledger_hash_hex;
    s["monitors"] = monitors;
    for (auto& [k, v] : extra.items()) s[k] = v;
    const bool pass = all_pass();
    s["pass"] = pass;
    const fs::path p = dir / "summary.json";
    write_text(p, s.dump(2) + "\n");
    return ExperimentResult{pass ? 0 : 1, pass, p.string()};
  }
};

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void export_ledger_files(const ConstantsLedger& lg, const fs::path& dir) {
  write_text(dir / "ledger.json", export_ledger_json(lg));
  write_text(dir / "ledger.txt", export_ledger_text(lg));
}

double dt_tolerance_pilot(const ModelParams& m, const StepperConfig& cfg, const PathFrame& frame,
                          const SpectralField& v0) {
  StepperConfig fine = cfg;
  fine.dt = cfg.dt / 2.0;
  fine.snapshot_stride = cfg.snapshot_stride * 2;
  Stepper coarse(m, cfg), half(m, fine);
  const TrajectoryRecord rc = coarse.integrate(v0, frame);
  const TrajectoryRecord rf = half.integrate(v0, frame);
  return measure_dt_tolerance(rc, rf);
}

ExperimentResult run_simulate(const RunConfig& cfg, Reporter& rep, const ModelParams& m,
                              const ConstantsLedger& lg) {
  const StepperConfig sc = make_stepper_config(cfg);
  NoiseRealization noise = NoiseRealization::make(make_noise_config(cfg));
  const bool use_noise = m.terms().noise && sobolev_norm(m.h(), 1.0) > 0.0;
  PathFrame frame{use_noise ? &noise.z : nullptr, 0.0};
  SpectralField v0 = make_initial(cfg, m.grid_ptr());

  Stepper st(m, sc);
  TrajectoryRecord rec = st.integrate(v0, frame);
  write_trajectory_csv(rec, (rep.dir / "series.csv").string());
  write_checkpoint((rep.dir / "final_state.cnsf").string(), *rec.final_state,
                   Checkpoint{sc.t1, cfg.noise_seed, cfg.hash()});

  const double div = divergence_max(*rec.final_state);
  const double scale0 = 1.0 + rec.norm_v.back();
  rep.monitor("divergence_free", div <= 1e-10 * scale0, {{"max_k_dot_u", div}});
  const double casym = conjugate_asymmetry(*rec.final_state);
  rep.monitor("conjugate_symmetry", casym <= 1e-12 * scale0, {{"max_asymmetry", casym}});

  if (cfg.stokes_only) {
    // pure Stokes flow decays mode-wise by e^{−ν|k|²t}; the slowest mode sets
    // the envelope, checked against the closed form for a λ₁ initial state
    const double expect =
        std::exp(-m.nu() * m.grid().lambda1() * (sc.t1 - sc.t0)) * rec.norm_grad_v.front();
    ojson d{{"expected_lower_bound", expect}, {"final", rec.norm_grad_v.back()}};
    rep.monitor("stokes_decay", rec.norm_grad_v.back() <= expect * (1.0 + 1e-9), std::move(d));
  }

  if (lg.kappa > 0.0) {
    const double tol_meas = dt_tolerance_pilot(m, sc, frame, v0);
    const double tol = 2.0 * tol_meas + 1e-12;
    const MonitorResult g = gronwall_monitor(rec, lg, tol);
    rep.monitor("gronwall",
                g.pass,
                {{"worst_slack", g.worst_slack},
                 {"worst_time", g.worst_time},
                 {"tolerance", tol},
                 {"measured_dt_gap", tol_meas},
                 {"violations", g.violations}});
  }
  rep.extra["final_norm_grad_v"] = rec.norm_grad_v.back();
  return rep.finalize();
}

ExperimentResult run_pullback(const RunConfig& cfg, Reporter& rep, const ModelParams& m,
                              const ConstantsLedger&) {
  StepperConfig sc = make_stepper_config(cfg);
  NoiseRealization noise = NoiseRealization::make(make_noise_config(cfg));
  SpectralField u0 = make_initial(cfg, m.grid_ptr());
  auto family = pullback_family(m, sc, noise, cfg.tau, cfg.horizons, {u0});

  ojson rows = ojson::array();
  bool all_finite = true;
  for (const auto& e : family) {
    rows.push_back({{"horizon", e.horizon}, {"terminal_grad_sq", e.terminal_grad_sq}});
    if (!std::isfinite(e.terminal_grad_sq)) all_finite = false;
  }
  rep.extra["family"] = rows;
  rep.monitor("all_states_finite", all_finite);

  TemperednessReport tr = ou_temperedness_check(noise.z, {0.1, 1.0, 10.0},
                                                std::min(cfg.noise_horizon, 10.0 / cfg.noise_gamma
                                                + 30.0));
  ojson ints = ojson::array();
  bool ints_finite = true;
  for (auto& [k, v] : tr.integrals) {
    ints.push_back({{"kappa", k}, {"integral", v}});
    if (!std::isfinite(v)) ints_finite = false;
  }
  rep.extra["temperedness"] =
      ojson{{"max_sublinear_ratio", tr.max_sublinear_ratio}, {"integrals", ints}};
  rep.monitor("temperedness_evidence_finite",
              ints_finite && std::isfinite(tr.max_sublinear_ratio));

  // largest-horizon leg as the CSV time series
  PullbackRun run = pullback_run(m, sc, noise, cfg.tau, cfg.horizons.back(), u0);
  write_trajectory_csv(run.record, (rep.dir / "series.csv").string());
  return rep.finalize();
}

ExperimentResult run_absorb(const RunConfig& cfg, Reporter& rep, const ModelParams& m,
                            const ConstantsLedger& lg) {
  StepperConfig sc = make_stepper_config(cfg);
  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < cfg.seeds; ++i) seeds.push_back(cfg.noise_seed + static_cast<unsigned>(i));
  AbsorbingReport ar = absorbing_experiment(m, sc, lg, seeds, make_noise_config(cfg), cfg.tau,
                                            cfg.initial_scales, cfg.horizons);
  std::string csv = "seed,initial_index,initial_grad_norm,horizon,terminal_grad_sq,r_v,absorbed,"
                    "entry_time,envelope_worst_ratio\n";
  char line[256];
  for (const auto& c : ar.cells) {
    std::snprintf(line, sizeof line, "%llu,%d,%.17g,%.17g,%.17g,%.17g,%d,%.17g,%.17g\n",
                  static_cast<unsigned long long>(c.seed), c.initial_index, c.initial_grad_norm,
                  c.horizon, c.terminal_grad_sq, c.r_v, c.absorbed ? 1 : 0, c.entry_time,
                  c.envelope_worst_ratio);
    csv += line;
  }
  write_text(rep.dir / "absorb.csv", csv);
  ojson rv = ojson::array();
  for (double r : ar.r_v_per_seed) rv.push_back(r);
  rep.extra["r_v_per_seed"] = rv;
  rep.monitor("all_families_absorb", ar.all_families_absorb);
  rep.monitor("entry_times_monotone", ar.entry_times_monotone);
  rep.monitor("uniform_envelope", ar.envelope_ok);
  return rep.finalize();
}

ExperimentResult run_flatten(const RunConfig& cfg, Reporter& rep, const ModelParams& m,
                             const ConstantsLedger& lg) {
  StepperConfig sc = make_stepper_config(cfg);
  NoiseRealization noise = NoiseRealization::make(make_noise_config(cfg));
  const double T = cfg.noise_horizon;
  AbsorbingEstimate est = absorbing_radius(m, lg, noise, cfg.tau, T);
  SpectralField u0 = random_divfree(m.grid_ptr(), cfg.initial_seed, std::sqrt(est.r_v));
  std::vector<double> thresholds = cfg.thresholds;
  if (thresholds.empty()) {
    for (int lam : m.grid().resolved_shells())
      if (lam > 0) thresholds.push_back(static_cast<double>(lam));
  }
  FlatteningReport fr = flattening_analysis(m, sc, lg, noise, cfg.tau, cfg.horizons.back(),
                                            thresholds, cfg.delta, u0);

  std::string csv =
      "lambda,lambda_next,resolved,tail_v,tail_u,noise_tail,i1,i2,i3,i4,i2_envelope,budget,"
      "below_delta\n";
  char line[320];
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  bool budget_ok = true;
  for (const auto& r : fr.rows) {
    std::snprintf(line, sizeof line,
                  "%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  r.lambda, r.lambda_next, r.resolved ? 1 : 0, r.tail_v, r.tail_u, r.noise_tail,
                  r.i1, r.i2, r.i3, r.i4, r.i2_envelope, r.budget, r.below_delta ? 1 : 0);
    csv += line;
    if (!r.resolved) continue;
    if (r.tail_u > prev * (1.0 + 1e-12)) monotone = false;
    prev = r.tail_u;
    if (r.tail_v * r.tail_v > r.budget * 1.10 + 1e-9) budget_ok = false;
  }
  write_text(rep.dir / "flatten.csv", csv);
  rep.extra["r_v"] = est.r_v;
  rep.extra["smallest_passing_lambda"] = fr.smallest_passing_lambda;
  rep.monitor("tails_monotone_in_lambda", monotone);
  rep.monitor("delta_reached", fr.smallest_passing_lambda > 0.0,
              {{"delta", cfg.delta}, {"lambda", fr.smallest_passing_lambda}});
  rep.monitor("tail_energy_budget", budget_ok);
  rep.monitor("entry_time_reached", fr.entry_ok);
  return rep.finalize();
}

ExperimentResult run_cauchy(const RunConfig& cfg, Reporter& rep, const ModelParams& m,
                            const ConstantsLedger&) {
  StepperConfig sc = make_stepper_config(cfg);
  NoiseRealization noise = NoiseRealization::make(make_noise_config(cfg));
  std::vector<SpectralField> initials;
  initials.push_back(random_divfree(m.grid_ptr(), cfg.initial_seed, cfg.initial_vnorm));
  initials.push_back(random_divfree(m.grid_ptr(), cfg.initial_seed + 1, cfg.initial_vnorm));
  CauchyReport cr = attractor_cauchy_test(m, sc, noise, cfg.tau, initials, cfg.horizons);

  std::string csv = "kind,index,horizon_lo,horizon_hi,gap\n";
  char line[200];
  for (std::size_t i = 0; i < cr.gap_horizon.size(); ++i)
    for (std::size_t j = 0; j < cr.gap_horizon[i].size(); ++j) {
      std::snprintf(line, sizeof line, "horizon,%zu,%.17g,%.17g,%.17g\n", i, cr.horizons[j],
                    cr.horizons[j + 1], cr.gap_horizon[i][j]);
      csv += line;
    }
  for (std::size_t j = 0; j < cr.gap_initial.size(); ++j) {
    std::snprintf(line, sizeof line, "initial,0,%.17g,%.17g,%.17g\n", cr.horizons[j],
                  cr.horizons[j], cr.gap_initial[j]);
    csv += line;
  }
  write_text(rep.dir / "cauchy.csv", csv);
  rep.extra["noise_floor"] = cr.noise_floor;
  rep.monitor("horizon_gaps_decreasing", cr.horizon_gaps_decreasing);
  rep.monitor("initial_gaps_decreasing", cr.initial_gaps_decreasing);
  bool at_floor = true;
  for (const auto& gaps : cr.gap_horizon)
    if (!gaps.empty() && gaps.back() > 10.0 * cr.noise_floor) at_floor = false;
  if (!cr.gap_initial.empty() && cr.gap_initial.back() > 10.0 * cr.noise_floor) at_floor = false;
  rep.monitor("gaps_reach_noise_floor", at_floor,
              {{"floor", cr.noise_floor},
               {"largest_horizon_gap",
                cr.gap_horizon.empty() || cr.gap_horizon[0].empty() ? 0.0
                                                                    : cr.gap_horizon[0].back()}});
  return rep.finalize();
}

ExperimentResult run_verify_calming(const RunConfig& cfg, Reporter& rep) {
  const CalmingVariant variants[] = {CalmingVariant::Z1, CalmingVariant::Z2, CalmingVariant::Z3,
                                     CalmingVariant::Z4};
  ojson blocks = ojson::object();
  bool all_ok = true;
  for (auto v : variants) {
    CalmingSpec spec(v, cfg.calming_eps);
    AxiomReport ar = verify_calming_axioms(spec, 100000, 10.0);
    blocks[to_string(v)] = ojson{{"lipschitz_ok", ar.lipschitz_ok},
                                 {"bounded_ok", ar.bounded_ok},
                                 {"residual_ok", ar.residual_ok},
                                 {"worst_lipschitz_ratio", ar.worst_lipschitz_ratio},
                                 {"worst_bound_excess", ar.worst_bound_excess},
                                 {"worst_residual_ratio", ar.worst_residual_ratio},
                                 {"sup_norm", spec.sup_norm()}};
    all_ok = all_ok && ar.all_ok();
    rep.monitor(to_string(v), ar.all_ok());
  }
  // negative control: the identity must fail boundedness
  CalmingSpec ident(CalmingVariant::Identity, cfg.calming_eps);
  AxiomReport ir = verify_calming_axioms(ident, 20000, 10.0);
  blocks["identity"] =
      ojson{{"bounded_ok", ir.bounded_ok}, {"lipschitz_ok", ir.lipschitz_ok}};
  rep.monitor("identity_unbounded", !ir.bounded_ok);
  rep.extra["variants"] = blocks;
  return rep.finalize();
}

ExperimentResult run_validate(const RunConfig& cfg, Reporter& rep, const ModelParams& m) {
  AssumptionReport ar = validate_assumptions(m, cfg.noise_horizon);
  ojson notes = ojson::array();
  for (const auto& n : ar.notes) notes.push_back(n);
  rep.extra["report"] = ojson{{"a1", ar.a1_ok},
                              {"a2", ar.a2_ok},
                              {"a3", ar.a3_ok},
                              {"kappa", ar.kappa},
                              {"m_eps", ar.m_eps},
                              {"a3_threshold", ar.a3_threshold},
                              {"a1_integral", ar.a1_integral},
                              {"a2_tail_value", ar.a2_tail_value},
                              {"notes", notes}};
  rep.monitor("a1", ar.a1_ok);
  rep.monitor("a2", ar.a2_ok);
  rep.monitor("a3", ar.a3_ok, {{"kappa", ar.kappa}, {"margin", ar.a3_threshold - ar.m_eps}});
  return rep.finalize();
}

}  // namespace

ExperimentResult run_experiment(const RunConfig& cfg, ExperimentKind kind,
                                const std::string& out_dir) {
  Reporter rep;
  rep.cfg = cfg;
  rep.kind = kind;
  rep.dir = out_dir;
  fs::create_directories(rep.dir);

  if (kind == ExperimentKind::VerifyCalming) {
    rep.ledger_hash_hex = "";
    return run_verify_calming(cfg, rep);
  }

  GridPtr grid = make_grid(cfg);
  ModelParams m = make_model(cfg, grid);
  ConstantsLedger lg = build_ledger(m);
  rep.ledger_hash_hex = hash_hex(ledger_hash(lg));
  export_ledger_files(lg, rep.dir);

  switch (kind) {
    case ExperimentKind::Simulate: return run_simulate(cfg, rep, m, lg);
    case ExperimentKind::Pullback: return run_pullback(cfg, rep, m, lg);
    case ExperimentKind::Absorb: return run_absorb(cfg, rep, m, lg);
    case ExperimentKind::Flatten: return run_flatten(cfg, rep, m, lg);
    case ExperimentKind::Cauchy: return run_cauchy(cfg, rep, m, lg);
    case ExperimentKind::Validate: return run_validate(cfg, rep, m);
    case ExperimentKind::VerifyCalming: break;
  }
  throw std::logic_error("unreachable experiment kind");
}

}  // namespace calmedns
