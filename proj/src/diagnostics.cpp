#include "calmedns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "calmedns/fields.hpp"

namespace calmedns {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const LedgerEntry* ConstantsLedger::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

double physical_lp_norm(const PhysicalField& u, double p) {
  const std::size_t n = u.grid().nodes();
  const double cell = u.grid().volume() / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a2 = u.comp(0)[i] * u.comp(0)[i] + u.comp(1)[i] * u.comp(1)[i] +
                      u.comp(2)[i] * u.comp(2)[i];
    acc += std::pow(a2, p / 2.0);
  }
  return std::pow(cell * acc, 1.0 / p);
}

namespace {

// Sampled grid Sobolev constants: C_a for ‖w‖_{L³} ≤ C_a ‖w‖^{1/2}‖∇w‖^{1/2},
// C_b for ‖∇×w‖_{L⁶} ≤ C_b ‖Aw‖, maximized over a seeded sweep of random
// divergence-free fields with three spectral decay scales, then doubled.
void measure_sobolev_constants(const ModelParams& m, double& c_a, double& c_b) {
  const GridPtr grid = m.grid_ptr();
  Transform tf(grid);
  PhysicalField nodes(grid);
  SpectralField curl_w(grid);
  double worst_a = 0.0, worst_b = 0.0;
  const double scales[] = {1.0, 2.0, 4.0};
  for (double sc : scales)
    for (std::uint64_t s = 1; s <= 64; ++s) {
      SpectralField w = random_divfree(grid, 777000 + s, 1.0, sc);
      const double l2 = sobolev_norm(w, 0.0);
      const double v = sobolev_norm(w, 1.0);
      const double a = sobolev_norm(w, 2.0);
      tf.to_physical(w, nodes);
      const double l3 = physical_lp_norm(nodes, 3.0);
      worst_a = std::max(worst_a, l3 / (std::sqrt(l2) * std::sqrt(v)));
      curl(w, curl_w);
      tf.to_physical(curl_w, nodes);
      const double l6 = physical_lp_norm(nodes, 6.0);
      worst_b = std::max(worst_b, l6 / a);
    }
  c_a = 2.0 * worst_a;
  c_b = 2.0 * worst_b;
}

}  // namespace

ConstantsLedger build_ledger(const ModelParams& m) {
  ConstantsLedger lg;
  lg.nu = m.nu();
  lg.gamma = m.gamma();
  lg.m_eps = m.m_eps();
  lg.h_l2 = m.h_l2();
  lg.h_v = m.h_v();
  lg.h_a = m.h_stokes();
  lg.kappa = m.kappa();
  const double nu = lg.nu;
  lg.beta_f = 8.0 / nu;
  lg.beta_z = 8.0 * (lg.m_eps * lg.m_eps * lg.h_v * lg.h_v + lg.gamma * lg.gamma * lg.h_l2 * lg.h_l2) / nu +
              8.0 * nu * lg.h_a * lg.h_a;
  measure_sobolev_constants(m, lg.c_sobolev_l3, lg.c_sobolev_l6);
  lg.c_dep = 1.5 * std::pow(nu, -1.0 / 3.0) *
             std::pow(lg.c_sobolev_l3 * lg.c_sobolev_l6, 4.0 / 3.0);
  lg.c_unif = std::max({1.0, lg.beta_f, lg.beta_z});
  lg.m1 = 2.0 * std::max({1.0, lg.h_v * lg.h_v, lg.beta_f, lg.beta_z});

  lg.entries.push_back(
      {"kappa", lg.kappa, "nu*lambda1 - 2*M_eps^2/nu",
       {"energy balance tested against Av; nonlinear term bounded by M_eps*||grad w||*||Av||",
        "Young split 2*M_eps*||grad v||*||Av|| <= (nu/2)||Av||^2 + (2*M_eps^2/nu)||grad v||^2",
        "Poincare ||Av||^2 >= lambda1*||grad v||^2 converts the remaining dissipation",
        "positive iff M_eps < nu*sqrt(lambda1/2)"}});
  lg.entries.push_back(
      {"beta_f", lg.beta_f, "8/nu",
       {"Young split 2*||f||*||Av|| <= (nu/8)||Av||^2 + (8/nu)||f||^2"}});
  lg.entries.push_back(
      {"beta_z", lg.beta_z,
       "8*(M_eps^2*||grad h||^2 + gamma^2*||h||^2)/nu + 8*nu*||Ah||^2",
       {"three noise-carrying sources tested against Av, nu/8 of ||Av||^2 each:",
        "2*M_eps*|z|*||grad h||*||Av|| <= (nu/8)||Av||^2 + (8*M_eps^2*||grad h||^2/nu)|z|^2",
        "2*gamma*|z|*||h||*||Av|| <= (nu/8)||Av||^2 + (8*gamma^2*||h||^2/nu)|z|^2",
        "2*nu*|z|*||Ah||*||Av|| <= (nu/8)||Av||^2 + (8*nu*||Ah||^2)|z|^2"}});
  lg.entries.push_back(
      {"c_sobolev_l3", lg.c_sobolev_l3, "2 * sampled sup ||w||_L3/(||w||^(1/2)||grad w||^(1/2))",
       {"grid norms, 192 seeded divergence-free samples over decay scales {1,2,4}",
        "safety factor 2 over the sampled supremum"}});
  lg.entries.push_back(
      {"c_sobolev_l6", lg.c_sobolev_l6, "2 * sampled sup ||curl w||_L6/||Aw||",
       {"grid norms, same seeded sweep", "safety factor 2 over the sampled supremum"}});
  lg.entries.push_back(
      {"c_dep", lg.c_dep, "(3/2)*nu^(-1/3)*(C_a*C_b)^(4/3)",
       {"difference equation tested against u_a - u_b",
        "|b(dzeta, u2, du)| <= C_a*C_b*||Au2||*||du||^(3/2)*||grad du||^(1/2) via Lipschitz-1 of zeta and Holder (3,6,2)",
        "Young with exponents (4/3,4) at weight nu/4 on ||grad du||^2",
        "|b(zeta(u1), du, du)| <= M_eps*||grad du||*||du|| <= (nu/4)||grad du||^2 + (M_eps^2/nu)||du||^2",
        "Poincare absorbs the leftover nu*||grad du||^2, leaving d/dt||du||^2 <= (c_dep*||Au2||^(4/3) - kappa)||du||^2"}});
  lg.entries.push_back(
      {"c_unif", lg.c_unif, "max(1, beta_f, beta_z)",
       {"uniform in-flight envelope: ||grad v(s)||^2 <= c_unif*e^{-kappa(s-tau)}*(1 + integral terms)",
        "valid once e^{-kappa t}||grad v(tau-t)||^2 <= 1 (horizon past the entry time)"}});
  lg.entries.push_back(
      {"m1", lg.m1, "2*max(1, ||grad h||^2, beta_f, beta_z)",
       {"||grad u||^2 <= 2||grad v||^2 + 2|z|^2*||grad h||^2 after the inverse transform",
        "integrated energy bound at the observation time with the entry-time normalization",
        "factor 2 distributes over the bracket terms"}});
  return lg;
}

std::string export_ledger_text(const ConstantsLedger& lg) {
  std::ostringstream os;
  os << "calmedns constants ledger\n";
  os << "nu=" << fmt(lg.nu) << " gamma=" << fmt(lg.gamma) << " M_eps=" << fmt(lg.m_eps) << "\n";
  os << "||h||=" << fmt(lg.h_l2) << " ||grad h||=" << fmt(lg.h_v) << " ||Ah||=" << fmt(lg.h_a)
     << "\n\n";
  for (const auto& e : lg.entries) {
    os << e.name << " = " << fmt(e.value) << "\n  formula: " << e.formula << "\n";
    for (const auto& c : e.chain) os << "    - " << c << "\n";
  }
  return os.str();
}

std::string export_ledger_json(const ConstantsLedger& lg) {
  std::ostringstream os;
  os << "{\n  \"parameters\": {\"nu\": " << fmt(lg.nu) << ", \"gamma\": " << fmt(lg.gamma)
     << ", \"m_eps\": " << fmt(lg.m_eps) << ", \"h_l2\": " << fmt(lg.h_l2)
     << ", \"h_v\": " << fmt(lg.h_v) << ", \"h_a\": " << fmt(lg.h_a) << "},\n";
  os << "  \"entries\": [\n";
  for (std::size_t i = 0; i < lg.entries.size(); ++i) {
    const auto& e = lg.entries[i];
    os << "    {\"name\": \"" << e.name << "\", \"value\": " << fmt(e.value)
       << ", \"formula\": \"" << e.formula << "\", \"chain\": [";
    for (std::size_t j = 0; j < e.chain.size(); ++j) {
      os << "\"" << e.chain[j] << "\"";
      if (j + 1 < e.chain.size()) os << ", ";
    }
    os << "]}";
    if (i + 1 < lg.entries.size()) os << ",";
    os << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t ledger_hash(const ConstantsLedger& lg) { return fnv1a(export_ledger_json(lg)); }

EnergyRow energy_record(const SpectralField& v, double t, double z, const ModelParams& m,
                        const std::vector<double>& tail_thresholds) {
  EnergyRow row;
  row.t = t;
  row.norm_v = sobolev_norm(v, 0.0);
  row.norm_grad_v = sobolev_norm(v, 1.0);
  row.norm_av = sobolev_norm(v, 2.0);
  row.z = z;
  row.norm_f = m.forcing().norm_l2(t);
  for (double lam : tail_thresholds) {
    SpectralField tail(v.grid_ptr());
    copy_into(v, tail);
    galerkin_tail(tail, lam);
    row.tails.push_back(sobolev_norm(tail, 1.0));
  }
  return row;
}

MonitorResult gronwall_monitor(const TrajectoryRecord& rec, const ConstantsLedger& lg,
                               double tolerance) {
  if (rec.size() < 2) throw std::invalid_argument("gronwall_monitor: need at least 2 records");
  MonitorResult res;
  res.tolerance = tolerance;
  res.worst_slack = -std::numeric_limits<double>::infinity();
  const double kappa = lg.kappa;
  double bound = rec.norm_grad_v[0] * rec.norm_grad_v[0];
  auto source = [&](std::size_t i) {
    return lg.beta_f * rec.norm_f[i] * rec.norm_f[i] + lg.beta_z * rec.z[i] * rec.z[i];
  };
  for (std::size_t i = 1; i < rec.size(); ++i) {
    const double dtp = rec.t[i] - rec.t[i - 1];
    const double damp = std::exp(-kappa * dtp);
    bound = damp * bound + 0.5 * dtp * (damp * source(i - 1) + source(i));
    const double lhs = rec.norm_grad_v[i] * rec.norm_grad_v[i];
    const double slack = lhs - bound;
    if (slack > res.worst_slack) {
      res.worst_slack = slack;
      res.worst_time = rec.t[i];
    }
    if (slack > tolerance) ++res.violations;
  }
  res.pass = res.violations == 0;
  return res;
}

MonitorResult energy_slope_monitor(const TrajectoryRecord& rec, const ConstantsLedger& lg,
                                   double tolerance) {
  if (rec.size() < 2) throw std::invalid_argument("energy_slope_monitor: need >= 2 records");
  MonitorResult res;
  res.tolerance = tolerance;
  res.worst_slack = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < rec.size(); ++i) {
    const double dtp = rec.t[i] - rec.t[i - 1];
    const double g0 = rec.norm_grad_v[i - 1] * rec.norm_grad_v[i - 1];
    const double g1 = rec.norm_grad_v[i] * rec.norm_grad_v[i];
    const double lhs = (g1 - g0) / dtp;
    const double rhs = -lg.kappa * g0 + lg.beta_f * rec.norm_f[i - 1] * rec.norm_f[i - 1] +
                       lg.beta_z * rec.z[i - 1] * rec.z[i - 1];
    const double slack = lhs - rhs;
    if (slack > res.worst_slack) {
      res.worst_slack = slack;
      res.worst_time = rec.t[i];
    }
    if (slack > tolerance) ++res.violations;
  }
  res.pass = res.violations == 0;
  return res;
}

double measure_dt_tolerance(const TrajectoryRecord& coarse, const TrajectoryRecord& fine) {
  double worst = 0.0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    while (j < fine.size() && fine.t[j] < coarse.t[i] - 1e-9) ++j;
    if (j >= fine.size()) break;
    if (std::abs(fine.t[j] - coarse.t[i]) > 1e-9) continue;
    const double gc = coarse.norm_grad_v[i] * coarse.norm_grad_v[i];
    const double gf = fine.norm_grad_v[j] * fine.norm_grad_v[j];
    worst = std::max(worst, std::abs(gc - gf));
  }
  return worst;
}

std::string trajectory_csv(const TrajectoryRecord& rec) {
  std::ostringstream os;
  os << "t,norm_v,norm_grad_v,norm_Av,z,norm_f";
  for (double lam : rec.tail_thresholds) os << ",tail_L" << fmt(lam);
  if (!rec.weak_residual.empty()) os << ",weak_residual";
  os << "\n";
  for (std::size_t i = 0; i < rec.size(); ++i) {
    os << fmt(rec.t[i]) << "," << fmt(rec.norm_v[i]) << "," << fmt(rec.norm_grad_v[i]) << ","
       << fmt(rec.norm_av[i]) << "," << fmt(rec.z[i]) << "," << fmt(rec.norm_f[i]);
    for (const auto& col : rec.tails) os << "," << fmt(col[i]);
    if (!rec.weak_residual.empty()) os << "," << fmt(rec.weak_residual[i]);
    os << "\n";
  }
  return os.str();
}

void write_trajectory_csv(const TrajectoryRecord& rec, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << trajectory_csv(rec);
}

TrajectoryRecord read_trajectory_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  TrajectoryRecord rec;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty csv: " + path);
  std::vector<std::string> headers;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) headers.push_back(tok);
  }
  bool has_wr = !headers.empty() && headers.back() == "weak_residual";
  std::size_t ntails = 0;
  for (const auto& htok : headers)
    if (htok.rfind("tail_L", 0) == 0) {
      rec.tail_thresholds.push_back(std::stod(htok.substr(6)));
      ++ntails;
    }
  rec.tails.assign(ntails, {});
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> vals;
    while (std::getline(ss, tok, ',')) vals.push_back(std::stod(tok));
    std::size_t c = 0;
    rec.t.push_back(vals[c++]);
    rec.norm_v.push_back(vals[c++]);
    rec.norm_grad_v.push_back(vals[c++]);
    rec.norm_av.push_back(vals[c++]);
    rec.z.push_back(vals[c++]);
    rec.norm_f.push_back(vals[c++]);
    for (std::size_t j = 0; j < ntails; ++j) rec.tails[j].push_back(vals[c++]);
    if (has_wr) rec.weak_residual.push_back(vals[c++]);
  }
  return rec;
}

}  // namespace calmedns
