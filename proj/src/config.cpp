#include "calmedns/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "calmedns/diagnostics.hpp"

namespace calmedns {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool parse_double(const std::string& v, double& out) {
  // accept simple fractions like 2/3
  const auto slash = v.find('/');
  try {
    std::size_t used = 0;
    if (slash != std::string::npos) {
      const double num = std::stod(v.substr(0, slash));
      const double den = std::stod(v.substr(slash + 1));
      if (den == 0.0) return false;
      out = num / den;
      return true;
    }
    out = std::stod(v, &used);
    return used == v.size();
  } catch (...) {
    return false;
  }
}

bool parse_u64(const std::string& v, std::uint64_t& out) {
  try {
    std::size_t used = 0;
    out = std::stoull(v, &used);
    return used == v.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& v, int& out) {
  try {
    std::size_t used = 0;
    out = std::stoi(v, &used);
    return used == v.size();
  } catch (...) {
    return false;
  }
}

bool parse_list(const std::string& v, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    double x;
    if (!parse_double(trim(tok), x)) return false;
    out.push_back(x);
  }
  return !out.empty();
}

bool parse_bool(const std::string& v, bool& out) {
  if (v == "true" || v == "1") { out = true; return true; }
  if (v == "false" || v == "0") { out = false; return true; }
  return false;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += fmt(xs[i]);
  }
  return s;
}

}  // namespace

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "calming.eps=" << fmt(calming_eps) << "\n"
     << "calming.variant=" << to_string(calming_variant) << "\n"
     << "diagnostics.tails=" << join(tails) << "\n"
     << "diagnostics.weak_residual=" << (weak_residual ? "true" : "false") << "\n"
     << "experiment.delta=" << fmt(delta) << "\n"
     << "experiment.horizons=" << join(horizons) << "\n"
     << "experiment.initial_scales=" << join(initial_scales) << "\n"
     << "experiment.seeds=" << seeds << "\n"
     << "experiment.tau=" << fmt(tau) << "\n"
     << "experiment.thresholds=" << join(thresholds) << "\n"
     << "forcing.amplitude=" << fmt(forcing_amplitude) << "\n"
     << "forcing.kind=" << forcing_kind << "\n"
     << "forcing.profile=" << forcing_profile << "\n"
     << "forcing.sigma=" << fmt(forcing_sigma) << "\n"
     << "grid.dealias=" << fmt(grid_dealias) << "\n"
     << "grid.n=" << grid_n << "\n"
     << "h.mode=" << h_mode << "\n"
     << "h.scale=" << fmt(h_scale) << "\n"
     << "initial.mode=" << initial_mode << "\n"
     << "initial.seed=" << initial_seed << "\n"
     << "initial.snapshot=" << initial_snapshot << "\n"
     << "initial.vnorm=" << fmt(initial_vnorm) << "\n"
     << "model.alpha=" << fmt(alpha) << "\n"
     << "model.lambda=" << fmt(lambda) << "\n"
     << "model.nu=" << fmt(nu) << "\n"
     << "model.stokes_only=" << (stokes_only ? "true" : "false") << "\n"
     << "noise.dt=" << fmt(noise_dt) << "\n"
     << "noise.gamma=" << fmt(noise_gamma) << "\n"
     << "noise.horizon=" << fmt(noise_horizon) << "\n"
     << "noise.init=" << (noise_init == OuInit::StationarySample ? "stationary" : "zero") << "\n"
     << "noise.seed=" << noise_seed << "\n"
     << "stepper.dt=" << fmt(dt) << "\n"
     << "stepper.scheme=" << to_string(scheme) << "\n"
     << "stepper.span=" << fmt(t0) << ":" << fmt(t1) << "\n"
     << "stepper.stride=" << stride << "\n";
  return os.str();
}

std::string RunConfig::hash() const {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical())));
  return buf;
}

ParseOutcome parse_config(const std::string& text) {
  ParseOutcome out;
  RunConfig cfg;
  auto err = [&](const std::string& msg) { out.errors.push_back(msg); };

  using Setter = std::function<void(const std::string&, const std::string&)>;
  std::map<std::string, Setter> keys;

  auto dbl = [&](double* dst, double lo, double hi, bool lo_open, const char* range_msg) {
    return [=, &out](const std::string& k, const std::string& v) {
      double x;
      if (!parse_double(v, x)) {
        out.errors.push_back(k + ": not a number: '" + v + "'");
        return;
      }
      const bool lo_ok = lo_open ? x > lo : x >= lo;
      if (!lo_ok || x > hi) {
        out.errors.push_back(k + ": value " + v + " out of range " + range_msg);
        return;
      }
      *dst = x;
    };
  };
  const double inf = std::numeric_limits<double>::infinity();

  keys["grid.n"] = [&](const std::string& k, const std::string& v) {
    int n;
    if (!parse_int(v, n) || n < 4 || n % 2 != 0)
      err(k + ": must be an even integer >= 4, got '" + v + "'");
    else
      cfg.grid_n = n;
  };
  keys["grid.dealias"] = dbl(&cfg.grid_dealias, 0.0, 1.0, true, "(0, 1]");
  keys["model.nu"] = dbl(&cfg.nu, 0.0, inf, true, "(0, inf)");
  keys["model.alpha"] = dbl(&cfg.alpha, 0.0, inf, false, "[0, inf); 0 selects nu*lambda1/2");
  keys["model.lambda"] = dbl(&cfg.lambda, 0.0, inf, false, "[0, inf); 0 selects the grid max");
  keys["model.stokes_only"] = [&](const std::string& k, const std::string& v) {
    bool b;
    if (!parse_bool(v, b)) err(k + ": expected true/false, got '" + v + "'");
    else cfg.stokes_only = b;
  };
  keys["calming.variant"] = [&](const std::string& k, const std::string& v) {
    if (v == "z1") cfg.calming_variant = CalmingVariant::Z1;
    else if (v == "z2") cfg.calming_variant = CalmingVariant::Z2;
    else if (v == "z3") cfg.calming_variant = CalmingVariant::Z3;
    else if (v == "z4") cfg.calming_variant = CalmingVariant::Z4;
    else if (v == "identity") cfg.calming_variant = CalmingVariant::Identity;
    else err(k + ": unknown variant '" + v + "' (valid: z1, z2, z3, z4, identity)");
  };
  keys["calming.eps"] = dbl(&cfg.calming_eps, 0.0, inf, true, "(0, inf)");
  keys["noise.seed"] = [&](const std::string& k, const std::string& v) {
    if (!parse_u64(v, cfg.noise_seed)) err(k + ": not a u64: '" + v + "'");
  };
  keys["noise.gamma"] = dbl(&cfg.noise_gamma, 0.0, inf, true, "(0, inf)");
  keys["noise.dt"] = dbl(&cfg.noise_dt, 0.0, inf, true, "(0, inf)");
  keys["noise.horizon"] = dbl(&cfg.noise_horizon, 0.0, inf, true, "(0, inf)");
  keys["noise.init"] = [&](const std::string& k, const std::string& v) {
    if (v == "stationary") cfg.noise_init = OuInit::StationarySample;
    else if (v == "zero") cfg.noise_init = OuInit::Zero;
    else err(k + ": unknown init '" + v + "' (valid: stationary, zero)");
  };
  keys["h.mode"] = [&](const std::string&, const std::string& v) { cfg.h_mode = v; };
  keys["h.scale"] = dbl(&cfg.h_scale, 0.0, inf, false, "[0, inf)");
  keys["forcing.kind"] = [&](const std::string& k, const std::string& v) {
    if (v == "zero" || v == "constant" || v == "exp_window") cfg.forcing_kind = v;
    else err(k + ": unknown kind '" + v + "' (valid: zero, constant, exp_window)");
  };
  keys["forcing.sigma"] = [&](const std::string& k, const std::string& v) {
    double x;
    if (!parse_double(v, x)) err(k + ": not a number: '" + v + "'");
    else cfg.forcing_sigma = x;
  };
  keys["forcing.amplitude"] = dbl(&cfg.forcing_amplitude, 0.0, inf, false, "[0, inf)");
  keys["forcing.profile"] = [&](const std::string&, const std::string& v) {
    cfg.forcing_profile = v;
  };
  keys["stepper.scheme"] = [&](const std::string& k, const std::string& v) {
    if (v == "exp_euler") cfg.scheme = Scheme::ExpEuler;
    else if (v == "etdrk2") cfg.scheme = Scheme::Etdrk2;
    else err(k + ": unknown scheme '" + v + "' (valid: exp_euler, etdrk2)");
  };
  keys["stepper.dt"] = dbl(&cfg.dt, 0.0, inf, true, "(0, inf)");
  keys["stepper.span"] = [&](const std::string& k, const std::string& v) {
    const auto colon = v.find(':');
    double a, b;
    if (colon == std::string::npos || !parse_double(trim(v.substr(0, colon)), a) ||
        !parse_double(trim(v.substr(colon + 1)), b) || b < a)
      err(k + ": expected 't0:t1' with t1 >= t0, got '" + v + "'");
    else {
      cfg.t0 = a;
      cfg.t1 = b;
    }
  };
  keys["stepper.stride"] = [&](const std::string& k, const std::string& v) {
    int n;
    if (!parse_int(v, n) || n < 1) err(k + ": must be a positive integer, got '" + v + "'");
    else cfg.stride = n;
  };
  keys["initial.mode"] = [&](const std::string& k, const std::string& v) {
    if (v == "random" || v == "taylor_green" || v == "zero" || v == "snapshot")
      cfg.initial_mode = v;
    else err(k + ": unknown mode '" + v + "' (valid: random, taylor_green, zero, snapshot)");
  };
  keys["initial.vnorm"] = dbl(&cfg.initial_vnorm, 0.0, inf, false, "[0, inf)");
  keys["initial.seed"] = [&](const std::string& k, const std::string& v) {
    if (!parse_u64(v, cfg.initial_seed)) err(k + ": not a u64: '" + v + "'");
  };
  keys["initial.snapshot"] = [&](const std::string&, const std::string& v) {
    cfg.initial_snapshot = v;
  };
  keys["experiment.tau"] = [&](const std::string& k, const std::string& v) {
    double x;
    if (!parse_double(v, x)) err(k + ": not a number: '" + v + "'");
    else cfg.tau = x;
  };
  auto list_key = [&](std::vector<double>* dst, bool increasing) {
    return [=, &out](const std::string& k, const std::string& v) {
      std::vector<double> xs;
      if (!parse_list(v, xs)) {
        out.errors.push_back(k + ": expected a comma-separated list of numbers, got '" + v + "'");
        return;
      }
      if (increasing)
        for (std::size_t i = 1; i < xs.size(); ++i)
          if (xs[i] <= xs[i - 1]) {
            out.errors.push_back(k + ": values must be strictly increasing");
            return;
          }
      *dst = xs;
    };
  };
  keys["experiment.horizons"] = list_key(&cfg.horizons, true);
  keys["experiment.initial_scales"] = list_key(&cfg.initial_scales, false);
  keys["experiment.thresholds"] = list_key(&cfg.thresholds, true);
  keys["experiment.delta"] = dbl(&cfg.delta, 0.0, inf, true, "(0, inf)");
  keys["experiment.seeds"] = [&](const std::string& k, const std::string& v) {
    int n;
    if (!parse_int(v, n) || n < 1) err(k + ": must be a positive integer, got '" + v + "'");
    else cfg.seeds = n;
  };
  keys["diagnostics.tails"] = list_key(&cfg.tails, true);
  keys["diagnostics.weak_residual"] = [&](const std::string& k, const std::string& v) {
    bool b;
    if (!parse_bool(v, b)) err(k + ": expected true/false, got '" + v + "'");
    else cfg.weak_residual = b;
  };

  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      err("line " + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto it = keys.find(key);
    if (it == keys.end()) {
      err("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
      continue;
    }
    it->second(key, val);
  }

  // cross-field validation
  if (cfg.alpha > 0.0 && !(cfg.alpha < cfg.nu))
    err("model.alpha: must lie in (0, nu*lambda1) = (0, " + fmt(cfg.nu) + ")");
  const double ratio = cfg.noise_dt / cfg.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0 - 1e-9)
    err("stepper.dt: must divide noise.dt (integer ratio >= 1) so z is defined at "
        "every step");
  const double span_steps = (cfg.t1 - cfg.t0) / cfg.dt;
  if (std::abs(span_steps - std::round(span_steps)) > 1e-6)
    err("stepper.span: length must be an integer multiple of stepper.dt");
  if (cfg.initial_mode == "snapshot" && cfg.initial_snapshot.empty())
    err("initial.snapshot: required when initial.mode = snapshot");

  if (out.errors.empty()) out.config = cfg;
  return out;
}

ParseOutcome parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    ParseOutcome out;
    out.errors.push_back("cannot open config file: " + path);
    return out;
  }
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace calmedns
