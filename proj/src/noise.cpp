#include "calmedns/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "calmedns/rng.hpp"

namespace calmedns {

namespace {

std::int64_t floor_div2(std::int64_t i) {
  return i >= 0 ? i / 2 : (i - 1) / 2;
}

std::int64_t snap_index(double t, double dt, bool outward_floor) {
  const double x = t / dt;
  return outward_floor ? static_cast<std::int64_t>(std::floor(x + 1e-9))
                       : static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

std::int64_t aligned_index(double t, double dt, const char* what) {
  const double x = t / dt;
  const auto i = static_cast<std::int64_t>(std::llround(x));
  if (std::abs(x - static_cast<double>(i)) > 1e-6)
    throw std::invalid_argument(std::string(what) + ": time not aligned to the path grid");
  return i;
}

}  // namespace

double WienerPath::dt() const { return base_dt_ / static_cast<double>(std::int64_t(1) << level_); }

WienerPath WienerPath::sample(std::uint64_t seed, double t_min, double t_max, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("WienerPath: dt must be positive");
  if (!(t_min <= 0.0 && t_max >= 0.0))
    throw std::invalid_argument("WienerPath: grid must contain t = 0");
  WienerPath p;
  p.seed_ = seed;
  p.base_dt_ = dt;
  p.level_ = 0;
  p.offset_ = 0;
  p.i_min_ = snap_index(t_min, dt, true);
  p.i_max_ = snap_index(t_max, dt, false);
  if (p.i_max_ <= p.i_min_) throw std::invalid_argument("WienerPath: empty grid");
  p.build_values();
  return p;
}

WienerPath WienerPath::flat(double t_min, double t_max, double dt) {
  WienerPath p = sample(0, t_min, t_max, dt);
  p.flat_ = true;
  p.build_values();
  return p;
}

double WienerPath::raw_increment(std::int64_t abs_index) const {
  if (flat_) return 0.0;
  if (level_ == 0)
    return std::sqrt(base_dt_) *
           rng::normal(seed_, rng::kWienerBase, static_cast<std::uint64_t>(abs_index));
  // bridge split of the parent increment one level up
  const std::int64_t parent = floor_div2(abs_index);
  WienerPath coarse;
  coarse.seed_ = seed_;
  coarse.flat_ = flat_;
  coarse.base_dt_ = base_dt_;
  coarse.level_ = level_ - 1;
  const double parent_dt = base_dt_ / static_cast<double>(std::int64_t(1) << (level_ - 1));
  const double half = coarse.raw_increment(parent) / 2.0;
  const double xi = std::sqrt(parent_dt / 4.0) *
                    rng::normal(seed_, rng::kWienerBase + static_cast<std::uint64_t>(level_),
                                static_cast<std::uint64_t>(parent));
  return (abs_index % 2 == 0) ? half + xi : half - xi;
}

double WienerPath::increment(std::int64_t i) const { return raw_increment(i + offset_); }

void WienerPath::build_values() {
  values_.assign(static_cast<std::size_t>(i_max_ - i_min_ + 1), 0.0);
  // cumulative sums anchored at local time 0
  const std::int64_t zero = -i_min_;
  values_[zero] = 0.0;
  for (std::int64_t i = 0; i < i_max_; ++i)
    values_[zero + i + 1] = values_[zero + i] + increment(i);
  for (std::int64_t i = 0; i > i_min_; --i)
    values_[zero + i - 1] = values_[zero + i] - increment(i - 1);
}

double WienerPath::value(std::int64_t i) const {
  if (i < i_min_ || i > i_max_)
    throw InsufficientHorizon("WienerPath: index outside stored range");
  return values_[static_cast<std::size_t>(i - i_min_)];
}

double WienerPath::value_at_time(double t) const {
  return value(aligned_index(t, dt(), "WienerPath"));
}

WienerPath WienerPath::shifted(double s) const {
  const std::int64_t j = aligned_index(s, dt(), "WienerPath::shifted");
  if (j < i_min_ || j > i_max_)
    throw InsufficientHorizon("WienerPath::shifted: shift outside stored range");
  WienerPath p;
  p.seed_ = seed_;
  p.flat_ = flat_;
  p.base_dt_ = base_dt_;
  p.level_ = level_;
  p.offset_ = offset_ + j;
  p.i_min_ = i_min_ - j;
  p.i_max_ = i_max_ - j;
  p.build_values();
  return p;
}

WienerPath WienerPath::refined() const {
  WienerPath p;
  p.seed_ = seed_;
  p.flat_ = flat_;
  p.base_dt_ = base_dt_;
  p.level_ = level_ + 1;
  p.offset_ = 2 * offset_;
  p.i_min_ = 2 * i_min_;
  p.i_max_ = 2 * i_max_;
  p.build_values();
  return p;
}

OUPath OUPath::from_wiener(const WienerPath& w, double gamma, OuInit init) {
  if (!(gamma > 0.0)) throw std::invalid_argument("OUPath: gamma must be positive");
  OUPath z;
  z.gamma_ = gamma;
  z.dt_ = w.dt();
  z.i_min_ = w.i_min();
  z.i_max_ = w.i_max();
  z.values_.assign(static_cast<std::size_t>(z.i_max_ - z.i_min_ + 1), 0.0);
  double z0 = 0.0;
  if (init == OuInit::StationarySample)
    z0 = std::sqrt(1.0 / (2.0 * gamma)) *
         rng::normal(w.seed(), rng::kOuInit, static_cast<std::uint64_t>(w.i_min()));
  const double a = std::exp(-gamma * z.dt_);
  z.values_[0] = z0;
  for (std::int64_t i = z.i_min_; i < z.i_max_; ++i) {
    const double cur = z.values_[static_cast<std::size_t>(i - z.i_min_)];
    z.values_[static_cast<std::size_t>(i + 1 - z.i_min_)] = a * cur + a * w.increment(i);
  }
  return z;
}

OUPath OUPath::constant(double value, double t_min, double t_max, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("OUPath: dt must be positive");
  OUPath z;
  z.gamma_ = 1.0;
  z.dt_ = dt;
  z.i_min_ = snap_index(t_min, dt, true);
  z.i_max_ = snap_index(t_max, dt, false);
  z.values_.assign(static_cast<std::size_t>(z.i_max_ - z.i_min_ + 1), value);
  return z;
}

double OUPath::value(std::int64_t i) const {
  if (i < i_min_ || i > i_max_)
    throw InsufficientHorizon("OUPath: index outside stored range");
  return values_[static_cast<std::size_t>(i - i_min_)];
}

double OUPath::value_at_time(double t) const { return value(aligned_index(t, dt_, "OUPath")); }

double OUPath::cell_value(double t) const {
  const auto i = static_cast<std::int64_t>(std::floor(t / dt_ + 1e-9));
  return value(i < i_max_ ? i : i_max_);
}

double OUPath::truncation_factor(double t) const {
  return std::exp(-gamma_ * (t - t_min()));
}

double exp_weighted_sq_integral(const OUPath& z, double kappa, double T) {
  const auto i0 = static_cast<std::int64_t>(std::llround(-T / z.dt()));
  if (i0 < z.i_min() || z.i_max() < 0)
    throw InsufficientHorizon("exp_weighted_sq_integral: horizon not covered");
  double sum = 0.0;
  double prev = std::exp(kappa * (i0 * z.dt())) * z.value(i0) * z.value(i0);
  for (std::int64_t i = i0 + 1; i <= 0; ++i) {
    const double cur = std::exp(kappa * (i * z.dt())) * z.value(i) * z.value(i);
    sum += 0.5 * (prev + cur) * z.dt();
    prev = cur;
  }
  return sum;
}

TemperednessReport ou_temperedness_check(const OUPath& z, const std::vector<double>& kappas,
                                         double T) {
  if (T < 10.0 / z.gamma())
    throw std::invalid_argument("ou_temperedness_check: horizon shorter than 10/gamma");
  if (-T < z.t_min() - 1e-9)
    throw InsufficientHorizon("ou_temperedness_check: horizon not covered by path");
  TemperednessReport rep;
  rep.horizon = T;
  const auto i0 = static_cast<std::int64_t>(std::llround(-T / z.dt()));
  for (std::int64_t i = i0; i <= std::min<std::int64_t>(0, z.i_max()); ++i) {
    const double t = i * z.dt();
    const double ratio = std::abs(z.value(i)) / (1.0 + std::abs(t));
    if (ratio > rep.max_sublinear_ratio) rep.max_sublinear_ratio = ratio;
  }
  for (double k : kappas) rep.integrals.emplace_back(k, exp_weighted_sq_integral(z, k, T));
  return rep;
}

}  // namespace calmedns
