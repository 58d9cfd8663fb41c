#include "clab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "clab/error.hpp"

namespace clab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double japanese(double r) { return std::sqrt(1.0 + r * r); }

double smooth_bump(double t) {
  if (!(std::abs(t) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

// Uniform draw in [0, 1) from the top 53 bits; portable across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

void push_multiples(std::vector<double>& out, double step, double offset, double lo, double hi) {
  const double first = std::ceil((lo - offset) / step);
  for (double k = first;; k += 1.0) {
    const double x = offset + k * step;
    if (x >= hi) break;
    if (x > lo) out.push_back(x);
  }
}

}  // namespace

PotentialModel::PotentialModel(PotentialParams params, DimensionMode mode)
    : params_(std::move(params)), mode_(mode) {}

PotentialModel PotentialModel::free_zero(DimensionMode mode) { return {FreeZero{}, mode}; }

PotentialModel PotentialModel::compact_bump(double height, double lo, double hi,
                                            DimensionMode mode, BumpProfile profile) {
  if (!(hi > lo)) throw ArgumentError("compact_bump: need hi > lo");
  return {CompactBump{height, lo, hi, profile}, mode};
}

PotentialModel PotentialModel::sawtooth_holder(double alpha, double c, double tooth,
                                               EnvelopeFn m, DimensionMode mode) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("sawtooth_holder: alpha must lie in [0,1]");
  if (!(tooth > 0.0)) throw ArgumentError("sawtooth_holder: tooth width must be positive");
  return {SawtoothHolder{alpha, c, tooth, m}, mode};
}

PotentialModel PotentialModel::step_oscillation(double amplitude, double period,
                                                DimensionMode mode) {
  if (!(period > 0.0)) throw ArgumentError("step_oscillation: period must be positive");
  return {StepOscillation{amplitude, period}, mode};
}

PotentialModel PotentialModel::random_fourier(int modes, double amplitude, double k_max,
                                              std::uint64_t seed, DimensionMode mode) {
  if (modes < 1 || !(k_max > 0.0)) throw ArgumentError("random_fourier: need modes >= 1, k_max > 0");
  RandomFourier p{modes, amplitude, k_max, seed, {}, {}, {}};
  std::mt19937_64 rng(seed);
  for (int k = 0; k < modes; ++k) {
    p.coef.push_back(amplitude * (2.0 * uniform01(rng) - 1.0) / modes);
    p.freq.push_back(0.25 * k_max + 0.75 * k_max * uniform01(rng));
    p.phase.push_back(2.0 * std::numbers::pi * uniform01(rng));
  }
  return {std::move(p), mode};
}

PotentialModel PotentialModel::user_table(std::vector<double> r, std::vector<double> v,
                                          DimensionMode mode) {
  if (r.size() != v.size() || r.size() < 2)
    throw ArgumentError("user_table: need at least two (r, V) rows of equal length");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) throw ArgumentError("user_table: abscissae must be increasing");
  return {UserTable{std::move(r), std::move(v)}, mode};
}

PotentialModel PotentialModel::user_table_file(const std::string& path, DimensionMode mode) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("user_table: cannot open " + path);
  std::vector<double> r, v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b))
      throw ArgumentError("user_table: " + path + ":" + std::to_string(lineno) + ": expected two columns");
    r.push_back(a);
    v.push_back(b);
  }
  return user_table(std::move(r), std::move(v), mode);
}

PotentialModel PotentialModel::constant(double value, DimensionMode mode) {
  return {Constant{value}, mode};
}
PotentialModel PotentialModel::linear(double slope, double offset, DimensionMode mode) {
  return {Linear{slope, offset}, mode};
}
PotentialModel PotentialModel::power_decay(double c, double p, DimensionMode mode) {
  if (!(p >= 0.0)) throw ArgumentError("power_decay: exponent must be >= 0");
  return {PowerDecay{c, p}, mode};
}
PotentialModel PotentialModel::arctan_ramp(double amplitude, double scale, DimensionMode mode) {
  if (!(scale > 0.0)) throw ArgumentError("arctan_ramp: scale must be positive");
  return {ArctanRamp{amplitude, scale}, mode};
}
PotentialModel PotentialModel::bump_pair(double height, double center, double half_width,
                                         DimensionMode mode) {
  if (!(half_width > 0.0)) throw ArgumentError("bump_pair: half width must be positive");
  return {BumpPair{height, center, half_width}, mode};
}

double PotentialModel::raw(double x) const {
  return std::visit(
      overloaded{
          [](const FreeZero&) { return 0.0; },
          [&](const CompactBump& p) {
            if (x < p.lo || x > p.hi) return 0.0;
            if (p.profile == BumpProfile::box) return p.height;
            const double mid = 0.5 * (p.lo + p.hi), half = 0.5 * (p.hi - p.lo);
            return p.height * smooth_bump((x - mid) / half);
          },
          [&](const SawtoothHolder& p) {
            const double r = std::abs(x);
            const double amp = p.c * std::pow(japanese(r), -3.0) * std::pow(p.m(r), 2);
            const double frac = x / p.tooth - std::floor(x / p.tooth);
            if (p.alpha == 0.0) return frac < 0.5 ? amp : 0.0;
            const double d = p.tooth * std::min(frac, 1.0 - frac);
            return amp * std::pow(d, p.alpha);
          },
          [&](const StepOscillation& p) {
            const auto k = static_cast<long long>(std::floor(x / p.period));
            return (k % 2 == 0) ? p.amplitude : -p.amplitude;
          },
          [&](const RandomFourier& p) {
            double s = 0.0;
            for (std::size_t k = 0; k < p.coef.size(); ++k)
              s += p.coef[k] * std::cos(p.freq[k] * x + p.phase[k]);
            return s;
          },
          [&](const UserTable& p) {
            if (x <= p.r.front()) return p.v.front();
            if (x >= p.r.back()) return p.v.back();
            const auto it = std::upper_bound(p.r.begin(), p.r.end(), x);
            const auto j = static_cast<std::size_t>(it - p.r.begin());
            const double t = (x - p.r[j - 1]) / (p.r[j] - p.r[j - 1]);
            return (1.0 - t) * p.v[j - 1] + t * p.v[j];
          },
          [](const Constant& p) { return p.value; },
          [&](const Linear& p) { return p.slope * x + p.offset; },
          [&](const PowerDecay& p) { return p.c * std::pow(japanese(x), -p.p); },
          [&](const ArctanRamp& p) { return p.amplitude * std::atan(x / p.scale); },
          [&](const BumpPair& p) {
            const double t = (std::abs(x) - p.center) / p.half_width;
            return p.height * smooth_bump(t);
          },
      },
      params_);
}

double PotentialModel::eval(double x) const {
  if (mode_ == DimensionMode::radial && !(x > 0.0))
    throw DomainError("radial potential evaluated at r <= 0");
  if (!std::isfinite(x)) throw DomainError("potential evaluated at a non-finite point");
  return scale_ * raw(x);
}

double PotentialModel::eval(double x, int) const { return eval(x); }

std::vector<double> PotentialModel::breakpoints(double lo, double hi) const {
  std::vector<double> out;
  if (!(hi > lo)) return out;
  std::visit(overloaded{
                 [&](const CompactBump& p) {
                   for (double b : {p.lo, p.hi})
                     if (b > lo && b < hi) out.push_back(b);
                 },
                 [&](const SawtoothHolder& p) {
                   push_multiples(out, 0.5 * p.tooth, 0.0, lo, hi);
                   if (lo < 0.0 && hi > 0.0 && out.empty()) out.push_back(0.0);
                 },
                 [&](const StepOscillation& p) { push_multiples(out, p.period, 0.0, lo, hi); },
                 [&](const UserTable& p) {
                   for (double b : p.r)
                     if (b > lo && b < hi) out.push_back(b);
                 },
                 [&](const BumpPair& p) {
                   for (double s : {-1.0, 1.0})
                     for (double b : {p.center - p.half_width, p.center + p.half_width})
                       if (s * b > lo && s * b < hi) out.push_back(s * b);
                 },
                 [](const auto&) {},
             },
             params_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double PotentialModel::abs_bound() const {
  const double b = std::visit(
      overloaded{
          [](const FreeZero&) { return 0.0; },
          [](const CompactBump& p) { return std::abs(p.height); },
          [](const SawtoothHolder& p) {
            // m <= 1, <r>^{-3} <= 1 and dist <= tooth/2.
            return std::abs(p.c) * (p.alpha == 0.0 ? 1.0 : std::pow(0.5 * p.tooth, p.alpha));
          },
          [](const StepOscillation& p) { return std::abs(p.amplitude); },
          [](const RandomFourier& p) {
            double s = 0.0;
            for (double c : p.coef) s += std::abs(c);
            return s;
          },
          [](const UserTable& p) {
            double s = 0.0;
            for (double v : p.v) s = std::max(s, std::abs(v));
            return s;
          },
          [](const Constant& p) { return std::abs(p.value); },
          [](const Linear& p) {
            return p.slope == 0.0 ? std::abs(p.offset) : std::numeric_limits<double>::infinity();
          },
          [](const PowerDecay& p) { return std::abs(p.c); },
          [](const ArctanRamp& p) { return std::abs(p.amplitude) * 0.5 * std::numbers::pi; },
          [](const BumpPair& p) { return std::abs(p.height); },
      },
      params_);
  return std::abs(scale_) * b;
}

double PotentialModel::sup_bound() const { return std::max(0.0, abs_bound()); }

PotentialModel PotentialModel::scaled(double lambda) const {
  PotentialModel out = *this;
  out.scale_ *= lambda;
  return out;
}

std::string PotentialModel::family_name() const {
  return std::visit(overloaded{
                        [](const FreeZero&) { return std::string("free_zero"); },
                        [](const CompactBump&) { return std::string("compact_bump"); },
                        [](const SawtoothHolder&) { return std::string("sawtooth_holder"); },
                        [](const StepOscillation&) { return std::string("step_oscillation"); },
                        [](const RandomFourier&) { return std::string("random_fourier_nondecaying"); },
                        [](const UserTable&) { return std::string("user_table"); },
                        [](const Constant&) { return std::string("constant"); },
                        [](const Linear&) { return std::string("linear"); },
                        [](const PowerDecay&) { return std::string("power_decay"); },
                        [](const ArctanRamp&) { return std::string("arctan_ramp"); },
                        [](const BumpPair&) { return std::string("bump_pair"); },
                    },
                    params_);
}

bool PotentialModel::is_zero() const {
  return scale_ == 0.0 || std::holds_alternative<FreeZero>(params_);
}

}  // namespace clab
