#include "clab/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clab/error.hpp"
#include "clab/quadrature.hpp"

namespace clab {

namespace {

// log(e^L - 1) for L > 0.
double log_expm1(double L) { return L > 30.0 ? L + std::log1p(-std::exp(-L)) : std::log(std::expm1(L)); }

double log_floor_at_log1p(double L) {
  // floor = 1 / (1 + s L^2),  s = e^L - 1
  if (L == 0.0) return 0.0;
  const double log_s = log_expm1(L);
  const double log_sl2 = log_s + 2.0 * std::log(L);
  return log_sl2 < 0.0 ? -std::log1p(std::exp(log_sl2)) : -(log_sl2 + std::log1p(std::exp(-log_sl2)));
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double log1p_square_at_log1p(double L) {
  if (L < 300.0) {
    const double s = std::expm1(L);
    return std::log1p(s * s);
  }
  const double log_s = log_expm1(L);
  return 2.0 * log_s + std::log1p(std::exp(-2.0 * log_s));
}

EnvelopeFn EnvelopeFn::power_decay(double nu) {
  if (!(nu >= 0.0)) throw ArgumentError("power_decay envelope: nu must be >= 0");
  return {EnvelopeFamily::power_decay, nu};
}
EnvelopeFn EnvelopeFn::log_decay() { return {EnvelopeFamily::log_decay, 0.0}; }
EnvelopeFn EnvelopeFn::one_over_rlog2() { return {EnvelopeFamily::one_over_rlog2, 0.0}; }

EnvelopeFn EnvelopeFn::with_floor() const {
  EnvelopeFn out = *this;
  out.floored_ = true;
  return out;
}

std::string EnvelopeFn::name() const {
  std::string base;
  switch (family_) {
    case EnvelopeFamily::power_decay: base = "power_decay(" + std::to_string(nu_) + ")"; break;
    case EnvelopeFamily::log_decay: base = "log_decay"; break;
    case EnvelopeFamily::one_over_rlog2: base = "one_over_rlog2"; break;
  }
  return floored_ ? base + "+floor" : base;
}

double EnvelopeFn::raw(double r) const {
  switch (family_) {
    case EnvelopeFamily::power_decay: return std::pow(1.0 + r * r, -0.5 * nu_);
    case EnvelopeFamily::log_decay: return 1.0 / std::log(std::exp(1.0) + r);
    case EnvelopeFamily::one_over_rlog2: {
      const double l = std::log1p(r);
      return 1.0 / (1.0 + r * l * l);
    }
  }
  return 0.0;
}

double EnvelopeFn::operator()(double r) const {
  r = std::abs(r);
  const double m = raw(r);
  if (!floored_) return m;
  const double l = std::log1p(r);
  return std::max(m, 1.0 / (1.0 + r * l * l));
}

double EnvelopeFn::raw_log_at_log1p(double L) const {
  switch (family_) {
    case EnvelopeFamily::power_decay: return -0.5 * nu_ * log1p_square_at_log1p(L);
    case EnvelopeFamily::log_decay: {
      // log(e + s) = L + log(1 + (e - 1) e^{-L})
      const double log_es = L + std::log1p((std::exp(1.0) - 1.0) * std::exp(-L));
      return -std::log(log_es);
    }
    case EnvelopeFamily::one_over_rlog2: return log_floor_at_log1p(L);
  }
  return 0.0;
}

double EnvelopeFn::log_at_log1p(double L) const {
  const double v = raw_log_at_log1p(L);
  return floored_ ? std::max(v, log_floor_at_log1p(L)) : v;
}

bool EnvelopeFn::weighted_l2_integrable() const {
  // m^2 / <r>: power decay needs nu > 0; the log families decay like 1/(r log^2 r)
  // or faster.
  if (family_ == EnvelopeFamily::power_decay) return nu_ > 0.0 || floored_;
  return true;
}

bool EnvelopeFn::l1_integrable() const {
  if (floored_) return family_ == EnvelopeFamily::one_over_rlog2 ||
                       (family_ == EnvelopeFamily::power_decay && nu_ > 1.0);
  switch (family_) {
    case EnvelopeFamily::power_decay: return nu_ > 1.0;
    case EnvelopeFamily::log_decay: return false;
    case EnvelopeFamily::one_over_rlog2: return true;
  }
  return false;
}

double EnvelopeFn::l1_partial(double R) const {
  if (R <= 0.0) return 0.0;
  quad::Options opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-300;
  // Integrate in L = log(1 + s): smooth even when R is large.
  auto f = [&](double L) { return std::exp(log_at_log1p(L) + L); };
  return quad::adaptive(f, 0.0, std::log1p(R), opt).value;
}

double EnvelopeFn::l1_tail(double R) const {
  if (!l1_integrable()) return kInf;
  quad::Options opt;
  opt.rel_tol = 1e-13;
  opt.abs_tol = 1e-300;
  if (R <= 0.0) {
    return l1_partial(1.0) + quad::tail_log([&](double L) { return log_at_log1p(L); }, 1.0, opt).value;
  }
  return quad::tail_log([&](double L) { return log_at_log1p(L); }, R, opt).value;
}

double EnvelopeFn::l1_norm() const {
  if (!l1_integrable()) throw NumericError("envelope is not integrable on (0, inf)", kInf);
  return l1_tail(0.0);
}

namespace {

template <class LogIntegrand>
IntegrabilityReport integrability(LogIntegrand&& log_g, bool declared, double tail_tol) {
  IntegrabilityReport rep;
  rep.declared = declared;
  quad::Options opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-300;
  auto in_L = [&](double L) { return std::exp(log_g(L) + L); };
  double prev_R = 0.0, acc = 0.0;
  for (double R = 10.0; R <= 1.0e6 * 1.0000001; R *= 10.0) {
    acc += quad::adaptive(in_L, std::log1p(prev_R), std::log1p(R), opt).value;
    rep.radii.push_back(R);
    rep.partials.push_back(acc);
    prev_R = R;
  }
  try {
    quad::Options topt = opt;
    topt.max_intervals = 400;
    const double t = quad::tail_log(log_g, prev_R, topt).value;
    rep.tail = std::isfinite(t) ? t : kInf;
  } catch (const NumericError&) {
    rep.tail = kInf;
  }
  rep.converged = rep.tail < tail_tol;
  return rep;
}

}  // namespace

IntegrabilityReport check_m_condition(const EnvelopeFn& m, double tail_tol) {
  return integrability(
      [&](double L) { return 2.0 * m.log_at_log1p(L) - 0.5 * log1p_square_at_log1p(L); },
      m.weighted_l2_integrable(), tail_tol);
}

IntegrabilityReport check_m0_condition(const EnvelopeFn& m0, double tail_tol) {
  return integrability([&](double L) { return m0.log_at_log1p(L); }, m0.l1_integrable(),
                       tail_tol);
}

}  // namespace clab
