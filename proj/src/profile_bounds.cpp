#include <algorithm>
#include <cmath>
#include <limits>

#include "clab/carleman.hpp"

namespace clab {

namespace {

ProfileBoundsReport radial_bounds(const PhaseWeightProfile& prof) {
  const auto& p = prof.params;
  const double a = p.a, eta = p.eta, tau0 = p.tau0;
  const double eN = std::exp(prof.phi1_norm);
  constexpr double tol = 1e-10;
  ProfileBoundsReport rep;
  rep.phi0p_lower_ok = rep.phi0p_upper_ok = rep.phi2_ok = true;
  rep.w_prime_lower_ok = rep.weight_condition_ok = true;
  const double h2M = std::pow(p.h, 2.0 * p.M);
  const std::size_t n = prof.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double r = prof.r(i);
    const bool small = prof.grid.jump ? i <= *prof.grid.jump : r <= a;
    const double pp = prof.phi0_prime[i];
    if (small) {
      const double base = tau0 / (r + 1.0);
      if (pp < base * (1.0 - tol)) rep.phi0p_lower_ok = false;
      if (pp > eN * base * (1.0 + tol)) rep.phi0p_upper_ok = false;
    } else {
      const double base = tau0 * std::pow(a + 1.0, eta) / std::pow(r + 1.0, 1.0 + eta);
      if (pp < base * (1.0 - tol) || pp > eN * base * (1.0 + tol)) rep.phi2_ok = false;
    }
    if (prof.w_prime[i] < std::pow(r + 1.0, -1.0 - eta) * (1.0 - tol)) rep.w_prime_lower_ok = false;
    if (prof.Wcal[i] < 0.5 * r * (1.0 - tol)) rep.weight_condition_ok = false;
    rep.w_sup = std::max(rep.w_sup, prof.w[i]);
    rep.C_w2 = std::max(rep.C_w2, prof.Wcal[i] * prof.w[i] * h2M * std::pow(r + 1.0, -1.0 - eta));
    rep.phi0_sup = std::max(rep.phi0_sup, std::abs(prof.phi0[i]));
  }
  rep.w_sup_bound = 2.0 * a * a * std::exp((2.0 / eta) * std::pow(a + 1.0, -eta));
  rep.C_w = rep.w_sup * h2M;
  const double rmax = prof.r(n - 1);
  rep.phi0_limit = prof.phi0[n - 1] + prof.phi0_prime[n - 1] * (rmax + 1.0) / eta;
  rep.phi0_bound = tau0 * eN * (std::log(a + 1.0) + 1.0 / eta);
  // log(a+1) ~ M log(1/h) + log a0 for small h.
  const double denom = p.M * std::log(1.0 / p.h) + std::log(p.a0 + 1.0) + 1.0 / eta;
  rep.C_phi0 = std::max(rep.phi0_sup, rep.phi0_limit) / denom;
  rep.pass = rep.phi0p_lower_ok && rep.phi0p_upper_ok && rep.phi2_ok && rep.w_prime_lower_ok &&
             rep.weight_condition_ok && rep.w_sup <= rep.w_sup_bound * (1.0 + tol) &&
             rep.phi0_limit <= rep.phi0_bound * (1.0 + tol);
  return rep;
}

ProfileBoundsReport line_bounds(const PhaseWeightProfile& prof) {
  const auto& p = prof.params;
  ProfileBoundsReport rep;
  rep.w_le_one = true;
  double min_log = std::numeric_limits<double>::infinity();
  const double log_dh = std::log(p.delta * p.h);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const double ax = std::abs(prof.r(i));
    rep.phi_sup = std::max(rep.phi_sup, std::abs(prof.phi[i]));
    if (prof.log_w[i] > 1e-12) rep.w_le_one = false;
    const double log_wp = prof.log_w[i] + std::log(prof.m[i]) - log_dh;
    min_log = std::min(min_log, log_wp + (1.0 + p.eta) * std::log1p(ax));
    // w^2/w' = W w, evaluated in log space to survive underflow of w.
    const double lw2 = std::log(prof.Wcal[i]) + prof.log_w[i] - (1.0 + p.eta) * std::log1p(ax);
    rep.C_w2_1d = std::max(rep.C_w2_1d, std::exp(lw2));
  }
  rep.C_exp = std::max(0.0, -p.h * min_log);
  rep.pass = rep.phi_sup <= p.tau0 * (1.0 + 1e-10) && rep.w_le_one;
  return rep;
}

}  // namespace

ProfileBoundsReport verify_profile_bounds(const PhaseWeightProfile& prof) {
  return prof.radial ? radial_bounds(prof) : line_bounds(prof);
}

}  // namespace clab
