#include "clab/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clab/error.hpp"

namespace clab {

using cd = std::complex<double>;

namespace {

void require_same_grid(const PhaseWeightProfile& prof, const SmoothedPotential& sp) {
  if (prof.size() != sp.size())
    throw ArgumentError("profile and smoothed potential grids differ in size");
  for (std::size_t i = 0; i < prof.size(); ++i)
    if (prof.r(i) != sp.r[i])
      throw ArgumentError("profile and smoothed potential grids differ at index " + std::to_string(i));
}

double target_of(HypothesisCase c, double E, double E_infty) {
  return c == HypothesisCase::Linfty_decay ? 0.5 * E : 0.5 * (E - E_infty);
}

double uniform_step(std::span<const double> x) {
  if (x.size() < 3) throw ArgumentError("uniform grid needs at least 3 nodes");
  const double dx = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i] - x[i - 1] - dx) > 1e-8 * dx) throw ArgumentError("grid is not uniform");
  return dx;
}

double trapezoid(const std::vector<double>& f, double dx) {
  if (f.empty()) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

}  // namespace

ABGrid compute_AB(const PhaseWeightProfile& prof, const SmoothedPotential& sp, double E) {
  require_same_grid(prof, sp);
  const double h = prof.params.h;
  const std::size_t n = prof.size();
  ABGrid out;
  out.A.resize(n);
  out.B.resize(n);
  out.A_over_wp.resize(n);
  out.B_over_wp.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p1 = prof.phi_prime[i], p2 = prof.phi_second[i], W = prof.Wcal[i];
    const double X = std::abs(sp.Rh[i]) / h + p2;
    out.A_over_wp[i] = E + p1 * p1 - sp.Vh[i] + W * (2.0 * p1 * p2 - sp.Vh_prime[i]);
    out.B_over_wp[i] = W * W * X * X / (1.0 + 4.0 * p1 * W / h);
    out.A[i] = prof.w_prime[i] * out.A_over_wp[i];
    out.B[i] = prof.w_prime[i] * out.B_over_wp[i];
  }
  return out;
}

CarlemanReport key_margin(const PhaseWeightProfile& prof, const SmoothedPotential& sp, double E,
                          double E_infty, double K) {
  const auto ab = compute_AB(prof, sp, E);
  const double h = prof.params.h;
  const std::size_t n = prof.size();
  CarlemanReport rep;
  rep.r.assign(prof.grid.x.begin(), prof.grid.x.end());
  rep.A = ab.A;
  rep.B = ab.B;
  rep.target = target_of(prof.params.condition, E, E_infty);
  rep.margin.resize(n);
  rep.margin_normalized.resize(n);
  rep.bracket.resize(n);
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.min_chain_slack = std::numeric_limits<double>::infinity();
  rep.chain_algebra_ok = rep.chain_target_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double p1 = prof.phi_prime[i], W = prof.Wcal[i], Phi = prof.Phi[i];
    const double Rh = sp.Rh[i];
    const double cap = std::min(W, h / (4.0 * p1));
    const double br = E + p1 * p1 * (1.0 + 2.0 * W * Phi - K * W * Phi * Phi * cap) - sp.Vh[i] -
                      W * sp.Vh_prime[i] - K * W * Rh * Rh * cap / (h * h);
    const double lhs = ab.A_over_wp[i] - 0.5 * K * ab.B_over_wp[i];
    const double mn = lhs - rep.target;
    rep.bracket[i] = br;
    rep.margin_normalized[i] = mn;
    rep.margin[i] = prof.w_prime[i] * mn;
    const double scale = E + p1 * p1 * (1.0 + std::abs(2.0 * W * Phi)) + std::abs(sp.Vh[i]) +
                         std::abs(W * sp.Vh_prime[i]) + 0.5 * K * ab.B_over_wp[i];
    const double slack = lhs - br;
    rep.min_chain_slack = std::min(rep.min_chain_slack, slack / scale);
    if (slack < -1e-12 * scale) rep.chain_algebra_ok = false;
    if (br < rep.target) rep.chain_target_ok = false;
    if (mn < rep.min_margin) {
      rep.min_margin = mn;
      rep.argmin = i;
    }
  }
  if (n > 0) {
    rep.argmin_r = prof.r(rep.argmin);
    rep.argmin_in_psi_support = prof.psi[rep.argmin] > 0.0;
  }
  rep.pass = n > 0 && rep.min_margin >= 0.0;
  return rep;
}

double FieldSamples::w(std::size_t i) const { return std::exp(log_w[i] - log_w_ref); }
double FieldSamples::w_prime(std::size_t i) const { return w(i) / Wcal[i]; }

FieldSamples sample_fields(const ConstructionParams& p, const EnvelopeFn& m,
                           const PotentialModel& V, const ClassCertificate& cert,
                           const MollifierKernel& chi, std::span<const double> x,
                           std::size_t n_construction) {
  if (x.empty()) throw ArgumentError("sample_fields: no nodes");
  const bool radial = p.condition != HypothesisCase::holder_1d;
  Grid base = radial ? construction_grid_radial(p, n_construction)
                     : construction_grid_1d(n_construction);
  std::vector<double> nodes = base.x;
  for (double v : x) {
    if (radial && !(v > 0.0)) throw DomainError("sample_fields: radial nodes must be positive");
    if (radial && v == p.a) throw ArgumentError("sample_fields: node coincides with a");
    nodes.push_back(v);
  }
  if (!radial) nodes.push_back(0.0);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  Grid merged;
  merged.x = nodes;
  if (radial) {
    const auto it = std::lower_bound(merged.x.begin(), merged.x.end(), p.a);
    const auto ja = static_cast<std::size_t>(it - merged.x.begin());
    merged.x.insert(merged.x.begin() + static_cast<std::ptrdiff_t>(ja), p.a);
    merged.jump = ja;
  }
  const auto prof = radial ? integrate_profiles_radial(p, m, merged)
                           : integrate_profiles_1d(p, m, merged);

  FieldSamples f;
  f.condition = p.condition;
  f.h = p.h;
  if (radial) f.jump = p.a;
  f.x.assign(x.begin(), x.end());
  const std::size_t n = x.size();
  f.phi.resize(n);
  f.phi_prime.resize(n);
  f.phi_second.resize(n);
  f.log_w.resize(n);
  f.Wcal.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto it = std::lower_bound(merged.x.begin(), merged.x.end(), x[i]);
    auto j = static_cast<std::size_t>(it - merged.x.begin());
    f.phi[i] = prof.phi[j];
    f.phi_prime[i] = prof.phi_prime[j];
    f.phi_second[i] = prof.phi_second[j];
    f.log_w[i] = prof.log_w[j];
    f.Wcal[i] = prof.Wcal[j];
  }
  f.log_w_ref = *std::max_element(f.log_w.begin(), f.log_w.end());
  const auto sp = build_smoothed(V, p.h, p.rho, p.condition, cert.delta_V, chi, x);
  f.V = sp.V;
  f.Vh = sp.Vh;
  f.Vh_prime = sp.Vh_prime;
  f.Rh = sp.Rh;
  return f;
}

std::vector<double> energy_functional(const TestFunction& u, const FieldSamples& f, double E,
                                      double mode_lambda) {
  if (u.size() != f.size()) throw ArgumentError("energy_functional: grid size mismatch");
  const double h = f.h;
  std::vector<double> F(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = f.x[i];
    const double cent = mode_lambda != 0.0 ? h * h * mode_lambda / (r * r) : 0.0;
    const double p1 = f.phi_prime[i];
    F[i] = h * h * std::norm(u.du[i]) - (cent + f.Vh[i] - p1 * p1 - E) * std::norm(u.u[i]);
  }
  return F;
}

std::vector<cd> conjugated_apply(std::span<const cd> u, const FieldSamples& f, double E, double eps,
                                 int sign, double mode_lambda) {
  if (u.size() != f.size()) throw ArgumentError("conjugated_apply: grid size mismatch");
  if (sign != 1 && sign != -1) throw ArgumentError("conjugated_apply: sign must be +1 or -1");
  const double dx = uniform_step(f.x);
  const double h = f.h;
  const std::size_t n = u.size();
  std::vector<cd> out(n, cd(0.0));
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double r = f.x[i];
    const cd du = (u[i + 1] - u[i - 1]) / (2.0 * dx);
    const cd d2u = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (dx * dx);
    const double cent = mode_lambda != 0.0 ? h * h * mode_lambda / (r * r) : 0.0;
    const double p1 = f.phi_prime[i];
    const cd pot(cent + f.V[i] - p1 * p1 + h * f.phi_second[i] - E, sign * eps);
    out[i] = -h * h * d2u + 2.0 * h * p1 * du + pot * u[i];
  }
  return out;
}

IdentityResidual wF_derivative_identity(const TestFunction& u, const FieldSamples& f, double E,
                                        double eps, int sign, double mode_lambda) {
  const std::size_t n = u.size();
  const double dx = uniform_step(f.x);
  const double h = f.h;
  const auto F = energy_functional(u, f, E, mode_lambda);
  const auto Pu = conjugated_apply(u.u, f, E, eps, sign, mode_lambda);
  std::vector<double> wF(n);
  for (std::size_t i = 0; i < n; ++i) wF[i] = f.w(i) * F[i];
  IdentityResidual res;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double r = f.x[i];
    if (f.x[i - 1] < f.jump && f.jump < f.x[i + 1]) continue;
    const double fd = (wF[i + 1] - wF[i - 1]) / (2.0 * dx);
    const double w = f.w(i), wp = f.w_prime(i);
    const double p1 = f.phi_prime[i], p2 = f.phi_second[i];
    const cd uu = u.u[i], du = u.du[i];
    const cd u_du = uu * std::conj(du);
    const double cent3 = mode_lambda != 0.0 ? 2.0 * h * h * mode_lambda / (r * r * r) : 0.0;
    const double t0 = wp * F[i];
    const double t1 = -2.0 * w * std::real(Pu[i] * std::conj(du));
    const double t2 = -sign * 2.0 * eps * w * std::imag(u_du);
    const double t3 = 4.0 * h * p1 * w * std::norm(du);
    const double t4 = 2.0 * w * (f.Rh[i] + h * p2) * std::real(u_du);
    const double t5 = w * (cent3 - f.Vh_prime[i] + 2.0 * p1 * p2) * std::norm(uu);
    const double rhs = t0 + t1 + t2 + t3 + t4 + t5;
    res.max_abs = std::max(res.max_abs, std::abs(fd - rhs));
    res.scale = std::max(res.scale, std::abs(t0) + std::abs(t1) + std::abs(t2) + std::abs(t3) +
                                        std::abs(t4) + std::abs(t5));
  }
  res.residual = res.scale > 0.0 ? res.max_abs / res.scale : 0.0;
  return res;
}

double integration_by_parts_residual(const TestFunction& u, const FieldSamples& f) {
  const double dx = uniform_step(f.x);
  const std::size_t n = u.size();
  std::vector<double> left(n, 0.0), right(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const cd du = (u.u[i + 1] - u.u[i - 1]) / (2.0 * dx);
    left[i] = f.h * f.phi_second[i] * std::norm(u.u[i]);
    right[i] = -2.0 * f.h * f.phi_prime[i] * std::real(du * std::conj(u.u[i]));
  }
  const double L = trapezoid(left, dx), R = trapezoid(right, dx);
  const double scale = std::max(std::abs(L), std::abs(R));
  return scale > 0.0 ? std::abs(L - R) / scale : 0.0;
}

IntegratedReport integrated_carleman_check(std::span<const TestFunction> samples,
                                           const FieldSamples& f, double E, double E_infty,
                                           double eps, int sign, double eta, double mode_lambda) {
  const double dx = uniform_step(f.x);
  const double h = f.h;
  const double target = target_of(f.condition, E, E_infty);
  const std::size_t n = f.size();
  IntegratedReport rep;
  rep.all_hold = true;
  rep.samples.resize(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& u = samples[k];
    if (u.size() != n) throw ArgumentError("integrated_carleman_check: grid size mismatch");
    const auto Pu = conjugated_apply(u.u, f, E, eps, sign, mode_lambda);
    std::vector<double> lhs(n), rP(n), ru(n), dl(n), dr(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r1 = 1.0 + std::abs(f.x[i]);
      const double uu = std::norm(u.u[i]), hdu = h * h * std::norm(u.du[i]);
      const double pu = std::norm(Pu[i]);
      lhs[i] = std::pow(r1, -1.0 - eta) * (uu + hdu);
      rP[i] = std::pow(r1, 1.0 + eta) * pu;
      ru[i] = uu;
      const double w = f.w(i), wp = f.w_prime(i);
      dl[i] = 3.0 * w * f.Wcal[i] / (h * h) * pu;
      dr[i] = wp * hdu / 3.0 + target * wp * uu -
              sign * 2.0 * eps * w * std::imag(u.u[i] * std::conj(u.du[i]));
    }
    IntegratedSample s;
    s.lhs = trapezoid(lhs, dx);
    s.rhs_P = trapezoid(rP, dx);
    s.rhs_u = trapezoid(ru, dx);
    const double denom = s.rhs_P + eps * s.rhs_u;
    s.multiplier = denom > 0.0 ? s.lhs / denom : std::numeric_limits<double>::infinity();
    const double L = trapezoid(dl, dx), R = trapezoid(dr, dx);
    const double scale = std::max(std::abs(L), std::abs(R));
    s.derivative_gap = scale > 0.0 ? (L - R) / scale : 0.0;
    s.derivative_bound_holds = L - R >= -1e-6 * scale;
    rep.all_hold = rep.all_hold && s.derivative_bound_holds;
    rep.max_multiplier = std::max(rep.max_multiplier, s.multiplier);
    rep.samples[k] = s;
  }
  rep.log_multiplier_times_h = rep.max_multiplier > 0.0 ? h * std::log(rep.max_multiplier) : 0.0;
  return rep;
}

}  // namespace clab
