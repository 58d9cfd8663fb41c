#include "clab/carleman.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clab/error.hpp"
#include "clab/parallel.hpp"
#include "clab/quadrature.hpp"

namespace clab {

std::pair<double, double> sigma_rho(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw ArgumentError("alpha = " + std::to_string(alpha) + " outside [0,1]");
  return {(1.0 - alpha) / (3.0 + alpha), 2.0 / (3.0 + alpha)};
}

ConstructionParams make_params(HypothesisCase condition, double alpha, double eta, double tau0,
                               double a0, double K, double h, double E, double E_infty,
                               double delta, double R_E) {
  if (!(eta > 0.0 && eta < 1.0)) throw ArgumentError("eta must lie in (0,1)");
  if (!(tau0 >= 1.0)) throw ArgumentError("tau0 must be >= 1");
  if (!(a0 >= 1.0)) throw ArgumentError("a0 must be >= 1");
  if (!(K > 0.0)) throw ArgumentError("K must be positive");
  if (!(h > 0.0 && h <= 1.0)) throw ArgumentError("h must lie in (0,1]");
  if (!(delta > 0.0)) throw ArgumentError("delta must be positive");
  if (!(E > E_infty)) throw ArgumentError("need E > E_infty");
  ConstructionParams p;
  p.condition = condition;
  p.alpha = condition == HypothesisCase::Linfty_decay ? 0.0 : alpha;
  auto [sigma, rho] = sigma_rho(p.alpha);
  p.sigma = sigma;
  p.rho = condition == HypothesisCase::Linfty_decay ? 1.0 : rho;
  p.eta = eta;
  p.tau0 = tau0;
  p.a0 = a0;
  p.M = 2.0 * sigma / (2.0 - eta);
  p.a = a0 * std::pow(h, -p.M);
  p.K = K;
  p.h = h;
  p.delta = delta;
  p.E = E;
  p.E_infty = E_infty;
  p.R_E = R_E;
  return p;
}

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double f = std::exp(-1.0 / t);
  const double g = std::exp(-1.0 / (1.0 - t));
  return f / (f + g);
}

double omega_cutoff(double r) { return 1.0 - smooth_step((std::abs(r) - 0.55) / 0.15); }

double psi_cutoff(double r, double R_E) { return 1.0 - smooth_step((r - R_E) / 0.9); }

double phi1_value(double r, const EnvelopeFn& m) {
  const double mr = m(r);
  const double m2 = mr * mr;
  const double num = (r + 1.0) * m2 + 4.0 * r * omega_cutoff(r) - 4.0;
  return std::max(num / (4.0 - m2), 0.0);
}

double phi1_weighted_partial(const EnvelopeFn& m, double R) {
  if (R <= 0.0) return 0.0;
  // Substitute L = log(1 + s): (s+1)^{-2} Phi_1 ds = e^{-L} Phi_1 dL.
  auto f = [&](double L) {
    const double s = std::expm1(L);
    return std::exp(-L) * phi1_value(s, m);
  };
  std::vector<double> nodes{0.0};
  for (double b : {0.55, 0.70, 10.0, 100.0, 1e3, 1e4, 1e5})
    if (b < R) nodes.push_back(std::log1p(b));
  nodes.push_back(std::log1p(R));
  return quad::adaptive(f, nodes, {1e-12, 1e-16, 8000}).value;
}

double phi1_weighted_norm(const EnvelopeFn& m) {
  constexpr double R = 1e6;
  const double head = phi1_weighted_partial(m, R);
  // Beyond R the cutoff omega vanishes.
  auto log_f = [&](double L) {
    const double log_m = m.log_at_log1p(L);
    const double q = L + 2.0 * log_m;
    if (q <= std::log(4.0)) return -std::numeric_limits<double>::infinity();
    const double m2 = std::exp(2.0 * log_m);
    return q + std::log1p(-4.0 * std::exp(-q)) - 2.0 * L - std::log(4.0 - m2);
  };
  return head + quad::tail_log(log_f, R, {1e-11, 1e-16, 4000}).value;
}

LemmaPhiReport lemma_phi_check(const std::function<double(double)>& Phi1,
                               std::span<const double> grid, double norm, double slack_tol) {
  LemmaPhiReport rep;
  rep.norm = norm;
  rep.r.assign(grid.begin(), grid.end());
  auto Phi = [&](double s) { return -1.0 / (s + 1.0 + Phi1(s)); };
  std::vector<double> nodes{0.0};
  nodes.insert(nodes.end(), grid.begin(), grid.end());
  const auto cum = quad::cumulative(Phi, nodes, {1e-13, 1e-16, 2000});
  rep.min_slack = std::numeric_limits<double>::infinity();
  rep.max_slack = -std::numeric_limits<double>::infinity();
  bool ok = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double I = cum[i + 1];
    const double lo = -std::log1p(r);
    rep.integral.push_back(I);
    rep.lower.push_back(lo);
    rep.upper.push_back(lo + norm);
    const double slack = I - lo;
    rep.min_slack = std::min(rep.min_slack, slack);
    rep.max_slack = std::max(rep.max_slack, slack);
    if (slack < -1e-9 * (1.0 + std::abs(lo)) || slack > norm + slack_tol) ok = false;
  }
  rep.holds = ok;
  return rep;
}

namespace {

int side_of(double lo, double hi, double a) { return 0.5 * (lo + hi) <= a ? 0 : 1; }

Grid line_grid_with_count(std::size_t n, double x_max) {
  const double uniform_end = std::min(4.0, 0.5 * x_max);
  const std::size_t half = n / 2;
  const std::size_t n_uniform = std::max<std::size_t>(half / 2, 8);
  const double step = uniform_end / static_cast<double>(n_uniform);
  double lo = 1.0, hi = 2.0;
  auto count = [&](double q) { return line_grid(x_max, uniform_end, step, q).size(); };
  if (count(1.0 + 1e-12) <= n) return line_grid(x_max, uniform_end, step, 1.0 + 1e-12);
  while (count(hi) > n) hi *= 2.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (count(mid) > n ? lo : hi) = mid;
  }
  return line_grid(x_max, uniform_end, step, hi);
}

// Per-interval integrals of f over consecutive nodes, evaluated in parallel and
// summed serially so the result does not depend on the thread count.
template <class F>
std::vector<double> increments(F&& f, std::span<const double> x, const quad::Options& opt) {
  std::vector<double> inc(x.size(), 0.0);
  for_each_index(Exec::parallel, x.size() > 0 ? x.size() - 1 : 0, [&](std::size_t i) {
    if (x[i + 1] > x[i]) inc[i + 1] = quad::adaptive([&](double s) { return f(i, s); }, x[i], x[i + 1], opt).value;
  });
  return inc;
}

}  // namespace

Grid construction_grid_radial(const ConstructionParams& p, std::size_t n_points, double r_min,
                              double r_max_floor) {
  const double r_max = std::max(4.0 * p.a, r_max_floor);
  return radial_grid_with_count(r_min, r_max, n_points, p.a);
}

Grid construction_grid_1d(std::size_t n_points, double x_max) {
  return line_grid_with_count(n_points, x_max);
}

PhiW build_Phi_W_radial(const ConstructionParams& p, const EnvelopeFn& m, const Grid& grid) {
  PhiW out;
  const std::size_t n = grid.size();
  out.Phi.resize(n);
  out.Wcal.resize(n);
  out.Phi1.resize(n);
  for_each_index(Exec::parallel, n, [&](std::size_t i) {
    const double r = grid[i];
    if (!(r > 0.0)) throw DomainError("radial construction grid must be positive");
    const bool small = grid.jump ? (i <= *grid.jump) : (r <= p.a);
    const double Phi1 = phi1_value(r, m);
    const double mr = m(r);
    if (!(mr * mr < 4.0)) throw NumericError("envelope violates m^2 < 4", r);
    out.Phi1[i] = small ? Phi1 : 0.0;
    if (small) {
      out.Wcal[i] = 0.5 * r * (1.0 + omega_cutoff(r));
      out.Phi[i] = -1.0 / (r + 1.0 + Phi1);
    } else {
      out.Wcal[i] = 0.5 * std::pow(r + 1.0, 1.0 + p.eta);
      out.Phi[i] = -(1.0 + p.eta) / (r + 1.0);
    }
  });
  return out;
}

PhiW build_Phi_W_1d(const ConstructionParams& p, const EnvelopeFn& m0, const Grid& grid) {
  if (!(p.delta > 0.0) || !(p.h > 0.0)) throw ArgumentError("delta and h must be positive");
  const EnvelopeFn mf = m0.floored() ? m0 : m0.with_floor();
  PhiW out;
  const std::size_t n = grid.size();
  out.Phi.resize(n);
  out.Wcal.resize(n);
  out.Phi1.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid[i];
    const double sgn = x < 0.0 ? -1.0 : 1.0;
    out.Phi[i] = -2.0 * sgn / (std::abs(x) + 1.0);
    out.Wcal[i] = p.delta * p.h / mf(std::abs(x));
  }
  return out;
}

PhaseWeightProfile integrate_profiles_radial(const ConstructionParams& p, const EnvelopeFn& m,
                                             const Grid& grid, const IntegrationOptions& opt) {
  const std::size_t n = grid.size();
  if (n < 2) throw ArgumentError("integrate_profiles: grid too small");
  if (!(grid.front() > 0.0 && grid.front() < 0.5))
    throw ArgumentError("integrate_profiles: radial grid must start in (0, 1/2)");
  const double a = p.a;
  if (!grid.jump || grid[*grid.jump] != a)
    throw ArgumentError("integrate_profiles: grid lacks the duplicated node at a");

  PhaseWeightProfile prof;
  prof.params = p;
  prof.grid = grid;
  prof.radial = true;
  const auto fields = build_Phi_W_radial(p, m, grid);
  prof.Phi = fields.Phi;
  prof.Wcal = fields.Wcal;
  prof.Phi1 = fields.Phi1;
  prof.omega.resize(n);
  prof.psi.resize(n);
  prof.m.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    prof.omega[i] = omega_cutoff(grid[i]);
    prof.psi[i] = psi_cutoff(grid[i], p.R_E);
    prof.m[i] = m(grid[i]);
  }

  const quad::Options qo{opt.rel_tol, 1e-300, 4000};
  auto Phi_small = [&](double s) { return -1.0 / (s + 1.0 + phi1_value(s, m)); };
  auto Phi_big = [&](double s) { return -(1.0 + p.eta) / (s + 1.0); };
  auto W_small = [&](double s) { return 0.5 * s * (1.0 + omega_cutoff(s)); };
  auto W_big = [&](double s) { return 0.5 * std::pow(s + 1.0, 1.0 + p.eta); };
  auto Phi_at = [&](int side, double s) { return side == 0 ? Phi_small(s) : Phi_big(s); };
  const auto x = grid.nodes();

  // Integrated route: cumulative quadrature of Phi and 1/W.
  auto inc_Phi = increments(
      [&](std::size_t i, double s) { return Phi_at(side_of(x[i], x[i + 1], a), s); }, x, qo);
  auto inc_invW = increments(
      [&](std::size_t i, double s) {
        return side_of(x[i], x[i + 1], a) == 0 ? 1.0 / W_small(s) : 1.0 / W_big(s);
      },
      x, qo);
  std::vector<double> log_phi0p(n), log_w(n);
  log_phi0p[0] = std::log(p.tau0) + quad::adaptive(Phi_small, 0.0, x[0], qo).value;
  log_w[0] = std::log(x[0]);  // w = r near 0 (W = r there, w(0) = 0, w'(0) = 1)
  for (std::size_t i = 1; i < n; ++i) {
    log_phi0p[i] = log_phi0p[i - 1] + inc_Phi[i];
    log_w[i] = log_w[i - 1] + inc_invW[i];
  }
  prof.phi0_prime.resize(n);
  prof.log_w = log_w;
  prof.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    prof.phi0_prime[i] = std::exp(log_phi0p[i]);
    prof.w[i] = std::exp(log_w[i]);
  }

  // phi0 = int phi0': on each interval phi0'(s) = phi0'(x_i) exp(int_{x_i}^s Phi).
  auto inc_phi0 = increments(
      [&](std::size_t i, double s) {
        const int side = side_of(x[i], x[i + 1], a);
        const double inner =
            quad::adaptive([&](double t) { return Phi_at(side, t); }, x[i], s, qo).value;
        return prof.phi0_prime[i] * std::exp(inner);
      },
      x, qo);
  prof.phi0.resize(n);
  prof.phi0[0] = quad::adaptive(
                     [&](double s) {
                       return p.tau0 * std::exp(quad::adaptive(Phi_small, 0.0, s, qo).value);
                     },
                     0.0, x[0], qo)
                     .value;
  for (std::size_t i = 1; i < n; ++i) prof.phi0[i] = prof.phi0[i - 1] + inc_phi0[i];

  // Closed forms.
  const double J_lo = 0.70;
  const double J = quad::adaptive([&](double s) { return 2.0 / (s * (1.0 + omega_cutoff(s))); }, 0.5,
                                  J_lo, {1e-14, 1e-300, 4000})
                       .value;
  auto w_closed_small = [&](double r) {
    if (r <= 0.5) return r;
    if (r <= J_lo)
      return 0.5 * std::exp(quad::adaptive([&](double s) { return 2.0 / (s * (1.0 + omega_cutoff(s))); },
                                           0.5, r, {1e-14, 1e-300, 4000})
                                .value);
    return 0.5 * std::exp(J + 2.0 * std::log(r / J_lo));
  };
  const double w_a = w_closed_small(a);
  auto corr_inc = increments(
      [&](std::size_t i, double s) {
        if (side_of(x[i], x[i + 1], a) != 0) return 0.0;
        const double f1 = phi1_value(s, m);
        return f1 / ((s + 1.0) * (s + 1.0 + f1));
      },
      x, qo);
  std::vector<double> corr(n, 0.0);
  corr[0] = quad::adaptive(
                [&](double s) {
                  const double f1 = phi1_value(s, m);
                  return f1 / ((s + 1.0) * (s + 1.0 + f1));
                },
                0.0, x[0], qo)
                .value;
  for (std::size_t i = 1; i < n; ++i) corr[i] = corr[i - 1] + corr_inc[i];
  const std::size_t ja = *grid.jump;
  prof.phi1_norm = phi1_weighted_partial(m, a);
  const double phi0p_a = p.tau0 / (a + 1.0) * std::exp(corr[ja]);

  for (std::size_t i = 0; i < n; ++i) {
    const double r = x[i];
    const bool small = i <= ja;
    const double wc =
        small ? w_closed_small(r)
              : w_a * std::exp((2.0 / p.eta) * (std::pow(a + 1.0, -p.eta) - std::pow(r + 1.0, -p.eta)));
    const double pc = small ? p.tau0 / (r + 1.0) * std::exp(corr[i])
                            : phi0p_a * std::pow((a + 1.0) / (r + 1.0), 1.0 + p.eta);
    const double dw = std::abs(prof.w[i] - wc) / wc;
    const double dp = std::abs(prof.phi0_prime[i] - pc) / pc;
    prof.max_mismatch_w = std::max(prof.max_mismatch_w, dw);
    prof.max_mismatch_phi0p = std::max(prof.max_mismatch_phi0p, dp);
    if (opt.crosscheck && (dw > opt.crosscheck_tol || dp > opt.crosscheck_tol))
      throw IntegrationError("profile cross-check mismatch (w " + std::to_string(dw) + ", phi0' " +
                                 std::to_string(dp) + ") at r = " + std::to_string(r),
                             r);
    if (!small) {
      const double phc = prof.phi0[ja] + prof.phi0_prime[ja] * (a + 1.0) / p.eta *
                                             (1.0 - std::pow((a + 1.0) / (r + 1.0), p.eta));
      prof.max_mismatch_phi0 = std::max(prof.max_mismatch_phi0, std::abs(prof.phi0[i] - phc) / phc);
    }
  }

  const double scale = std::pow(p.h, -p.sigma);
  prof.phi_prime.resize(n);
  prof.phi.resize(n);
  prof.phi_second.resize(n);
  prof.w_prime.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    prof.phi_prime[i] = scale * prof.phi0_prime[i];
    prof.phi[i] = scale * prof.phi0[i];
    prof.phi_second[i] = prof.Phi[i] * prof.phi_prime[i];
    prof.w_prime[i] = prof.w[i] / prof.Wcal[i];
  }
  return prof;
}

PhaseWeightProfile integrate_profiles_1d(const ConstructionParams& p, const EnvelopeFn& m0,
                                         const Grid& grid, const IntegrationOptions& opt) {
  const std::size_t n = grid.size();
  const auto x = grid.nodes();
  const auto zero = std::find(x.begin(), x.end(), 0.0);
  if (zero == x.end()) throw ArgumentError("integrate_profiles_1d: grid must contain 0");
  const auto i0 = static_cast<std::size_t>(zero - x.begin());
  const EnvelopeFn mf = m0.floored() ? m0 : m0.with_floor();

  PhaseWeightProfile prof;
  prof.params = p;
  prof.grid = grid;
  prof.radial = false;
  const auto fields = build_Phi_W_1d(p, mf, grid);
  prof.Phi = fields.Phi;
  prof.Wcal = fields.Wcal;
  prof.Phi1 = fields.Phi1;
  prof.omega.assign(n, 0.0);
  prof.psi.resize(n);
  prof.m.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    prof.psi[i] = psi_cutoff(std::abs(x[i]), p.R_E);
    prof.m[i] = mf(std::abs(x[i]));
  }
  const double dh = p.delta * p.h;
  prof.m0_l1 = mf.l1_norm();
  const double log_w0 = -prof.m0_l1 / dh;

  const quad::Options qo{opt.rel_tol, 1e-300, 4000};
  auto Phi = [](double s) { return -2.0 * (s < 0.0 ? -1.0 : 1.0) / (std::abs(s) + 1.0); };
  auto inc_Phi = increments([&](std::size_t, double s) { return Phi(s); }, x, qo);
  auto inc_invW = increments([&](std::size_t, double s) { return mf(std::abs(s)) / dh; }, x, qo);
  std::vector<double> log_pp(n), log_w(n);
  log_pp[i0] = std::log(p.tau0);
  log_w[i0] = log_w0;
  for (std::size_t i = i0 + 1; i < n; ++i) {
    log_pp[i] = log_pp[i - 1] + inc_Phi[i];
    log_w[i] = log_w[i - 1] + inc_invW[i];
  }
  for (std::size_t i = i0; i-- > 0;) {
    log_pp[i] = log_pp[i + 1] - inc_Phi[i + 1];
    log_w[i] = log_w[i + 1] - inc_invW[i + 1];
  }
  prof.phi_prime.resize(n);
  prof.log_w = log_w;
  prof.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    prof.phi_prime[i] = std::exp(log_pp[i]);
    prof.w[i] = std::exp(log_w[i]);
  }
  auto inc_phi = increments(
      [&](std::size_t i, double s) {
        const double inner = quad::adaptive(Phi, x[i], s, qo).value;
        return prof.phi_prime[i] * std::exp(inner);
      },
      x, qo);
  prof.phi.assign(n, 0.0);
  for (std::size_t i = i0 + 1; i < n; ++i) prof.phi[i] = prof.phi[i - 1] + inc_phi[i];
  for (std::size_t i = i0; i-- > 0;) prof.phi[i] = prof.phi[i + 1] - inc_phi[i + 1];

  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i], ax = std::abs(xi);
    const double pc = p.tau0 / ((ax + 1.0) * (ax + 1.0));
    const double phc = p.tau0 * (xi < 0.0 ? -1.0 : 1.0) * (1.0 - 1.0 / (ax + 1.0));
    const double lwc = xi >= 0.0 ? -mf.l1_tail(xi) / dh : -(prof.m0_l1 + mf.l1_partial(ax)) / dh;
    const double dw = std::abs(log_w[i] - lwc) / std::max(1.0, std::abs(lwc));
    const double dp = std::abs(prof.phi_prime[i] - pc) / pc;
    const double dphi = std::abs(prof.phi[i] - phc) / std::max(p.tau0 * 1e-3, std::abs(phc));
    prof.max_mismatch_w = std::max(prof.max_mismatch_w, dw);
    prof.max_mismatch_phi0p = std::max(prof.max_mismatch_phi0p, dp);
    prof.max_mismatch_phi0 = std::max(prof.max_mismatch_phi0, dphi);
    if (opt.crosscheck && (dw > opt.crosscheck_tol || dp > opt.crosscheck_tol))
      throw IntegrationError("1D profile cross-check mismatch (log w " + std::to_string(dw) +
                                 ", phi' " + std::to_string(dp) + ") at x = " + std::to_string(xi),
                             xi);
  }
  prof.phi0_prime = prof.phi_prime;
  prof.phi0 = prof.phi;
  prof.phi_second.resize(n);
  prof.w_prime.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    prof.phi_second[i] = prof.Phi[i] * prof.phi_prime[i];
    prof.w_prime[i] = prof.w[i] / prof.Wcal[i];
  }
  return prof;
}

PhaseWeightProfile construct_profile(const ConstructionParams& p, const EnvelopeFn& m,
                                     std::size_t n_points, const IntegrationOptions& opt) {
  if (p.condition == HypothesisCase::holder_1d)
    return integrate_profiles_1d(p, m, construction_grid_1d(n_points), opt);
  return integrate_profiles_radial(p, m, construction_grid_radial(p, n_points), opt);
}

}  // namespace clab
