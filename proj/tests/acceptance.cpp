// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "clab/carleman.hpp"
#include "clab/certificate.hpp"
#include "clab/error.hpp"
#include "clab/fit.hpp"
#include "clab/grid.hpp"
#include "clab/mollifier.hpp"
#include "clab/resolvent.hpp"
#include "clab/search.hpp"
#include "clab/test_functions.hpp"

using namespace clab;

namespace {

int g_failed = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failed;
}

std::string fmt(const char* f, double a) {
  char b[128];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Oracle quadrature, independent of the library's adaptive rule.
double gk(const std::function<double(double)>& f, double a, double b) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-13);
}

double phi1_oracle(double r, const EnvelopeFn& m) {
  const double mr = m(r);
  const double v = ((r + 1.0) * mr * mr + 4.0 * r * omega_cutoff(r) - 4.0) / (4.0 - mr * mr);
  return std::max(v, 0.0);
}

std::vector<double> radial_class_grid() {
  std::vector<double> g;
  for (double r = 1e-3; r <= 400.0; r *= 1.01) g.push_back(r);
  return g;
}

std::vector<double> line_class_grid() { return uniform_nodes(-400.0, 400.0, 16001); }

// ---------------------------------------------------------------------------
void criterion1() {
  double worst_w = 0.0, worst_p = 0.0, worst_t = 0.0;
  for (const auto& m : {EnvelopeFn::log_decay(), EnvelopeFn::power_decay(0.3)}) {
    for (double alpha : {0.0, 0.5, 1.0}) {
      const auto p = make_params(HypothesisCase::holder_radial, alpha, 0.5, 4.0, 2.0, 6.0, 0.05, 1.0, 0.0);
      const auto t0 = std::chrono::steady_clock::now();
      const auto prof = construct_profile(p, m, 10000);
      worst_t = std::max(worst_t, seconds_since(t0));
      const double a = p.a, eta = p.eta;
      // w: r on (0, 1/2]; (1/2) exp(int_{1/2}^r 2/(s(1+omega))) up to a; tail beyond.
      const double J = gk([](double s) { return 2.0 / (s * (1.0 + omega_cutoff(s))); }, 0.5, 0.7);
      auto w_small = [&](double r) {
        if (r <= 0.5) return r;
        if (r <= 0.7) return 0.5 * std::exp(gk([](double s) { return 2.0 / (s * (1.0 + omega_cutoff(s))); }, 0.5, r));
        return 0.5 * std::exp(J) * (r / 0.7) * (r / 0.7);
      };
      const double w1 = w_small(1.0);
      auto w_oracle = [&](double r, bool tail) {
        if (!tail) return r >= 1.0 ? w1 * r * r : w_small(r);
        return w1 * a * a * std::exp((2.0 / eta) * (std::pow(a + 1.0, -eta) - std::pow(r + 1.0, -eta)));
      };
      // phi0' = tau0 exp(-int_0^r 1/(s+1+Phi1)) up to a, then phi0'(a) ((a+1)/(r+1))^{1+eta}.
      auto integrand = [&](double s) { return 1.0 / (s + 1.0 + phi1_oracle(s, m)); };
      std::vector<double> cum(prof.size(), 0.0);
      double acc = gk(integrand, 0.0, prof.r(0)), prev = prof.r(0);
      for (std::size_t i = 0; i < prof.size(); ++i) {
        const double r = std::min(prof.r(i), a);
        if (r > prev) acc += gk(integrand, prev, r);
        prev = std::max(prev, r);
        cum[i] = acc;
      }
      const double phi_a = p.tau0 * std::exp(-acc);
      for (std::size_t i = 0; i < prof.size(); ++i) {
        const double r = prof.r(i);
        const bool tail = r > a || prof.at_jump_right(i);
        const double wo = w_oracle(r, tail);
        const double po = tail ? phi_a * std::pow((a + 1.0) / (r + 1.0), 1.0 + eta) : p.tau0 * std::exp(-cum[i]);
        worst_w = std::max(worst_w, std::abs(prof.w[i] - wo) / std::abs(wo));
        worst_p = std::max(worst_p, std::abs(prof.phi0_prime[i] - po) / std::abs(po));
      }
    }
  }
  const bool pass = worst_w <= 1e-8 && worst_p <= 1e-8 && worst_t < 1.0;
  report(1, pass, "max rel err w " + fmt("%.2e", worst_w) + ", phi0' " + fmt("%.2e", worst_p) +
                      ", slowest profile " + fmt("%.3f s", worst_t) + " (10^4 points, 6 profiles)");
}

// ---------------------------------------------------------------------------
void criterion2() {
  bool pass = true;
  std::string detail;
  const auto grid = geometric_sequence(1e-4, 1e5, 3000);
  for (const auto& m : {EnvelopeFn::log_decay(), EnvelopeFn::power_decay(0.3)}) {
    auto f = [&](double s) { return phi1_oracle(s, m) / ((s + 1.0) * (s + 1.0)); };
    boost::math::quadrature::exp_sinh<double> tail;
    // Kinks of the max[] sit inside [0, 200]; split there for the oracle.
    double norm = 0.0;
    const auto pieces = geometric_sequence(1e-3, 200.0, 400);
    norm += gk(f, 0.0, pieces.front());
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) norm += gk(f, pieces[i], pieces[i + 1]);
    norm += tail.integrate([&](double t) { return f(200.0 + t); });
    const auto rep = lemma_phi_check([&](double s) { return phi1_value(s, m); }, grid, norm);
    const bool ok = rep.holds && rep.min_slack >= -1e-9 && rep.max_slack <= norm + 1e-6;
    pass = pass && ok;
    detail += m.name() + ": slack in [" + fmt("%.2e", rep.min_slack) + ", " + fmt("%.6f", rep.max_slack) +
              "] vs norm " + fmt("%.6f", norm) + "; ";
  }
  report(2, pass, detail);
}

// ---------------------------------------------------------------------------
void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = EnvelopeFn::log_decay();
  const MollifierKernel chi;
  const std::vector<double> hs{0.2, 0.1, 0.05, 0.025};
  const auto grid = uniform_nodes(0.01, 20.0, 8000);
  const auto cgrid = radial_class_grid();
  const auto yg = default_y_grid();
  bool pass = true;
  std::string detail;
  for (double alpha : {0.0, 0.5, 1.0}) {
    const auto V = PotentialModel::sawtooth_holder(alpha, 1.0, 1.0, m);
    // E_inf = 0.01 sits above the sampled tail of the decaying sawtooth.
    const auto cert = certify_class(V, m, {HypothesisCase::holder_radial, alpha, 1.0, 0.01, 0.0}, cgrid, yg);
    const double rho = sigma_rho(alpha).second;
    std::vector<double> lh, lr;
    bool bounds = true;
    for (double h : hs) {
      const auto sp = build_smoothed(V, h, rho, HypothesisCase::holder_radial, cert.delta_V, chi, grid);
      const auto rep = verify_mollifier_bounds(sp, cert, V, m, chi);
      bounds = bounds && rep.pass;
      double mx = 0.0;
      for (std::size_t i = 0; i < sp.size(); ++i) {
        const double r = sp.r[i], mr = m(r);
        mx = std::max(mx, std::abs(sp.V[i] - sp.Vh[i]) * std::pow(1.0 + r * r, 1.5) / (mr * mr));
      }
      lh.push_back(std::log(h));
      lr.push_back(std::log(mx));
    }
    // slope by hand (independent of the fit module)
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lh.size(); ++i) mx += lh[i] / lh.size(), my += lr[i] / lh.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lh.size(); ++i) sxy += (lh[i] - mx) * (lr[i] - my), sxx += (lh[i] - mx) * (lh[i] - mx);
    const double slope = sxy / sxx;
    const bool ok = bounds && std::abs(slope - rho * alpha) <= 0.1;
    pass = pass && ok;
    detail += "alpha=" + fmt("%g", alpha) + ": bounds " + (bounds ? "ok" : "VIOLATED") + ", slope " +
              fmt("%.3f", slope) + " vs " + fmt("%.3f", rho * alpha) + "; ";
  }
  const double t = seconds_since(t0);
  pass = pass && t < 10.0;
  report(3, pass, detail + fmt("%.1f s", t));
}

// ---------------------------------------------------------------------------
struct CertCase {
  std::string name;
  PotentialModel V;
  EnvelopeFn m;
  SearchInput in;
  double declared_c;
};

void criterion4() {
  const auto pm = EnvelopeFn::power_decay(0.3);
  const auto bump = PotentialModel::compact_bump(2.0, 1.0, 2.0, DimensionMode::radial, BumpProfile::smooth);
  std::vector<CertCase> cases{
      {"free_zero linfty", PotentialModel::free_zero(), pm, {HypothesisCase::Linfty_decay, 0.0, 1.0, 0.0, 6.0, 0.5}, 0.0},
      {"bump alpha=0", bump, pm, {HypothesisCase::holder_radial, 0.0, 1.0, 0.0, 6.0, 0.5}, 50.0},
      {"bump alpha=1/2", bump, pm, {HypothesisCase::holder_radial, 0.5, 1.0, 0.0, 6.0, 0.5}, 50.0},
      {"bump alpha=1", bump, pm, {HypothesisCase::holder_radial, 1.0, 1.0, 0.0, 6.0, 0.5}, 50.0},
      {"arctan 1d", PotentialModel::arctan_ramp(0.3, 1.0), EnvelopeFn::one_over_rlog2(),
       {HypothesisCase::holder_1d, 0.0, 1.0, 0.5, 6.0, 0.5}, 1.0},
  };
  const MollifierKernel chi;
  const auto yg = default_y_grid();
  const std::vector<double> hs = geometric_sequence(0.025, 0.1, 5);
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    const bool line = c.in.condition == HypothesisCase::holder_1d;
    const auto grid = line ? line_class_grid() : radial_class_grid();
    const auto cert = certify_class(c.V, c.m, {c.in.condition, c.in.alpha, c.in.E, c.in.E_infty, c.declared_c},
                                    grid, yg);
    const auto res = search_constants(c.in, c.V, c.m, cert, chi, hs);
    bool ok = res.success && res.h0 >= hs.back();
    double worst = INFINITY;
    for (double h : hs) {
      const auto p = make_params(c.in.condition, c.in.alpha, c.in.eta, res.tau0, res.a0, c.in.K, h, c.in.E,
                                 c.in.E_infty, res.delta, cert.R_EV);
      const auto prof = construct_profile(p, c.m, 2000);
      const auto sp = build_smoothed(c.V, h, p.rho, p.condition, cert.delta_V, chi, prof.grid.nodes());
      const auto rep = key_margin(prof, sp, c.in.E, c.in.E_infty, c.in.K);
      ok = ok && rep.pass && rep.chain_algebra_ok && rep.chain_target_ok;
      worst = std::min(worst, rep.min_margin);
    }
    pass = pass && ok;
    detail += c.name + (ok ? " ok" : " FAILED") + " (tau0=" + fmt("%g", res.tau0) + ", min " + fmt("%.3g", worst) +
              "); ";
  }
  // Negative control: tall bump, tau0 = 1, a0 = 1.
  const auto tall = PotentialModel::compact_bump(20.0, 1.0, 2.0, DimensionMode::radial, BumpProfile::smooth);
  const auto cert = certify_class(tall, pm, {HypothesisCase::holder_radial, 1.0, 1.0, 0.0, 1.0}, radial_class_grid(), yg);
  const auto p = make_params(HypothesisCase::holder_radial, 1.0, 0.5, 1.0, 1.0, 6.0, 0.05, 1.0, 0.0, 1.0, cert.R_EV);
  const auto prof = construct_profile(p, pm, 2000);
  const auto sp = build_smoothed(tall, p.h, p.rho, p.condition, cert.delta_V, chi, prof.grid.nodes());
  const auto neg = key_margin(prof, sp, 1.0, 0.0, 6.0);
  const bool neg_ok = !neg.pass && neg.argmin_in_psi_support;
  pass = pass && neg_ok;
  detail += "negative control " + std::string(neg_ok ? "fails as expected" : "DID NOT FAIL") + " (min " +
            fmt("%.3g", neg.min_margin) + " at r=" + fmt("%.3f", neg.argmin_r) + ")";
  report(4, pass, detail);
}

// ---------------------------------------------------------------------------
void criterion5() {
  const auto m = EnvelopeFn::power_decay(0.3);
  const auto V = PotentialModel::compact_bump(2.0, 1.0, 2.0, DimensionMode::radial, BumpProfile::smooth);
  const auto cert = certify_class(V, m, {HypothesisCase::holder_radial, 0.5, 1.0, 0.0, 50.0}, radial_class_grid(),
                                  default_y_grid());
  const MollifierKernel chi;
  const auto p = make_params(HypothesisCase::holder_radial, 0.5, 0.5, 8.0, 46.5, 6.0, 0.1, 1.0, 0.0, 1.0, cert.R_EV);
  std::vector<double> res;
  std::string detail;
  bool pass = true;
  for (double lam : {0.0, 0.75}) {
    res.clear();
    for (std::size_t N : {1024, 2048, 4096, 8192}) {
      const auto x = uniform_nodes(0.2, 6.0, N);
      const auto f = sample_fields(p, m, V, cert, chi, x);
      // Window [0.2, 6] spans +-5 widths; the relative residual is set by points per width.
      TestParams tp;
      tp.center = 3.1;
      tp.width = 0.58;
      const auto u = make_test_function(TestFamily::gaussian_bump, tp, x);
      double worst = 0.0;
      for (int sign : {1, -1}) worst = std::max(worst, wF_derivative_identity(u, f, 1.0, 0.1, sign, lam).residual);
      res.push_back(worst);
    }
    std::string orders;
    for (std::size_t i = 0; i + 1 < res.size(); ++i) {
      const double order = std::log2(res[i] / res[i + 1]);
      orders += fmt(" %.3f", order);
      pass = pass && std::abs(order - 2.0) <= 0.2;
    }
    pass = pass && res.back() < 1e-6;
    detail += "lambda=" + fmt("%g", lam) + ": orders" + orders + ", residual(8192) " + fmt("%.2e", res.back()) + "; ";
  }
  report(5, pass, detail);
}

// ---------------------------------------------------------------------------
void criterion6() {
  const auto m = EnvelopeFn::power_decay(0.3);
  const auto V = PotentialModel::compact_bump(2.0, 1.0, 2.0, DimensionMode::radial, BumpProfile::smooth);
  const SearchInput in{HypothesisCase::holder_radial, 0.5, 1.0, 0.0, 6.0, 0.5};
  const auto cert = certify_class(V, m, {in.condition, in.alpha, in.E, in.E_infty, 50.0}, radial_class_grid(),
                                  default_y_grid());
  const MollifierKernel chi;
  const std::vector<double> hs{0.2, 0.1, 0.05};
  const auto res = search_constants(in, V, m, cert, chi, hs);
  const auto x = uniform_nodes(0.2, 6.0, 4096);
  TestParams base;
  base.center = 3.1;
  base.width = 0.35;
  base.k_lo = 0.0;
  base.k_hi = 4.0;
  base.seed = 2024;
  const auto batch = random_test_batch(base, 10, x);
  bool holds = res.success;
  std::vector<double> lmh;
  std::string detail;
  for (double h : hs) {
    const auto p = make_params(in.condition, in.alpha, in.eta, res.tau0, res.a0, in.K, h, in.E, in.E_infty, 1.0,
                               cert.R_EV);
    const auto f = sample_fields(p, m, V, cert, chi, x);
    double worst = -INFINITY;
    for (int sign : {1, -1}) {
      const auto rep = integrated_carleman_check(batch, f, in.E, in.E_infty, 0.1, sign, in.eta, 0.0);
      holds = holds && rep.all_hold;
      worst = std::max(worst, rep.log_multiplier_times_h);
    }
    lmh.push_back(worst);
    detail += "h=" + fmt("%g", h) + ": h log M = " + fmt("%.4f", worst) + "; ";
  }
  const auto [lo, hi] = std::minmax_element(lmh.begin(), lmh.end());
  double mean = 0.0;
  for (double v : lmh) mean += v / lmh.size();
  const double spread = (*hi - *lo) / std::abs(mean);
  const bool pass = holds && spread <= 0.25;
  report(6, pass, std::string("inequality ") + (holds ? "holds" : "VIOLATED") + " for all samples; " + detail +
                      "relative spread " + fmt("%.3f", spread) + " (limit 0.25)");
}

// ---------------------------------------------------------------------------
// Dense oracle assembled from the difference scheme directly.
double dense_norm(const PotentialModel& V, const OperatorSpec& s) {
  const int N = static_cast<int>(s.N);
  const bool radial = s.mode == DimensionMode::radial;
  const double dx = radial ? s.L / N : 2.0 * s.L / (N + 1);
  const double cent = radial ? s.l * (s.l + s.n - 2.0) + 0.25 * (s.n - 1.0) * (s.n - 3.0) : 0.0;
  const double h2 = s.h * s.h;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
  Eigen::VectorXd d(N);
  for (int j = 0; j < N; ++j) {
    const double x = radial ? (j + 1) * dx : -s.L + (j + 1) * dx;
    const double c = radial ? h2 * cent / (x * x) : 0.0;
    A(j, j) = std::complex<double>(2.0 * h2 / (dx * dx) + V.eval(x) + c - s.E, s.sign * s.eps);
    if (j + 1 < N) A(j, j + 1) = A(j + 1, j) = -h2 / (dx * dx);
    d(j) = std::pow(1.0 + x * x, -0.5 * s.s);
  }
  Eigen::MatrixXcd G = d.asDiagonal() * A.inverse() * d.asDiagonal();
  return Eigen::BDCSVD<Eigen::MatrixXcd>(G).singularValues()(0);
}

void criterion7() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst_rel = 0.0, worst_branch = 0.0, worst_ratio = 0.0;
  for (int k = 0; k < 10; ++k) {
    OperatorSpec s;
    s.mode = k % 2 ? DimensionMode::radial : DimensionMode::line;
    s.h = 0.1 + 0.4 * U(rng);
    s.E = 0.3 + 1.7 * U(rng);
    s.eps = 0.05 + 0.45 * U(rng);
    s.s = 0.6 + 0.6 * U(rng);
    s.L = 5.0 + 25.0 * U(rng);
    s.N = 200 + static_cast<std::size_t>(1000 * U(rng));
    s.l = static_cast<int>(3 * U(rng));
    s.n = 3;
    const double height = 0.5 + 2.5 * U(rng);
    const auto V = s.mode == DimensionMode::line ? PotentialModel::bump_pair(height, 1.5, 0.7)
                                                 : PotentialModel::compact_bump(height, 1.0, 2.0, s.mode,
                                                                                BumpProfile::smooth);
    const double g = weighted_resolvent_norm(discretize(V, s)).g;
    const double gd = dense_norm(V, s);
    s.sign = -1;
    const double gm = weighted_resolvent_norm(discretize(V, s)).g;
    worst_rel = std::max(worst_rel, std::abs(g - gd) / gd);
    worst_branch = std::max(worst_branch, std::abs(g - gm) / g);
    worst_ratio = std::max(worst_ratio, g * s.eps);
  }
  const bool pass = worst_rel <= 1e-6 && worst_branch <= 1e-10 && worst_ratio <= 1.0;
  report(7, pass, "max rel vs dense " + fmt("%.2e", worst_rel) + ", branch diff " + fmt("%.2e", worst_branch) +
                      ", max eps*g " + fmt("%.4f", worst_ratio));
}

// ---------------------------------------------------------------------------
void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto hs = geometric_sequence(0.0125, 0.2, 5);
  SweepGeometry geo;
  const auto trapped = h_sweep(PotentialModel::bump_pair(2.0, 1.5, 0.7), 0.5, 0.75, EpsRule{}, hs, geo);
  const auto free = h_sweep(PotentialModel::free_zero(DimensionMode::line), 0.5, 0.75, EpsRule{}, hs, geo);
  const auto ft = fit_exponent(trapped, 0.0).shape;
  const auto ff = fit_exponent(free, 0.0).shape;
  const double t = seconds_since(t0);
  std::string gs;
  for (const auto& r : trapped) gs += fmt(" %.3g", r.g);
  const bool pass = ft.r2 >= 0.98 && ft.slope > 0.0 && ff.slope <= 0.05 && t < 300.0;
  report(8, pass, "trapped g:" + gs + "; slope " + fmt("%.4f", ft.slope) + ", R^2 " + fmt("%.4f", ft.r2) +
                      " (need >= 0.98); free slope " + fmt("%.4f", ff.slope) + "; " + fmt("%.1f s", t));
}

// ---------------------------------------------------------------------------
void criterion9() {
  const auto hs = geometric_sequence(0.0125, 0.2, 5);
  const auto m = EnvelopeFn::log_decay();
  bool pass = true;
  std::string detail;
  for (double alpha : {0.0, 0.5, 1.0}) {
    const auto V = PotentialModel::sawtooth_holder(alpha, 1.0, 1.0, m);
    const double bound = 1.0 + sigma_rho(alpha).first + 0.15;
    detail += "alpha=" + fmt("%g", alpha) + " (p <= " + fmt("%.3f", bound) + "):";
    for (int l : {0, 1, 2}) {
      SweepGeometry geo;
      geo.mode = DimensionMode::radial;
      geo.l = l;
      geo.n = 3;
      const auto runs = h_sweep(V, 1.0, 0.75, EpsRule{}, hs, geo);
      const auto fp = fit_exponent(runs, sigma_rho(alpha).first);
      const bool ok = fp.loglog_valid && fp.loglog.slope <= bound;
      pass = pass && ok;
      detail += fp.loglog_valid ? fmt(" %.3f", fp.loglog.slope) : std::string(" invalid(g<=1)");
    }
    detail += "; ";
  }
  report(9, pass, detail);
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9};
  for (std::size_t i = 0; i < all.size(); ++i) {
    try {
      all[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", g_failed, all.size());
  return g_failed;
}
