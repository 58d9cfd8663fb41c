#include "clab/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clab/error.hpp"

namespace clab {

namespace {

quad::Options to_quad(const MollifyOptions& o) { return {o.rel_tol, o.abs_tol, o.max_intervals}; }

double japanese(double r) { return std::sqrt(1.0 + r * r); }

// a / b with 0 / 0 read as 0.
double ratio(double a, double b) { return a == 0.0 ? 0.0 : a / b; }

// Nodes 0 < s_1 < ... < 1 at the images of the potential's breakpoints.
std::vector<double> kernel_nodes(const PotentialModel& V, double r, double gamma) {
  std::vector<double> s{0.0};
  for (double b : V.breakpoints(r, r + gamma)) s.push_back((b - r) / gamma);
  s.push_back(1.0);
  return s;
}

}  // namespace

MollifierKernel::MollifierKernel() {
  quad::Options opt{1e-15, 1e-300, 4000};
  norm_ = 1.0;
  const double z = quad::adaptive([&](double s) { return shape(s); }, 0.0, 1.0, opt).value;
  norm_ = z;
  mean_ = moment(1.0);
}

double MollifierKernel::shape(double s) const {
  if (!(s > 0.0 && s < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (4.0 * s * (1.0 - s)));
}

double MollifierKernel::operator()(double s) const { return shape(s) / norm_; }

double MollifierKernel::derivative(double s) const {
  if (!(s > 0.0 && s < 1.0)) return 0.0;
  const double q = s * (1.0 - s);
  return (*this)(s) * (1.0 - 2.0 * s) / (4.0 * q * q);
}

double MollifierKernel::moment(double alpha) const {
  quad::Options opt{1e-14, 1e-300, 4000};
  return quad::adaptive([&](double s) { return std::pow(s, alpha) * (*this)(s); }, 0.0, 1.0, opt)
      .value;
}

double MollifierKernel::abs_derivative_moment(double alpha) const {
  quad::Options opt{1e-14, 1e-300, 4000};
  const double nodes[3] = {0.0, 0.5, 1.0};
  return quad::adaptive([&](double s) { return std::pow(s, alpha) * std::abs(derivative(s)); },
                        std::span<const double>(nodes, 3), opt)
      .value;
}

quad::Result mollify(const PotentialModel& V, double r, double gamma, const MollifierKernel& chi,
                     const MollifyOptions& opt) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ArgumentError("mollify: gamma must lie in (0,1]");
  const auto nodes = kernel_nodes(V, r, gamma);
  auto f = [&](double s) { return s > 0.0 && s < 1.0 ? V.eval(r + gamma * s) * chi(s) : 0.0; };
  return quad::adaptive(f, nodes, to_quad(opt));
}

quad::Result mollify_derivative(const PotentialModel& V, double r, double gamma,
                                const MollifierKernel& chi, const MollifyOptions& opt) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw ArgumentError("mollify_derivative: gamma must lie in (0,1]");
  const auto nodes = kernel_nodes(V, r, gamma);
  const double v0 = V.eval(r);
  auto f = [&](double s) {
    return s > 0.0 && s < 1.0 ? (V.eval(r + gamma * s) - v0) * chi.derivative(s) : 0.0;
  };
  quad::Result res = quad::adaptive(f, nodes, to_quad(opt));
  res.value = -res.value / gamma;
  res.error /= gamma;
  return res;
}

SmoothedPotential build_smoothed(const PotentialModel& V, double h, double rho,
                                 HypothesisCase condition, double delta,
                                 const MollifierKernel& chi, std::span<const double> grid,
                                 Exec exec, const MollifyOptions& opt) {
  if (!(h > 0.0 && h <= 1.0)) throw ArgumentError("build_smoothed: h must lie in (0,1]");
  SmoothedPotential sp;
  sp.condition = condition;
  sp.h = h;
  sp.rho = rho;
  const std::size_t n = grid.size();
  sp.r.assign(grid.begin(), grid.end());
  sp.V.resize(n);
  sp.Vh.assign(n, 0.0);
  sp.Vh_prime.assign(n, 0.0);
  sp.Rh.resize(n);
  sp.quad_error.assign(n, 0.0);

  if (condition == HypothesisCase::Linfty_decay) {
    sp.zero_approximation = true;
    sp.rho = 1.0;
    sp.gamma = 0.0;
    for_each_index(exec, n, [&](std::size_t i) {
      sp.V[i] = V.eval(grid[i]);
      sp.Rh[i] = sp.V[i];
    });
    return sp;
  }

  if (condition == HypothesisCase::holder_radial) {
    if (!(rho > 0.0)) throw ArgumentError("build_smoothed: rho must be positive");
    const double h_max = std::pow(delta, 1.0 / rho);
    if (h > h_max)
      throw HypothesisError("h = " + std::to_string(h) + " exceeds delta_V^(1/rho) = " +
                            std::to_string(h_max));
    sp.gamma = std::pow(h, rho);
  } else {
    if (h > delta)
      throw HypothesisError("h = " + std::to_string(h) + " exceeds delta_0 = " + std::to_string(delta));
    sp.rho = 1.0;
    sp.gamma = h;
  }

  for_each_index(exec, n, [&](std::size_t i) {
    const double r = grid[i];
    if (i > 0 && grid[i] == grid[i - 1]) return;  // duplicated node, filled below
    sp.V[i] = V.eval(r);
    const auto vh = mollify(V, r, sp.gamma, chi, opt);
    sp.Vh[i] = vh.value;
    sp.quad_error[i] = vh.error;
    sp.Vh_prime[i] = mollify_derivative(V, r, sp.gamma, chi, opt).value;
    sp.Rh[i] = sp.V[i] - sp.Vh[i];
  });
  for (std::size_t i = 1; i < n; ++i) {
    if (grid[i] != grid[i - 1]) continue;
    sp.V[i] = sp.V[i - 1];
    sp.Vh[i] = sp.Vh[i - 1];
    sp.quad_error[i] = sp.quad_error[i - 1];
    sp.Vh_prime[i] = sp.Vh_prime[i - 1];
    sp.Rh[i] = sp.Rh[i - 1];
  }
  return sp;
}

namespace {

// Max of V over [a, b]: endpoints, breakpoints and their midpoints, plus a uniform
// sample. Exact for piecewise-monotone families whose extrema sit on breakpoints.
double sampled_sup(const PotentialModel& V, double a, double b) {
  std::vector<double> pts{a, b};
  const auto bp = V.breakpoints(a, b);
  pts.insert(pts.end(), bp.begin(), bp.end());
  constexpr int kSamples = 64;
  for (int k = 1; k < kSamples; ++k) pts.push_back(a + (b - a) * k / kSamples);
  double out = -std::numeric_limits<double>::infinity();
  for (double x : pts) out = std::max(out, V.eval(x));
  return out;
}

}  // namespace

MollifierReport verify_mollifier_bounds(const SmoothedPotential& sp, const ClassCertificate& cert,
                                        const PotentialModel& V, const EnvelopeFn& m,
                                        const MollifierKernel& chi, Exec exec) {
  MollifierReport rep;
  const std::size_t n = sp.size();
  rep.sup_excess.assign(n, 0.0);
  rep.deriv_ratio.assign(n, 0.0);
  rep.remainder_ratio.assign(n, 0.0);
  rep.remainder_ratio_semiclassical.assign(n, 0.0);
  if (sp.zero_approximation) {
    rep.sup_ok = rep.deriv_ok = rep.remainder_ok = rep.pass = true;
    return rep;
  }
  const bool radial = sp.condition == HypothesisCase::holder_radial;
  const double c = cert.c_const;
  const double alpha = radial ? cert.alpha : 0.0;
  rep.C_chi = radial ? chi.C_chi(alpha) : chi.C_chi(0.0);
  const double g = sp.gamma;
  std::vector<double> weighted(n, 0.0);

  for_each_index(exec, n, [&](std::size_t i) {
    const double r = sp.r[i];
    const double s = sampled_sup(V, r, r + g);
    const double tol = 1e-10 * std::max(1.0, std::abs(s)) + sp.quad_error[i];
    rep.sup_excess[i] = sp.Vh[i] - s - tol;
    const double mr = m(std::abs(r));
    if (radial) {
      const double j3 = std::pow(japanese(r), 3.0);
      const double env = mr * mr / j3;
      rep.deriv_ratio[i] = ratio(std::abs(sp.Vh_prime[i]), rep.C_chi * c * std::pow(g, alpha - 1.0) * env);
      rep.remainder_ratio[i] = ratio(std::abs(sp.Rh[i]), c * std::pow(g, alpha) * env);
      weighted[i] = std::abs(sp.Rh[i]) / env;
    } else {
      rep.deriv_ratio[i] = ratio(std::abs(sp.Vh_prime[i]), rep.C_chi * c * mr / sp.h);
      rep.remainder_ratio[i] = ratio(std::abs(sp.Rh[i]), 2.0 * c * mr);
      rep.remainder_ratio_semiclassical[i] = ratio(std::abs(sp.Rh[i]), c * sp.h * mr);
      weighted[i] = std::abs(sp.Rh[i]) / mr;
    }
  });
  rep.max_sup_excess = n ? *std::max_element(rep.sup_excess.begin(), rep.sup_excess.end()) : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rep.max_deriv_ratio = std::max(rep.max_deriv_ratio, rep.deriv_ratio[i]);
    rep.max_remainder_ratio = std::max(rep.max_remainder_ratio, rep.remainder_ratio[i]);
    rep.max_remainder_ratio_semiclassical =
        std::max(rep.max_remainder_ratio_semiclassical, rep.remainder_ratio_semiclassical[i]);
    rep.max_weighted_remainder = std::max(rep.max_weighted_remainder, weighted[i]);
  }
  rep.sup_ok = rep.max_sup_excess <= 0.0;
  rep.deriv_ok = rep.max_deriv_ratio <= 1.0;
  rep.remainder_ok = rep.max_remainder_ratio <= 1.0;
  rep.pass = rep.sup_ok && rep.deriv_ok && rep.remainder_ok;
  return rep;
}

}  // namespace clab
