#include "clab/fit.hpp"

#include <cmath>
#include <limits>

#include "clab/error.hpp"

namespace clab {

std::string to_string(FitModel m) { return m == FitModel::loglog ? "loglog" : "exp_shape"; }

LineFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw ArgumentError("least_squares: size mismatch");
  if (n < 2) throw ArgumentError("least_squares: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ArgumentError("least_squares: abscissae are all equal");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    f.residuals.push_back(r);
    f.rss += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - f.rss / syy : 1.0;
  return f;
}

double exp_shape(double h, double sigma) {
  return std::pow(h, -1.0 - sigma) * (sigma * std::log(1.0 / h) + 1.0);
}

namespace {

void require_points(std::span<const double> h, std::span<const double> g) {
  if (h.size() != g.size()) throw ArgumentError("fit: h and g differ in length");
  if (h.size() < 5)
    throw ArgumentError("fit: fewer than 5 points (" + std::to_string(h.size()) + ")");
  for (std::size_t i = 0; i < h.size(); ++i)
    if (!(h[i] > 0.0) || !(g[i] > 0.0)) throw ArgumentError("fit: h and g must be positive");
}

ExponentFit package(FitModel model, double sigma, const LineFit& lf, std::span<const double> h) {
  ExponentFit f;
  f.model = model;
  f.sigma = sigma;
  f.slope = lf.slope;
  f.intercept = lf.intercept;
  f.r2 = lf.r2;
  f.rss = lf.rss;
  f.residuals = lf.residuals;
  f.points = h.size();
  f.h_min = std::numeric_limits<double>::infinity();
  for (double v : h) {
    f.h_min = std::min(f.h_min, v);
    f.h_max = std::max(f.h_max, v);
  }
  return f;
}

}  // namespace

ExponentFit fit_loglog(std::span<const double> h, std::span<const double> g) {
  require_points(h, g);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(g[i] > 1.0)) throw DomainError("fit_loglog: needs g > 1 (log log g undefined)");
    x.push_back(std::log(1.0 / h[i]));
    y.push_back(std::log(std::log(g[i])));
  }
  return package(FitModel::loglog, 0.0, least_squares(x, y), h);
}

ExponentFit fit_exp_shape(std::span<const double> h, std::span<const double> g, double sigma) {
  require_points(h, g);
  if (!(sigma >= 0.0)) throw ArgumentError("fit_exp_shape: sigma must be >= 0");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    x.push_back(exp_shape(h[i], sigma));
    y.push_back(std::log(g[i]));
  }
  return package(FitModel::exp_shape, sigma, least_squares(x, y), h);
}

ExponentFitPair fit_exponent(std::span<const ResolventRun> runs, double sigma) {
  std::vector<double> h, g;
  for (const auto& r : runs)
    if (r.converged) {
      h.push_back(r.h);
      g.push_back(r.g);
    }
  ExponentFitPair out;
  out.shape = fit_exp_shape(h, g, sigma);
  bool all_above_one = true;
  for (double v : g) all_above_one = all_above_one && v > 1.0;
  if (all_above_one) {
    out.loglog = fit_loglog(h, g);
    out.loglog_valid = true;
  }
  return out;
}

double select_sigma(std::span<const double> h, std::span<const double> g,
                    std::span<const double> candidates) {
  if (candidates.empty()) throw ArgumentError("select_sigma: no candidates");
  double best = candidates.front(), best_rss = std::numeric_limits<double>::infinity();
  for (double s : candidates) {
    const auto f = fit_exp_shape(h, g, s);
    if (f.rss < best_rss) {
      best_rss = f.rss;
      best = s;
    }
  }
  return best;
}

}  // namespace clab
