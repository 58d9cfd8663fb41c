#pragma once

#include <span>
#include <string>
#include <vector>

#include "clab/resolvent.hpp"

namespace clab {

enum class FitModel {
  loglog,     // log log g = p log(1/h) + b
  exp_shape,  // log g = C h^{-1-sigma} (sigma log(1/h) + 1) + b
};

std::string to_string(FitModel m);

struct ExponentFit {
  FitModel model = FitModel::exp_shape;
  double sigma = 0.0;
  double slope = 0.0;  // p or C
  double intercept = 0.0;
  double r2 = 0.0;
  double rss = 0.0;
  std::vector<double> residuals;
  double h_min = 0.0, h_max = 0.0;
  std::size_t points = 0;
};

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0, rss = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares y = slope x + intercept (>= 2 points).
LineFit least_squares(std::span<const double> x, std::span<const double> y);

/// Shape variable h^{-1-sigma}(sigma log(1/h) + 1).
double exp_shape(double h, double sigma);

/// Both fits on (h, g) pairs; throws ArgumentError with "fewer than 5 points".
/// The loglog fit needs g > 1 at every point and throws DomainError otherwise.
ExponentFit fit_loglog(std::span<const double> h, std::span<const double> g);
ExponentFit fit_exp_shape(std::span<const double> h, std::span<const double> g, double sigma);

struct ExponentFitPair {
  ExponentFit loglog;
  bool loglog_valid = false;  // false when some g <= 1
  ExponentFit shape;
};

/// Fits the converged runs of a sweep in both parameterizations.
ExponentFitPair fit_exponent(std::span<const ResolventRun> runs, double sigma);

/// Sigma among the candidates with the smallest exp_shape residual sum of squares.
double select_sigma(std::span<const double> h, std::span<const double> g,
                    std::span<const double> candidates);

}  // namespace clab
