#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "clab/parallel.hpp"
#include "clab/potential.hpp"

namespace clab {

/// Three-point discretization of P(h) - E +- i eps with Dirichlet ends.
/// Line: nodes -L + j dx, j = 1..N, dx = 2L/(N+1). Radial: nodes j L/N, j = 1..N.
struct DiscretizedOperator {
  DimensionMode mode = DimensionMode::line;
  std::vector<double> x;
  double dx = 0.0;
  std::vector<std::complex<double>> diag;  // 2h^2/dx^2 + V + centrifugal - E +- i eps
  double off = 0.0;                        // -h^2/dx^2
  std::vector<double> weight;              // <x>^{-s}
  double h = 0.0, E = 0.0, eps = 0.0, s = 0.0, L = 0.0;
  int sign = 1;
  int l = 0, n = 3;
  std::size_t N = 0;

  std::size_t size() const { return x.size(); }
};

struct OperatorSpec {
  DimensionMode mode = DimensionMode::line;
  double h = 0.1, E = 1.0, eps = 0.1, s = 0.75, L = 20.0;
  int sign = 1;
  std::size_t N = 200;
  int l = 0, n = 3;
};

/// lambda_l + (n-1)(n-3)/4 with lambda_l = l(l + n - 2).
double centrifugal_coefficient(int l, int n);

DiscretizedOperator discretize(const PotentialModel& V, const OperatorSpec& spec);

struct NormOptions {
  double rel_tol = 1e-9;    // on |residual| / theta of the top Ritz pair
  int block = 4;            // simultaneous iteration width
  int max_iterations = 20000;
  std::uint64_t seed = 12345;
};

struct NormResult {
  double g = 0.0;
  int iterations = 0;
  double error_estimate = 0.0;
};

/// Largest singular value of D (P - z)^{-1} D by block power iteration on the
/// normal operator with Rayleigh-Ritz extraction; each step costs one tridiagonal
/// solve with A and one with A^H per block column.
/// Throws NumericError if the iteration does not settle.
NormResult weighted_resolvent_norm(const DiscretizedOperator& op, const NormOptions& opt = {});

struct ResolventRun {
  double h = 0.0, eps = 0.0, E = 0.0, s = 0.0;
  int l = 0, n = 1;
  double L = 0.0;
  std::size_t N = 0;
  double g = 0.0;
  bool converged = false;  // box doubling changed g by < 1%
  int doublings = 0;
  int iterations = 0;
};

/// eps as a function of h: eps = c h^q (default eps = h).
struct EpsRule {
  double c = 1.0;
  double q = 1.0;
  double operator()(double h) const;
};

struct SweepGeometry {
  DimensionMode mode = DimensionMode::line;
  int l = 0, n = 1;
  double L_min = 20.0;
  double ppw = 40.0;          // N >= ppw L / h
  std::size_t N_min = 200;
  int max_doublings = 3;
  double box_tol = 0.01;
  int sign = 1;
};

/// Default box L = max(L_min, 20 sqrt(E) h / eps), N = max(N_min, ceil(ppw L / h)),
/// then L -> 2L (with N -> 2N) until g changes by less than box_tol.
ResolventRun resolvent_run(const PotentialModel& V, double h, double E, double eps, double s,
                           const SweepGeometry& geo, const NormOptions& opt = {});

/// Independent runs over h (parallel over the grid). Requires >= 5 points.
std::vector<ResolventRun> h_sweep(const PotentialModel& V, double E, double s, const EpsRule& eps,
                                  std::span<const double> h_grid, const SweepGeometry& geo,
                                  Exec exec = Exec::parallel, const NormOptions& opt = {});

}  // namespace clab
