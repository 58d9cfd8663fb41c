#include "clab/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "clab/error.hpp"
#include "clab/tridiagonal.hpp"

namespace clab {

using cd = std::complex<double>;

double centrifugal_coefficient(int l, int n) {
  if (l < 0) throw ArgumentError("mode l must be >= 0");
  if (n < 3) throw ArgumentError("radial reduction needs n >= 3");
  return static_cast<double>(l) * (l + n - 2) + 0.25 * (n - 1) * (n - 3);
}

DiscretizedOperator discretize(const PotentialModel& V, const OperatorSpec& spec) {
  if (spec.N < 200) throw ArgumentError("discretize: N must be >= 200");
  if (!(spec.h > 0.0)) throw ArgumentError("discretize: h must be positive");
  if (!(spec.eps >= 0.0)) throw ArgumentError("discretize: eps must be >= 0");
  if (!(spec.L > 0.0)) throw ArgumentError("discretize: L must be positive");
  if (!(spec.s > 0.0)) throw ArgumentError("discretize: s must be positive");
  if (spec.sign != 1 && spec.sign != -1) throw ArgumentError("discretize: sign must be +1 or -1");
  if (V.mode() != spec.mode) throw ArgumentError("discretize: potential and operator modes differ");
  DiscretizedOperator op;
  op.mode = spec.mode;
  op.h = spec.h;
  op.E = spec.E;
  op.eps = spec.eps;
  op.s = spec.s;
  op.L = spec.L;
  op.sign = spec.sign;
  op.l = spec.l;
  op.n = spec.mode == DimensionMode::line ? 1 : spec.n;
  op.N = spec.N;
  const std::size_t N = spec.N;
  const bool radial = spec.mode == DimensionMode::radial;
  op.dx = radial ? spec.L / static_cast<double>(N) : 2.0 * spec.L / static_cast<double>(N + 1);
  const double cent = radial ? centrifugal_coefficient(spec.l, spec.n) : 0.0;
  const double h2 = spec.h * spec.h;
  op.off = -h2 / (op.dx * op.dx);
  op.x.resize(N);
  op.diag.resize(N);
  op.weight.resize(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double x = radial ? op.dx * static_cast<double>(j + 1)
                            : -spec.L + op.dx * static_cast<double>(j + 1);
    op.x[j] = x;
    const double c = cent != 0.0 ? h2 * cent / (x * x) : 0.0;
    op.diag[j] = cd(2.0 * h2 / (op.dx * op.dx) + V.eval(x) + c - spec.E, spec.sign * spec.eps);
    op.weight[j] = std::pow(1.0 + x * x, -0.5 * spec.s);
  }
  return op;
}

NormResult weighted_resolvent_norm(const DiscretizedOperator& op, const NormOptions& opt) {
  const std::size_t N = op.size();
  if (N == 0) throw ArgumentError("weighted_resolvent_norm: empty operator");
  if (!(op.eps > 0.0)) throw ArgumentError("weighted_resolvent_norm: eps must be positive");
  if (opt.block < 1) throw ArgumentError("weighted_resolvent_norm: block must be >= 1");
  std::vector<cd> off(N - 1, cd(op.off));
  const TridiagonalLU lu(off, op.diag, off);
  const auto b = static_cast<Eigen::Index>(std::min<std::size_t>(opt.block, N));
  const auto n = static_cast<Eigen::Index>(N);
  const Eigen::Map<const Eigen::VectorXd> weight(op.weight.data(), n);

  std::mt19937_64 gen(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd X(n, b), Z(n, b);
  for (Eigen::Index j = 0; j < b; ++j)
    for (Eigen::Index i = 0; i < n; ++i) X(i, j) = cd(normal(gen), normal(gen));
  X = Eigen::HouseholderQR<Eigen::MatrixXcd>(X).householderQ() * Eigen::MatrixXcd::Identity(n, b);

  // Z = G^* G X with G = D A^{-1} D.
  auto apply_normal = [&](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) {
    Eigen::VectorXcd y(n);
    for (Eigen::Index j = 0; j < in.cols(); ++j) {
      y = weight.cwiseProduct(in.col(j));
      lu.solve(std::span<cd>(y.data(), N));
      y = weight.cwiseProduct(weight.cwiseProduct(y));
      lu.solve_conj_symmetric(std::span<cd>(y.data(), N));
      out.col(j) = weight.cwiseProduct(y);
    }
  };

  NormResult res;
  double theta_prev = 0.0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    apply_normal(X, Z);
    // Rayleigh-Ritz on span(X).
    const Eigen::MatrixXcd H = X.adjoint() * Z;
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (H + H.adjoint()));
    const double theta = eig.eigenvalues()(b - 1);
    const Eigen::VectorXcd u = eig.eigenvectors().col(b - 1);
    const double resid = (Z * u - theta * (X * u)).norm();
    res.iterations = it;
    res.g = std::sqrt(std::max(theta, 0.0));
    // Some eigenvalue of G^* G lies within resid of theta; the block keeps it the top one.
    res.error_estimate = resid / theta;
    const double change = std::abs(theta - theta_prev) / theta;
    if (it > 2 && (res.error_estimate <= opt.rel_tol || change <= 1e-15)) return res;
    theta_prev = theta;
    X = Eigen::HouseholderQR<Eigen::MatrixXcd>(Z * eig.eigenvectors()).householderQ() *
        Eigen::MatrixXcd::Identity(n, b);
  }
  throw NumericError("power iteration did not converge", res.error_estimate);
}

double EpsRule::operator()(double h) const { return c * std::pow(h, q); }

ResolventRun resolvent_run(const PotentialModel& V, double h, double E, double eps, double s,
                           const SweepGeometry& geo, const NormOptions& opt) {
  if (!(s > 0.5)) throw ArgumentError("resolvent_run: s must exceed 1/2");
  if (!(eps > 0.0)) throw ArgumentError("resolvent_run: eps must be positive");
  OperatorSpec spec;
  spec.mode = geo.mode;
  spec.h = h;
  spec.E = E;
  spec.eps = eps;
  spec.s = s;
  spec.sign = geo.sign;
  spec.l = geo.l;
  spec.n = geo.n;
  spec.L = std::max(geo.L_min, 20.0 * std::sqrt(std::max(E, 0.0)) * h / eps);
  spec.N = std::max(geo.N_min, static_cast<std::size_t>(std::ceil(geo.ppw * spec.L / h)));
  ResolventRun run;
  run.h = h;
  run.eps = eps;
  run.E = E;
  run.s = s;
  run.l = geo.l;
  run.n = geo.mode == DimensionMode::line ? 1 : geo.n;
  auto first = weighted_resolvent_norm(discretize(V, spec), opt);
  double g = first.g;
  run.iterations = first.iterations;
  for (int k = 0; k < geo.max_doublings; ++k) {
    OperatorSpec big = spec;
    big.L = 2.0 * spec.L;
    big.N = 2 * spec.N + (geo.mode == DimensionMode::line ? 1 : 0);  // keeps dx fixed
    const auto r = weighted_resolvent_norm(discretize(V, big), opt);
    run.iterations += r.iterations;
    const bool settled = std::abs(r.g - g) < geo.box_tol * r.g;
    spec = big;
    g = r.g;
    run.doublings = k + 1;
    if (settled) {
      run.converged = true;
      break;
    }
  }
  run.g = g;
  run.L = spec.L;
  run.N = spec.N;
  return run;
}

std::vector<ResolventRun> h_sweep(const PotentialModel& V, double E, double s, const EpsRule& eps,
                                  std::span<const double> h_grid, const SweepGeometry& geo,
                                  Exec exec, const NormOptions& opt) {
  if (h_grid.size() < 5)
    throw ArgumentError("h_sweep: fewer than 5 points (" + std::to_string(h_grid.size()) + ")");
  std::vector<ResolventRun> runs(h_grid.size());
  for_each_index(exec, h_grid.size(), [&](std::size_t i) {
    runs[i] = resolvent_run(V, h_grid[i], E, eps(h_grid[i]), s, geo, opt);
  });
  return runs;
}

}  // namespace clab
