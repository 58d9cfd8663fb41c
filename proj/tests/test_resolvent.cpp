#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "clab/error.hpp"
#include "clab/resolvent.hpp"
#include "clab/tridiagonal.hpp"

using namespace clab;
using cd = std::complex<double>;

namespace {

Eigen::MatrixXcd dense_operator(const DiscretizedOperator& op) {
  const auto N = static_cast<Eigen::Index>(op.size());
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    A(i, i) = op.diag[i];
    if (i + 1 < N) A(i, i + 1) = A(i + 1, i) = op.off;
  }
  return A;
}

double dense_norm(const DiscretizedOperator& op) {
  Eigen::VectorXd d(op.size());
  for (std::size_t i = 0; i < op.size(); ++i) d(i) = op.weight[i];
  const Eigen::MatrixXcd G = d.asDiagonal() * dense_operator(op).inverse() * d.asDiagonal();
  return Eigen::BDCSVD<Eigen::MatrixXcd>(G).singularValues()(0);
}

}  // namespace

TEST_CASE("centrifugal coefficient") {
  CHECK(centrifugal_coefficient(0, 3) == 0.0);
  CHECK(centrifugal_coefficient(1, 3) == 2.0);
  CHECK(centrifugal_coefficient(2, 3) == 6.0);
  CHECK(centrifugal_coefficient(0, 5) == doctest::Approx(2.0));
  CHECK_THROWS_AS(centrifugal_coefficient(0, 2), ArgumentError);
}

TEST_CASE("tridiagonal LU against dense solves") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const std::size_t n = 60;
  std::vector<cd> sub(n - 1), diag(n), sup(n - 1), b(n);
  for (auto& z : sub) z = {g(rng), g(rng)};
  for (auto& z : sup) z = {g(rng), g(rng)};
  for (auto& z : diag) z = {0.1 * g(rng), g(rng)};  // small diagonal forces pivoting
  for (auto& z : b) z = {g(rng), g(rng)};
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    A(i, i) = diag[i];
    if (i + 1 < n) A(i + 1, i) = sub[i], A(i, i + 1) = sup[i];
  }
  Eigen::VectorXcd rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs(i) = b[i];
  const Eigen::VectorXcd x_ref = A.partialPivLu().solve(rhs);
  TridiagonalLU lu(sub, diag, sup);
  auto x = b;
  lu.solve(x);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(x[i] - x_ref(i)) < 1e-10 * (1 + std::abs(x_ref(i))));

  // complex symmetric: sub == sup
  TridiagonalLU sym(sub, diag, sub);
  Eigen::MatrixXcd S = A;
  for (std::size_t i = 0; i + 1 < n; ++i) S(i, i + 1) = sub[i];
  const Eigen::VectorXcd y_ref = S.adjoint().partialPivLu().solve(rhs);
  auto y = b;
  sym.solve_conj_symmetric(y);
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] - y_ref(i)) < 1e-10 * (1 + std::abs(y_ref(i))));
}

TEST_CASE("discretization layout") {
  OperatorSpec s;
  s.h = 0.2;
  s.N = 300;
  s.L = 10.0;
  const auto V = PotentialModel::bump_pair(2.0, 1.5, 0.7);
  const auto op = discretize(V, s);
  CHECK(op.size() == 300);
  CHECK(op.dx == doctest::Approx(20.0 / 301));
  CHECK(op.x.front() == doctest::Approx(-10.0 + op.dx));
  CHECK(op.off == doctest::Approx(-0.04 / (op.dx * op.dx)));
  CHECK(op.diag[150].imag() == doctest::Approx(0.1));
  s.mode = DimensionMode::radial;
  CHECK_THROWS_AS(discretize(V, s), ArgumentError);  // line potential, radial operator
  s.mode = DimensionMode::line;
  s.N = 100;
  CHECK_THROWS_AS(discretize(V, s), ArgumentError);
}

TEST_CASE("block power iteration matches a dense SVD") {
  for (auto mode : {DimensionMode::line, DimensionMode::radial}) {
    OperatorSpec s;
    s.mode = mode;
    s.h = 0.3;
    s.E = 0.8;
    s.eps = 0.2;
    s.s = 0.8;
    s.L = 12.0;
    s.N = 400;
    s.l = 1;
    const auto V = mode == DimensionMode::line
                       ? PotentialModel::bump_pair(1.5, 1.5, 0.7)
                       : PotentialModel::compact_bump(1.5, 1.0, 2.0, DimensionMode::radial, BumpProfile::smooth);
    const auto op = discretize(V, s);
    const auto r = weighted_resolvent_norm(op);
    CHECK(r.g == doctest::Approx(dense_norm(op)).epsilon(1e-8));
    CHECK(r.g <= 1.0 / s.eps);
    s.sign = -1;
    CHECK(weighted_resolvent_norm(discretize(V, s)).g == doctest::Approx(r.g).epsilon(1e-10));
  }
}

TEST_CASE("non-convergence is reported") {
  OperatorSpec s;
  s.h = 0.3;
  s.N = 400;
  const auto op = discretize(PotentialModel::free_zero(DimensionMode::line), s);
  NormOptions o;
  o.max_iterations = 2;
  o.rel_tol = 1e-15;
  CHECK_THROWS_AS(weighted_resolvent_norm(op, o), NumericError);
}

TEST_CASE("sweep preconditions") {
  const auto V = PotentialModel::free_zero(DimensionMode::line);
  const std::vector<double> three{0.2, 0.1, 0.05};
  CHECK_THROWS_WITH_AS(h_sweep(V, 1.0, 0.75, EpsRule{}, three, SweepGeometry{}), doctest::Contains("fewer than 5 points"),
                       ArgumentError);
  CHECK_THROWS_AS(resolvent_run(V, 0.1, 1.0, 0.1, 0.5, SweepGeometry{}), ArgumentError);
  CHECK(EpsRule{2.0, 2.0}(0.1) == doctest::Approx(0.02));
}
