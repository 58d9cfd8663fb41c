#include <doctest.h>

#include <cmath>

#include "clab/error.hpp"
#include "clab/fit.hpp"

using namespace clab;

namespace {
std::vector<double> hs() { return {0.2, 0.1, 0.05, 0.025, 0.0125}; }
}  // namespace

TEST_CASE("exact exponential recovers C") {
  std::vector<double> g;
  for (double h : hs()) g.push_back(std::exp(0.7 / h + 0.3));
  const auto f = fit_exp_shape(hs(), g, 0.0);
  CHECK(f.slope == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(f.intercept == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK(f.points == 5);
}

TEST_CASE("shape variable with sigma") {
  const double sigma = 1.0 / 3.0;
  CHECK(exp_shape(0.1, sigma) == doctest::Approx(std::pow(0.1, -4.0 / 3.0) * (sigma * std::log(10.0) + 1.0)));
  std::vector<double> g;
  for (double h : hs()) g.push_back(std::exp(0.05 * exp_shape(h, sigma)));
  CHECK(fit_exp_shape(hs(), g, sigma).slope == doctest::Approx(0.05).epsilon(1e-10));
  const std::vector<double> cand{0.0, 1.0 / 6.0, 1.0 / 3.0, 0.5};
  CHECK(select_sigma(hs(), g, cand) == doctest::Approx(sigma));
}

TEST_CASE("loglog exponent") {
  std::vector<double> g;
  for (double h : hs()) g.push_back(std::exp(2.0 * std::pow(h, -1.25)));
  const auto f = fit_loglog(hs(), g);
  CHECK(f.slope == doctest::Approx(1.25).epsilon(1e-10));
  g[0] = 0.9;
  CHECK_THROWS_AS(fit_loglog(hs(), g), DomainError);
}

TEST_CASE("fewer than 5 points") {
  const std::vector<double> h{0.2, 0.1, 0.05}, g{2, 3, 4};
  CHECK_THROWS_WITH_AS(fit_exp_shape(h, g, 0.0), doctest::Contains("fewer than 5 points"), ArgumentError);
  CHECK_THROWS_WITH_AS(fit_loglog(h, g), doctest::Contains("fewer than 5 points"), ArgumentError);
}

TEST_CASE("fit_exponent drops unconverged runs") {
  std::vector<ResolventRun> runs;
  for (double h : {0.2, 0.14, 0.1, 0.07, 0.05, 0.035}) {
    ResolventRun r;
    r.h = h;
    r.g = std::exp(0.4 / h);
    r.converged = true;
    runs.push_back(r);
  }
  runs[2].g = 1e9;
  runs[2].converged = false;
  const auto p = fit_exponent(runs, 0.0);
  CHECK(p.shape.points == 5);
  CHECK(p.shape.slope == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(p.loglog_valid);
}
