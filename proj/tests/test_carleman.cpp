#include <doctest.h>

#include <cmath>

#include "clab/carleman.hpp"
#include "clab/error.hpp"

using namespace clab;

TEST_CASE("cutoffs") {
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
  CHECK(omega_cutoff(0.5) == 1.0);
  CHECK(omega_cutoff(0.7) == 0.0);
  CHECK(omega_cutoff(-0.5) == 1.0);
  CHECK(psi_cutoff(2.0, 2.0) == 1.0);
  CHECK(psi_cutoff(2.9, 2.0) == 0.0);
  double prev = 1.0;
  for (double r = 0.5; r <= 0.75; r += 0.01) {
    CHECK(omega_cutoff(r) <= prev);
    prev = omega_cutoff(r);
  }
}

TEST_CASE("parameters") {
  const auto p = make_params(HypothesisCase::holder_radial, 0.5, 0.5, 4.0, 2.0, 6.0, 0.05, 1.0, 0.0);
  const double sigma = (1 - 0.5) / 3.5;
  CHECK(p.sigma == doctest::Approx(sigma));
  CHECK(p.rho == doctest::Approx(2 / 3.5));
  CHECK(p.M == doctest::Approx(2 * sigma / (2 - 0.5)));
  CHECK(p.a == doctest::Approx(2.0 * std::pow(0.05, -p.M)));
  const auto q = make_params(HypothesisCase::Linfty_decay, 0.7, 0.5, 1.0, 1.0, 6.0, 0.1, 1.0, 0.0);
  CHECK(q.alpha == 0.0);
  CHECK(q.rho == 1.0);
  CHECK_THROWS_AS(make_params(HypothesisCase::holder_radial, 0.5, 1.5, 1, 1, 6, 0.1, 1, 0), ArgumentError);
  CHECK_THROWS_AS(make_params(HypothesisCase::holder_radial, 0.5, 0.5, 0.5, 1, 6, 0.1, 1, 0), ArgumentError);
  CHECK_THROWS_AS(make_params(HypothesisCase::holder_radial, 0.5, 0.5, 1, 1, 6, 0.1, 1, 2), ArgumentError);
}

TEST_CASE("radial profile identities") {
  const auto m = EnvelopeFn::power_decay(0.3);
  const auto p = make_params(HypothesisCase::holder_radial, 0.0, 0.5, 4.0, 2.0, 6.0, 0.1, 1.0, 0.0);
  const auto prof = construct_profile(p, m, 3000);
  CHECK(prof.max_mismatch_w < 1e-8);
  CHECK(prof.max_mismatch_phi0p < 1e-8);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    CHECK(prof.w_prime[i] == doctest::Approx(prof.w[i] / prof.Wcal[i]).epsilon(1e-12));
    CHECK(prof.phi_prime[i] > 0.0);
    if (prof.r(i) <= 0.5) CHECK(prof.w[i] == doctest::Approx(prof.r(i)).epsilon(1e-12));
  }
  // phi' = h^{-sigma} phi0'
  CHECK(prof.phi_prime[10] == doctest::Approx(std::pow(p.h, -p.sigma) * prof.phi0_prime[10]).epsilon(1e-12));
  // one-sided values at the duplicated node: w continuous, W jumps
  std::size_t ja = 0;
  for (std::size_t i = 0; i < prof.size(); ++i)
    if (prof.at_jump_left(i)) ja = i;
  REQUIRE(prof.at_jump_right(ja + 1));
  CHECK(prof.w[ja] == doctest::Approx(prof.w[ja + 1]).epsilon(1e-12));
  CHECK(prof.Wcal[ja + 1] == doctest::Approx(0.5 * std::pow(p.a + 1, 1.5)).epsilon(1e-12));
  CHECK(verify_profile_bounds(prof).pass);
}

TEST_CASE("1D profile") {
  const auto m0 = EnvelopeFn::one_over_rlog2();
  const auto p = make_params(HypothesisCase::holder_1d, 0.0, 0.5, 2.0, 1.0, 6.0, 0.05, 1.0, 0.0, 0.1);
  const auto prof = construct_profile(p, m0, 4000);
  const auto b = verify_profile_bounds(prof);
  CHECK(b.pass);
  CHECK(b.phi_sup <= 2.0);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    CHECK(prof.log_w[i] <= 1e-12);
    // phi' = -phi'' (|x|+1)/(2 sgn x): phi' ~ tau0 / (|x|+1)^2
    CHECK(prof.phi_prime[i] == doctest::Approx(2.0 / std::pow(std::abs(prof.r(i)) + 1.0, 2)).epsilon(1e-6));
  }
}

TEST_CASE("lemma sandwich on a simple Phi1") {
  // Phi1 = (s+1)^2 / (1 + s^2) * 0.1 has norm 0.1 * pi / 2
  auto Phi1 = [](double s) { return 0.1 * (s + 1) * (s + 1) / (1 + s * s); };
  std::vector<double> g;
  for (double r = 1e-3; r < 1e4; r *= 1.05) g.push_back(r);
  const auto rep = lemma_phi_check(Phi1, g, 0.1 * M_PI / 2);
  CHECK(rep.holds);
  CHECK(rep.min_slack >= -1e-12);
}
