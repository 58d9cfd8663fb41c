#include <doctest.h>

#include <cmath>
#include <complex>

#include "clab/certificate.hpp"
#include "clab/grid.hpp"
#include "clab/search.hpp"
#include "clab/test_functions.hpp"

using namespace clab;

namespace {

std::vector<double> rgrid() {
  std::vector<double> g;
  for (double r = 1e-3; r <= 400.0; r *= 1.01) g.push_back(r);
  return g;
}

struct BumpSetup {
  EnvelopeFn m = EnvelopeFn::power_decay(0.3);
  PotentialModel V = PotentialModel::compact_bump(2.0, 1.0, 2.0, DimensionMode::radial, BumpProfile::smooth);
  MollifierKernel chi;
  ClassCertificate cert = certify_class(V, m, {HypothesisCase::holder_radial, 0.5, 1.0, 0.0, 50.0}, rgrid(),
                                        default_y_grid());
  ConstructionParams p(double h) const {
    return make_params(HypothesisCase::holder_radial, 0.5, 0.5, 8.0, 46.5, 6.0, h, 1.0, 0.0, 1.0, cert.R_EV);
  }
};

}  // namespace

TEST_CASE("A and B from their definitions") {
  BumpSetup s;
  const auto p = s.p(0.05);
  const auto prof = construct_profile(p, s.m, 1500);
  const auto sp = build_smoothed(s.V, p.h, p.rho, p.condition, s.cert.delta_V, s.chi, prof.grid.nodes());
  const auto ab = compute_AB(prof, sp, 1.0);
  for (std::size_t i = 0; i < prof.size(); i += 7) {
    const double W = prof.Wcal[i], fp = prof.phi_prime[i], f2 = prof.phi_second[i];
    const double A = 1.0 + fp * fp - sp.Vh[i] + W * (2 * fp * f2 - sp.Vh_prime[i]);
    const double X = std::abs(sp.Rh[i]) / p.h + f2;
    const double B = W * W * X * X / (1.0 + 4.0 * fp * W / p.h);
    CHECK(ab.A_over_wp[i] == doctest::Approx(A).epsilon(1e-10));
    CHECK(ab.B_over_wp[i] == doctest::Approx(B).epsilon(1e-10));
  }
  SmoothedPotential other = sp;
  other.r.pop_back();
  CHECK_THROWS(compute_AB(prof, other, 1.0));
}

TEST_CASE("key margin passes for searched constants and fails for a tall bump") {
  BumpSetup s;
  const auto p = s.p(0.05);
  const auto prof = construct_profile(p, s.m, 2000);
  const auto sp = build_smoothed(s.V, p.h, p.rho, p.condition, s.cert.delta_V, s.chi, prof.grid.nodes());
  const auto rep = key_margin(prof, sp, 1.0, 0.0, 6.0);
  CHECK(rep.pass);
  CHECK(rep.chain_algebra_ok);
  CHECK(rep.target == doctest::Approx(0.5));

  const auto tall = PotentialModel::compact_bump(20.0, 1.0, 2.0, DimensionMode::radial, BumpProfile::smooth);
  const auto ct = certify_class(tall, s.m, {HypothesisCase::holder_radial, 1.0, 1.0, 0.0, 1.0}, rgrid(),
                                default_y_grid());
  const auto q = make_params(HypothesisCase::holder_radial, 1.0, 0.5, 1.0, 1.0, 6.0, 0.05, 1.0, 0.0, 1.0, ct.R_EV);
  const auto pt = construct_profile(q, s.m, 2000);
  const auto st = build_smoothed(tall, q.h, q.rho, q.condition, ct.delta_V, s.chi, pt.grid.nodes());
  const auto bad = key_margin(pt, st, 1.0, 0.0, 6.0);
  CHECK_FALSE(bad.pass);
  CHECK(bad.argmin_in_psi_support);
  CHECK(bad.argmin_r > 1.0);
  CHECK(bad.argmin_r < 2.0);
}

TEST_CASE("energy functional and integration by parts") {
  BumpSetup s;
  const auto x = uniform_nodes(0.2, 6.0, 4001);
  const auto f = sample_fields(s.p(0.1), s.m, s.V, s.cert, s.chi, x);
  TestParams tp;
  tp.center = 3.1;
  tp.width = 0.35;
  tp.wavenumber = 1.5;
  const auto u = make_test_function(TestFamily::gaussian_bump, tp, x);
  const auto F = energy_functional(u, f, 1.0, 0.0);
  for (std::size_t i = 0; i < x.size(); i += 97) {
    const double expect = f.h * f.h * std::norm(u.du[i]) -
                          (f.Vh[i] - f.phi_prime[i] * f.phi_prime[i] - 1.0) * std::norm(u.u[i]);
    CHECK(F[i] == doctest::Approx(expect).epsilon(1e-12).scale(1e-300));
  }
  // trapezoid error is second order in the spacing
  const double e1 = integration_by_parts_residual(u, f);
  const auto x2 = uniform_nodes(0.2, 6.0, 8001);
  const auto f2 = sample_fields(s.p(0.1), s.m, s.V, s.cert, s.chi, x2);
  const double e2 = integration_by_parts_residual(make_test_function(TestFamily::gaussian_bump, tp, x2), f2);
  CHECK(e1 < 1e-4);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("identity residual is second order") {
  BumpSetup s;
  std::vector<double> res;
  for (std::size_t N : {1000, 2000}) {
    const auto x = uniform_nodes(0.2, 6.0, N);
    const auto f = sample_fields(s.p(0.1), s.m, s.V, s.cert, s.chi, x);
    TestParams tp;
    tp.center = 3.1;
    tp.width = 0.35;
    const auto u = make_test_function(TestFamily::gaussian_bump, tp, x);
    res.push_back(wF_derivative_identity(u, f, 1.0, 0.1, 1, 0.0).residual);
  }
  CHECK(std::log2(res[0] / res[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("integrated check is invariant under scaling u") {
  BumpSetup s;
  const auto x = uniform_nodes(0.2, 6.0, 2048);
  const auto f = sample_fields(s.p(0.1), s.m, s.V, s.cert, s.chi, x);
  TestParams tp;
  tp.center = 3.1;
  tp.width = 0.35;
  tp.seed = 5;
  auto batch = random_test_batch(tp, 3, x);
  const auto a = integrated_carleman_check(batch, f, 1.0, 0.0, 0.1, 1, 0.5, 0.0);
  const std::complex<double> lam(2.0, -1.5);
  for (auto& t : batch) {
    for (auto* v : {&t.u, &t.du, &t.d2u})
      for (auto& z : *v) z *= lam;
  }
  const auto b = integrated_carleman_check(batch, f, 1.0, 0.0, 0.1, 1, 0.5, 0.0);
  CHECK(a.all_hold == b.all_hold);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(b.samples[i].lhs == doctest::Approx(std::norm(lam) * a.samples[i].lhs).epsilon(1e-12));
    CHECK(b.samples[i].multiplier == doctest::Approx(a.samples[i].multiplier).epsilon(1e-12));
    CHECK(b.samples[i].derivative_bound_holds == a.samples[i].derivative_bound_holds);
  }
}

TEST_CASE("search reports failure instead of throwing") {
  BumpSetup s;
  SearchOptions opt;
  opt.tau0_steps = 1;  // tau0 = 1 only
  opt.a0_steps = 1;
  const auto tall = PotentialModel::compact_bump(20.0, 1.0, 2.0, DimensionMode::radial, BumpProfile::smooth);
  const auto ct = certify_class(tall, s.m, {HypothesisCase::holder_radial, 1.0, 1.0, 0.0, 1.0}, rgrid(),
                                default_y_grid());
  const std::vector<double> hs{0.1, 0.05};
  const auto res = search_constants({HypothesisCase::holder_radial, 1.0, 1.0, 0.0, 6.0, 0.5}, tall, s.m, ct, s.chi,
                                    hs, opt);
  CHECK_FALSE(res.success);
  CHECK(res.worst_margin < 0.0);
}
