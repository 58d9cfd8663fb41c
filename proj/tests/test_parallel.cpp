#include <doctest.h>

#include <cstring>

#include "clab/test_functions.hpp"
#include "clab/grid.hpp"
#include "clab/mollifier.hpp"
#include "clab/parallel.hpp"
#include "clab/potential_classes.hpp"
#include "clab/resolvent.hpp"

using namespace clab;

namespace {
bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}
}  // namespace

TEST_CASE("serial and parallel mollification agree bitwise") {
  const MollifierKernel chi;
  const auto m = EnvelopeFn::log_decay();
  const auto V = PotentialModel::sawtooth_holder(0.5, 1.0, 1.0, m);
  const auto grid = uniform_nodes(0.05, 12.0, 700);
  const double rho = 2.0 / 3.5;
  const auto a = build_smoothed(V, 0.05, rho, HypothesisCase::holder_radial, 1.0, chi, grid, Exec::serial);
  const auto b = build_smoothed(V, 0.05, rho, HypothesisCase::holder_radial, 1.0, chi, grid, Exec::parallel);
  CHECK(bitwise_equal(a.Vh, b.Vh));
  CHECK(bitwise_equal(a.Vh_prime, b.Vh_prime));
  CHECK(bitwise_equal(a.Rh, b.Rh));
}

TEST_CASE("serial and parallel class checks agree bitwise") {
  std::vector<double> g;
  for (double r = 1e-3; r <= 400.0; r *= 1.01) g.push_back(r);
  const auto m = EnvelopeFn::power_decay(0.3);
  const auto V = PotentialModel::sawtooth_holder(1.0, 1.0, 1.0, EnvelopeFn::log_decay());
  for (double y : {1e-4, 1e-2, 0.5})
    CHECK(holder_modulus(V, 1.0, y, m, g, Exec::serial) == holder_modulus(V, 1.0, y, m, g, Exec::parallel));
  CHECK(check_linfty_decay(V, m, g, Exec::serial).c1 == check_linfty_decay(V, m, g, Exec::parallel).c1);
}

TEST_CASE("serial and parallel sweeps agree bitwise") {
  const auto V = PotentialModel::bump_pair(2.0, 1.5, 0.7);
  const std::vector<double> hs{0.4, 0.3, 0.25, 0.2, 0.15};
  SweepGeometry geo;
  geo.L_min = 8.0;
  geo.max_doublings = 1;
  const auto a = h_sweep(V, 0.5, 0.75, EpsRule{}, hs, geo, Exec::serial);
  const auto b = h_sweep(V, 0.5, 0.75, EpsRule{}, hs, geo, Exec::parallel);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].g == b[i].g);
    CHECK(a[i].N == b[i].N);
  }
}

TEST_CASE("exceptions propagate out of parallel loops") {
  CHECK_THROWS_AS(for_each_index(Exec::parallel, 100,
                                 [](std::size_t i) {
                                   if (i == 37) throw std::runtime_error("boom");
                                 }),
                  std::runtime_error);
}
