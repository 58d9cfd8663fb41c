#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace clab {

enum class TestFamily { gaussian_bump, hermite_packet, random_band_limited };

std::string to_string(TestFamily f);

struct TestParams {
  double center = 0.0;
  double width = 1.0;      // Gaussian standard deviation
  double wavenumber = 0.0; // carrier e^{ikx}
  int order = 0;           // Hermite order
  // random_band_limited: sum of `modes` complex exponentials with wavenumbers
  // in [k_lo, k_hi] under the Gaussian envelope
  int modes = 8;
  double k_lo = 0.0, k_hi = 4.0;
  std::uint64_t seed = 1;
};

/// Complex test function with analytic first and second derivatives sampled on
/// a grid. Gaussian envelopes are numerically compactly supported: the window
/// should extend at least 8 widths from the center.
struct TestFunction {
  TestFamily family = TestFamily::gaussian_bump;
  TestParams params;
  std::vector<double> x;
  std::vector<std::complex<double>> u, du, d2u;

  std::size_t size() const { return x.size(); }
};

TestFunction make_test_function(TestFamily family, const TestParams& params,
                                std::span<const double> x);

/// Ten (or `count`) random band-limited functions with seeds seed, seed+1, ...
std::vector<TestFunction> random_test_batch(const TestParams& base, std::size_t count,
                                            std::span<const double> x);

/// Uniform grid with n points on [lo, hi].
std::vector<double> uniform_nodes(double lo, double hi, std::size_t n);

}  // namespace clab
