#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace clab {

/// Nondecreasing node list. A construction with a jump (the weight derivative
/// at r = a) stores the jump abscissa twice: `jump` indexes the left copy,
/// `jump + 1` the right copy.
struct Grid {
  std::vector<double> x;
  std::optional<std::size_t> jump;

  std::size_t size() const { return x.size(); }
  double operator[](std::size_t i) const { return x[i]; }
  std::span<const double> nodes() const { return x; }
  bool is_jump_left(std::size_t i) const { return jump && i == *jump; }
  bool is_jump_right(std::size_t i) const { return jump && i == *jump + 1; }
  double front() const { return x.front(); }
  double back() const { return x.back(); }
};

/// n points, endpoints included.
Grid uniform_grid(double lo, double hi, std::size_t n);

/// Geometric sequence lo, lo*q, ..., ending at hi (n points, n >= 2).
std::vector<double> geometric_sequence(double lo, double hi, std::size_t n);

struct RadialGridSpec {
  double r_min = 1e-4;
  double uniform_end = 4.0;    // uniform spacing on [r_min, uniform_end]
  double uniform_step = 0.01;
  double ratio = 1.01;         // geometric growth of spacing beyond uniform_end
  double r_max = 100.0;
  std::optional<double> jump;  // forced duplicated node
};

/// Geometric-plus-uniform hybrid on [r_min, r_max].
Grid radial_grid(const RadialGridSpec& spec);

/// Radial grid with approximately `n` points and a duplicated node at `jump`.
Grid radial_grid_with_count(double r_min, double r_max, std::size_t n,
                            std::optional<double> jump);

/// Symmetric grid on [-x_max, x_max] containing 0: uniform spacing up to
/// `uniform_end`, geometric beyond.
Grid line_grid(double x_max, double uniform_end, double uniform_step, double ratio);

}  // namespace clab
