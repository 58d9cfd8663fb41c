#include "clab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "clab/error.hpp"

namespace clab {

Grid uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw ArgumentError("uniform_grid: need n >= 2 and hi > lo");
  Grid g;
  g.x.resize(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g.x[i] = lo + step * static_cast<double>(i);
  g.x.back() = hi;
  return g;
}

std::vector<double> geometric_sequence(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0.0) || !(hi > 0.0))
    throw ArgumentError("geometric_sequence: need n >= 2 and positive endpoints");
  std::vector<double> out(n);
  const double q = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo * std::exp(q * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {

void insert_jump(Grid& g, double a) {
  if (!(a > g.x.front() && a < g.x.back()))
    throw ArgumentError("grid: forced node outside grid range");
  auto it = std::lower_bound(g.x.begin(), g.x.end(), a);
  // Drop a neighbour that would create a uselessly short interval.
  const double tiny = 1e-9 * std::max(1.0, a);
  if (it != g.x.end() && std::abs(*it - a) < tiny) it = g.x.erase(it);
  if (it != g.x.begin() && std::abs(*(it - 1) - a) < tiny) it = g.x.erase(it - 1);
  const auto pos = static_cast<std::size_t>(it - g.x.begin());
  g.x.insert(it, {a, a});
  g.jump = pos;
}

}  // namespace

Grid radial_grid(const RadialGridSpec& spec) {
  if (!(spec.r_min > 0.0) || !(spec.r_max > spec.r_min) || !(spec.uniform_step > 0.0) ||
      !(spec.ratio > 1.0))
    throw ArgumentError("radial_grid: invalid specification");
  Grid g;
  double r = spec.r_min;
  g.x.push_back(r);
  const double uniform_end = std::min(spec.uniform_end, spec.r_max);
  const auto n_uniform =
      static_cast<std::size_t>(std::ceil((uniform_end - spec.r_min) / spec.uniform_step));
  for (std::size_t i = 1; i <= n_uniform; ++i) {
    r = spec.r_min + (uniform_end - spec.r_min) * static_cast<double>(i) /
                         static_cast<double>(n_uniform);
    g.x.push_back(r);
  }
  double step = spec.uniform_step;
  while (r < spec.r_max) {
    step *= spec.ratio;
    r = std::min(r + step, spec.r_max);
    if (spec.r_max - r < 0.25 * step) r = spec.r_max;
    g.x.push_back(r);
  }
  if (spec.jump) insert_jump(g, *spec.jump);
  return g;
}

Grid radial_grid_with_count(double r_min, double r_max, std::size_t n,
                            std::optional<double> jump) {
  // Uniform spacing up to r = 4, geometric beyond, with the split chosen so the
  // total is close to n.
  if (n < 16) throw ArgumentError("radial_grid_with_count: need n >= 16");
  const double uniform_end = std::min(4.0, 0.5 * r_max);
  const std::size_t n_uniform = n / 2;
  const double step = (uniform_end - r_min) / static_cast<double>(n_uniform);
  const std::size_t n_geo = n - n_uniform - 1;
  // Solve step * sum_{k=1..n_geo} q^k = r_max - uniform_end for q by bisection.
  const double span = r_max - uniform_end;
  double lo = 1.0 + 1e-12, hi = 2.0;
  auto covered = [&](double q) {
    return step * q * (std::pow(q, static_cast<double>(n_geo)) - 1.0) / (q - 1.0);
  };
  if (covered(lo) > span) {
    RadialGridSpec s{r_min, uniform_end, step, 1.0 + 1e-9, r_max, jump};
    return radial_grid(s);
  }
  while (covered(hi) < span) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (covered(mid) < span ? lo : hi) = mid;
  }
  RadialGridSpec s{r_min, uniform_end, step, hi, r_max, jump};
  return radial_grid(s);
}

Grid line_grid(double x_max, double uniform_end, double uniform_step, double ratio) {
  if (!(x_max > 0.0) || !(uniform_step > 0.0) || !(ratio >= 1.0))
    throw ArgumentError("line_grid: invalid specification");
  std::vector<double> half{0.0};
  double x = 0.0;
  const double ue = std::min(uniform_end, x_max);
  const auto n_uniform = static_cast<std::size_t>(std::ceil(ue / uniform_step));
  for (std::size_t i = 1; i <= n_uniform; ++i) {
    x = ue * static_cast<double>(i) / static_cast<double>(n_uniform);
    half.push_back(x);
  }
  double step = ue / static_cast<double>(std::max<std::size_t>(n_uniform, 1));
  while (x < x_max) {
    step *= ratio;
    x = std::min(x + step, x_max);
    if (x_max - x < 0.25 * step) x = x_max;
    half.push_back(x);
  }
  Grid g;
  g.x.reserve(2 * half.size() - 1);
  for (auto it = half.rbegin(); it != half.rend(); ++it)
    if (*it > 0.0) g.x.push_back(-*it);
  for (double v : half) g.x.push_back(v);
  return g;
}

}  // namespace clab
