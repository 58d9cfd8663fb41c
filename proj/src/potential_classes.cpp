#include "clab/potential_classes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clab/error.hpp"
#include "clab/grid.hpp"

namespace clab {

namespace {

double japanese(double r) { return std::sqrt(1.0 + r * r); }

double max_of(const std::vector<double>& v) {
  double out = 0.0;
  for (double x : v) out = std::max(out, x);
  return out;
}

std::vector<double> sorted_ascending(std::span<const double> y) {
  std::vector<double> out(y.begin(), y.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::string to_string(HypothesisCase c) {
  switch (c) {
    case HypothesisCase::Linfty_decay: return "linfty";
    case HypothesisCase::holder_radial: return "holder_radial";
    case HypothesisCase::holder_1d: return "holder_1d";
  }
  return "?";
}

HypothesisCase hypothesis_case_from_string(const std::string& s) {
  if (s == "linfty" || s == "Linfty_decay") return HypothesisCase::Linfty_decay;
  if (s == "holder_radial") return HypothesisCase::holder_radial;
  if (s == "holder_1d") return HypothesisCase::holder_1d;
  throw ArgumentError("unknown case '" + s + "' (expected linfty, holder_radial or holder_1d)");
}

LinftyCheck check_linfty_decay(const PotentialModel& V, const EnvelopeFn& m,
                               std::span<const double> grid, Exec exec) {
  if (grid.empty()) throw ArgumentError("check_linfty_decay: empty grid");
  std::vector<double> ratio(grid.size());
  for_each_index(exec, grid.size(), [&](std::size_t i) {
    const double r = grid[i];
    const double mr = m(r);
    if (!(mr > 0.0)) throw NumericError("degenerate envelope: m(r) = 0 at r = " + std::to_string(r), r);
    const double j = japanese(r);
    ratio[i] = std::abs(V.eval(r)) * j * j / mr;
  });
  double r_max = 0.0;
  for (double r : grid) r_max = std::max(r_max, std::abs(r));
  LinftyCheck out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out.c1 = std::max(out.c1, ratio[i]);
    if (std::abs(grid[i]) < 0.1 * r_max)
      out.c1_inner = std::max(out.c1_inner, ratio[i]);
    else
      out.c1_outer = std::max(out.c1_outer, ratio[i]);
  }
  out.passes = std::isfinite(out.c1) && out.c1_outer <= out.c1_inner;
  return out;
}

namespace {

// Grid plus points placed so that [r, r + y] (or [x - y, x + y]) straddles or
// touches each breakpoint of V: a fixed grid misses jumps and kinks at small y.
std::vector<double> with_breakpoint_probes(const PotentialModel& V, std::span<const double> grid,
                                           double y, bool radial) {
  std::vector<double> pts(grid.begin(), grid.end());
  if (grid.empty()) return pts;
  const auto [lo, hi] = std::minmax_element(grid.begin(), grid.end());
  for (double b : V.breakpoints(*lo, *hi)) {
    for (double r : {b, b - 0.5 * y, b - y, b + 0.5 * y}) {
      if (radial && !(r > 0.0)) continue;
      pts.push_back(r);
    }
  }
  return pts;
}

}  // namespace

double holder_modulus(const PotentialModel& V, double alpha, double y, const EnvelopeFn& m,
                      std::span<const double> grid_in, Exec exec) {
  if (!(y > 0.0)) throw ArgumentError("holder_modulus: y must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ArgumentError("holder_modulus: alpha must lie in [0,1]");
  const double ya = std::pow(y, alpha);
  const auto grid = with_breakpoint_probes(V, grid_in, y, true);
  std::vector<double> q(grid.size());
  for_each_index(exec, grid.size(), [&](std::size_t i) {
    const double r = grid[i];
    const double mr = m(r);
    const double j = japanese(r);
    q[i] = std::abs(V.eval(r) - V.eval(r + y)) / ya * j * j * j / (mr * mr);
  });
  return max_of(q);
}

double holder_modulus_1d(const PotentialModel& V, double y, const EnvelopeFn& m0,
                         std::span<const double> grid_in, Exec exec) {
  if (!(y > 0.0)) throw ArgumentError("holder_modulus_1d: y must be positive");
  const auto grid = with_breakpoint_probes(V, grid_in, y, false);
  std::vector<double> q(grid.size());
  for_each_index(exec, grid.size(), [&](std::size_t i) {
    const double x = grid[i];
    const double v = V.eval(x);
    const double d = std::max(std::abs(v - V.eval(x + y)), std::abs(v - V.eval(x - y)));
    q[i] = d / m0(std::abs(x));
  });
  return max_of(q);
}

std::vector<double> default_y_grid(double y_min, double y_max, std::size_t n) {
  return geometric_sequence(y_min, y_max, n);
}

namespace {

template <class Modulus>
ThresholdScan threshold_scan(Modulus&& modulus, double threshold, std::span<const double> y_grid) {
  if (y_grid.empty()) throw ArgumentError("threshold scan: empty y_grid");
  ThresholdScan out;
  out.y = sorted_ascending(y_grid);
  out.modulus.reserve(out.y.size());
  for (double y : out.y) out.modulus.push_back(modulus(y));
  for (std::size_t k = 0; k < out.y.size(); ++k) {
    if (out.modulus[k] >= threshold) {
      out.value = out.y[k];
      const double gap = std::abs(out.modulus[k] - threshold);
      out.boundary_hit = k == 0 || gap <= 1e-12 * std::max(threshold, 1e-300);
      return out;
    }
  }
  out.value = out.y.back();
  out.lower_bound_only = true;
  return out;
}

}  // namespace

ThresholdScan compute_delta_V(const PotentialModel& V, double alpha, double c2,
                              const EnvelopeFn& m, std::span<const double> grid,
                              std::span<const double> y_grid, Exec exec) {
  return threshold_scan([&](double y) { return holder_modulus(V, alpha, y, m, grid, exec); },
                        2.0 * c2, y_grid);
}

double holder_limsup(const PotentialModel& V, double alpha, const EnvelopeFn& m,
                     std::span<const double> grid, std::span<const double> y_grid, Exec exec) {
  if (y_grid.empty()) throw ArgumentError("holder_limsup: empty y_grid");
  const auto y = sorted_ascending(y_grid);
  double out = 0.0;
  for (double v : y) {
    if (v > 10.0 * y.front()) break;
    out = std::max(out, holder_modulus(V, alpha, v, m, grid, exec));
  }
  return out;
}

TailSup compute_V_infty(const PotentialModel& V, std::span<const double> grid) {
  if (grid.empty()) throw ArgumentError("compute_V_infty: empty grid");
  double r_max = 0.0;
  for (double r : grid) r_max = std::max(r_max, std::abs(r));
  TailSup out{-std::numeric_limits<double>::infinity(), 0.5 * r_max, r_max};
  for (double r : grid)
    if (std::abs(r) >= out.window_lo) out.value = std::max(out.value, V.eval(r));
  return out;
}

double compute_R_EV(const PotentialModel& V, double E, double V_infty,
                    std::span<const double> grid) {
  if (!(E > V_infty)) throw ArgumentError("compute_R_EV: need E > V_infty");
  const double threshold = 0.25 * (E + 3.0 * V_infty);
  double out = 0.0;
  for (double r : grid)
    if (V.eval(r) >= threshold) out = std::max(out, std::abs(r));
  return out;
}

Holder1dCheck check_holder_1d(const PotentialModel& V, const EnvelopeFn& m0,
                              std::span<const double> grid, std::span<const double> y_grid,
                              double declared_c0, Exec exec) {
  if (y_grid.empty()) throw ArgumentError("check_holder_1d: empty y_grid");
  Holder1dCheck out;
  const auto y = sorted_ascending(y_grid);
  for (double v : y) {
    if (v > 10.0 * y.front()) break;
    out.c0_estimate = std::max(out.c0_estimate, holder_modulus_1d(V, v, m0, grid, exec));
  }
  out.c0 = std::max(out.c0_estimate, declared_c0);
  out.delta0 = threshold_scan([&](double v) { return holder_modulus_1d(V, v, m0, grid, exec); },
                              2.0 * out.c0, y_grid);
  return out;
}

ClassCertificate certify_class(const PotentialModel& V, const EnvelopeFn& m,
                               const ClassQuery& q, std::span<const double> grid,
                               std::span<const double> y_grid, Exec exec) {
  if (!(q.alpha >= 0.0 && q.alpha <= 1.0)) throw ArgumentError("alpha must lie in [0,1]");
  if (!(q.E > q.E_infty)) throw HypothesisError("need E > E_infty");
  ClassCertificate c;
  c.condition = q.condition;
  c.alpha = q.alpha;
  c.E = q.E;
  c.E_infty = q.E_infty;
  c.C_V = V.sup_bound();
  c.tail = compute_V_infty(V, grid);
  c.V_infty = c.tail.value;
  if (c.V_infty > q.E_infty)
    throw HypothesisError("V_infty = " + std::to_string(c.V_infty) + " exceeds E_infty = " +
                          std::to_string(q.E_infty));
  c.R_EV = compute_R_EV(V, q.E, c.V_infty, grid);
  switch (q.condition) {
    case HypothesisCase::Linfty_decay: {
      const auto chk = check_linfty_decay(V, m, grid, exec);
      if (!chk.passes)
        throw HypothesisError("|V| <r>^2 / m grows toward the end of the grid (c1 = " +
                              std::to_string(chk.c1) + ")");
      c.c_estimate = chk.c1;
      c.c_const = std::max(chk.c1, q.declared_c);
      c.delta_V = 1.0;
      break;
    }
    case HypothesisCase::holder_radial: {
      c.c_estimate = holder_limsup(V, q.alpha, m, grid, y_grid, exec);
      c.c_const = std::max(c.c_estimate, q.declared_c);
      if (!(c.c_const > 0.0)) {
        // V constant on the grid: any positive c2 works.
        c.c_const = 1.0;
      }
      const auto scan = compute_delta_V(V, q.alpha, c.c_const, m, grid, y_grid, exec);
      c.delta_V = scan.value;
      c.delta_lower_bound_only = scan.lower_bound_only;
      break;
    }
    case HypothesisCase::holder_1d: {
      auto chk = check_holder_1d(V, m, grid, y_grid, q.declared_c, exec);
      c.c_estimate = chk.c0_estimate;
      c.c_const = chk.c0 > 0.0 ? chk.c0 : 1.0;
      if (chk.c0 <= 0.0)
        chk.delta0 = threshold_scan(
            [&](double v) { return holder_modulus_1d(V, v, m, grid, exec); }, 2.0 * c.c_const, y_grid);
      c.delta_V = chk.delta0.value;
      c.delta_lower_bound_only = chk.delta0.lower_bound_only;
      break;
    }
  }
  return c;
}

}  // namespace clab
