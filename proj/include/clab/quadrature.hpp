#pragma once

// Adaptive Gauss-Kronrod quadrature (G7/K15 pairs, global bisection of the
// worst interval) plus a tail rule for slowly decaying integrands on [R, inf).

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "clab/error.hpp"

namespace clab::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

struct Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
  int max_intervals = 4000;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& o) const { return error < o.error; }
};

}  // namespace detail

/// One G7/K15 panel. Error is |K15 - G7| (no QUADPACK rescaling, which is
/// optimistic for non-smooth integrands).
template <class F>
Result gauss_kronrod(F&& f, double a, double b) {
  using namespace detail;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  Result r;
  r.value = kronrod * half;
  r.error = std::abs((kronrod - gauss) * half);
  r.evaluations = 15;
  return r;
}

/// Adaptive integral over [a, b] split at the given interior breakpoints.
/// Throws NumericError (carrying the residual error estimate) when the
/// interval budget is exhausted before the tolerance is met.
template <class F>
Result adaptive(F&& f, std::span<const double> nodes, const Options& opt = {}) {
  using detail::Piece;
  std::priority_queue<Piece> heap;
  Result total;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!(nodes[i + 1] > nodes[i])) continue;
    Result r = gauss_kronrod(f, nodes[i], nodes[i + 1]);
    heap.push({nodes[i], nodes[i + 1], r.value, r.error});
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
  }
  int intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    const double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total.value));
    if (total.error <= target) break;
    Piece worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    // Interval no longer splittable in floating point: accept as is.
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 64 * std::numeric_limits<double>::epsilon() *
                                  std::max(1.0, std::abs(mid))) {
      heap.pop();
      continue;
    }
    if (intervals >= opt.max_intervals) {
      throw NumericError("adaptive quadrature did not converge (error estimate " +
                             std::to_string(total.error) + ")",
                         total.error);
    }
    heap.pop();
    Result left = gauss_kronrod(f, worst.a, mid);
    Result right = gauss_kronrod(f, mid, worst.b);
    total.value += left.value + right.value - worst.value;
    total.error += left.error + right.error - worst.error;
    total.evaluations += left.evaluations + right.evaluations;
    heap.push({worst.a, mid, left.value, left.error});
    heap.push({mid, worst.b, right.value, right.error});
    ++intervals;
  }
  // Re-sum to remove drift from incremental updates.
  double value = 0.0, error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  total.value = value;
  total.error = error;
  return total;
}

template <class F>
Result adaptive(F&& f, double a, double b, const Options& opt = {}) {
  if (a == b) return {};
  if (a > b) {
    Result r = adaptive(f, b, a, opt);
    r.value = -r.value;
    return r;
  }
  const double nodes[2] = {a, b};
  return adaptive(f, std::span<const double>(nodes, 2), opt);
}

/// Integral of f over [R, inf) for f decaying at least like 1/(s log^2 s).
/// The caller supplies log f as a function of L = log(1 + s); the rule
/// substitutes v = 1/L so that the transformed integrand stays bounded at v = 0.
template <class LogF>
Result tail_log(LogF&& log_f_at_L, double R, const Options& opt = {}) {
  const double v_max = 1.0 / std::log1p(R);
  auto g = [&](double v) {
    const double L = 1.0 / v;
    // ds = e^L dL,  dL = -dv / v^2
    return std::exp(log_f_at_L(L) + L - 2.0 * std::log(v));
  };
  return adaptive(g, 0.0, v_max, opt);
}

/// Running integrals F[i] = int_{x[0]}^{x[i]} f over a nondecreasing node list.
/// Zero-length intervals (duplicated nodes) contribute nothing.
template <class F>
std::vector<double> cumulative(F&& f, std::span<const double> x, const Options& opt = {}) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i)
    out[i] = out[i - 1] + (x[i] > x[i - 1] ? adaptive(f, x[i - 1], x[i], opt).value : 0.0);
  return out;
}

}  // namespace clab::quad
