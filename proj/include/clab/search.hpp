#pragma once

#include <span>
#include <string>
#include <vector>

#include "clab/carleman.hpp"
#include "clab/certificate.hpp"
#include "clab/mollifier.hpp"
#include "clab/parallel.hpp"

namespace clab {

struct SearchOptions {
  double tau0_start = 1.0;
  double tau0_factor = 2.0;
  int tau0_steps = 11;        // 1 .. 2^10
  double a0_factor = 2.0;
  int a0_steps = 16;
  double delta_start = 1.0;   // 1D weight scale ladder (descending)
  double delta_factor = 0.5;
  int delta_steps = 30;
  int delta_bisections = 12;
  std::size_t n_points = 2000;
  double h0_factor = 1.4142135623730951;  // upward extension ladder for h0
  double h0_cap = 1.0;
};

/// One (params, h) evaluation of the margin. pass requires the margin and both
/// links of the bracket chain.
struct MarginProbe {
  double h = 0.0;
  double min_margin = 0.0;
  double argmin_r = 0.0;
  bool pass = false;
};

struct SearchResult {
  bool success = false;
  ConstructionParams params;  // h set to the smallest grid value
  double tau0 = 0.0, a0 = 0.0, delta = 0.0;
  double h0 = 0.0;            // largest h with a nonnegative margin (grid plus upward ladder)
  std::vector<MarginProbe> probes;  // at the accepted parameters, one per h in the grid
  double worst_margin = 0.0;  // failure report: worst margin of the last candidate tried
  double worst_r = 0.0;
  double worst_h = 0.0;
  int evaluations = 0;
  std::string message;
};

struct SearchInput {
  HypothesisCase condition = HypothesisCase::Linfty_decay;
  double alpha = 0.0;
  double E = 1.0;
  double E_infty = 0.0;
  double K = 6.0;
  double eta = 0.5;
};

/// Evaluates the margin for fixed parameters at one h (construction + smoothing +
/// key_margin on the construction grid).
MarginProbe probe_margin(const ConstructionParams& p, const PotentialModel& V, const EnvelopeFn& m,
                         const ClassCertificate& cert, const MollifierKernel& chi,
                         std::size_t n_points);

/// Smallest tau0 in a geometric ladder (then a0 starting at max(1, R_E + 1); in 1D
/// the largest delta on a descending ladder refined by bisection) for which the
/// margin is nonnegative for every h in h_grid. Never throws on ladder exhaustion;
/// the result then carries success = false and the worst margin location.
SearchResult search_constants(const SearchInput& in, const PotentialModel& V, const EnvelopeFn& m,
                              const ClassCertificate& cert, const MollifierKernel& chi,
                              std::span<const double> h_grid, const SearchOptions& opt = {});

}  // namespace clab
