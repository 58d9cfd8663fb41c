#pragma once

#include <span>
#include <string>
#include <vector>

#include "clab/envelope.hpp"
#include "clab/parallel.hpp"
#include "clab/potential.hpp"

namespace clab {

enum class HypothesisCase { Linfty_decay, holder_radial, holder_1d };

std::string to_string(HypothesisCase c);
HypothesisCase hypothesis_case_from_string(const std::string& s);

struct LinftyCheck {
  bool passes = false;
  double c1 = 0.0;        // max over the grid of |V| <r>^2 / m
  double c1_inner = 0.0;  // same max restricted to r < r_max / 10
  double c1_outer = 0.0;  // restricted to the outer decade [r_max / 10, r_max]
};

/// |V| <= c1 <r>^{-2} m on the grid. Passes iff c1 is finite and the outer
/// decade does not exceed the inner part (no growth as r_max increases).
/// Throws NumericError if m underflows to 0 at a grid point.
LinftyCheck check_linfty_decay(const PotentialModel& V, const EnvelopeFn& m,
                               std::span<const double> grid, Exec exec = Exec::parallel);

/// sup_r |V(r) - V(r + y)| / y^alpha * <r>^3 / m(r)^2 over the grid plus probes
/// placed around the breakpoints of V.
double holder_modulus(const PotentialModel& V, double alpha, double y, const EnvelopeFn& m,
                      std::span<const double> grid, Exec exec = Exec::parallel);

/// sup_x |V(x) - V(x + y)| / m0(|x|), taken over both signs of y (grid plus
/// breakpoint probes).
double holder_modulus_1d(const PotentialModel& V, double y, const EnvelopeFn& m0,
                         std::span<const double> grid, Exec exec = Exec::parallel);

/// Geometric y-grid from y_max down to y_min (descending is not required by callers).
std::vector<double> default_y_grid(double y_min = 1e-6, double y_max = 1.0, std::size_t n = 25);

struct ThresholdScan {
  double value = 0.0;
  bool lower_bound_only = false;  // threshold never exceeded on the y-grid
  bool boundary_hit = false;      // exceeded at the smallest y, or a tie at the returned y
  std::vector<double> y;          // scanned y values (ascending)
  std::vector<double> modulus;    // modulus at each y
};

/// Smallest y in the grid whose modulus reaches 2 c2 (ties count as exceeding).
ThresholdScan compute_delta_V(const PotentialModel& V, double alpha, double c2,
                              const EnvelopeFn& m, std::span<const double> grid,
                              std::span<const double> y_grid, Exec exec = Exec::parallel);

/// limsup estimate: max of the modulus over the smallest decade of the y-grid.
double holder_limsup(const PotentialModel& V, double alpha, const EnvelopeFn& m,
                     std::span<const double> grid, std::span<const double> y_grid,
                     Exec exec = Exec::parallel);

struct TailSup {
  double value = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

/// sup of V over grid points with |r| in [r_max/2, r_max].
TailSup compute_V_infty(const PotentialModel& V, std::span<const double> grid);

/// Largest |r| on the grid with V(r) >= (E + 3 V_infty)/4; 0 if none.
double compute_R_EV(const PotentialModel& V, double E, double V_infty,
                    std::span<const double> grid);

struct Holder1dCheck {
  double c0 = 0.0;          // max(limsup estimate, declared)
  double c0_estimate = 0.0;
  ThresholdScan delta0;
};

Holder1dCheck check_holder_1d(const PotentialModel& V, const EnvelopeFn& m0,
                              std::span<const double> grid, std::span<const double> y_grid,
                              double declared_c0 = 0.0, Exec exec = Exec::parallel);

struct ClassCertificate {
  HypothesisCase condition = HypothesisCase::Linfty_decay;
  double alpha = 0.0;
  double c_const = 0.0;     // c1, c2 or c0
  double c_estimate = 0.0;  // grid estimate before the declared bound is applied
  double V_infty = 0.0;
  double delta_V = 1.0;
  bool delta_lower_bound_only = false;
  double R_EV = 0.0;
  double E = 1.0;
  double E_infty = 0.0;
  double C_V = 0.0;         // declared sup bound
  TailSup tail;
};

struct ClassQuery {
  HypothesisCase condition = HypothesisCase::Linfty_decay;
  double alpha = 0.0;
  double E = 1.0;
  double E_infty = 0.0;
  double declared_c = 0.0;  // used when the grid limsup is 0 (smooth V, alpha < 1)
};

/// Runs the applicable checks and assembles the constants. Throws
/// HypothesisError if the case does not hold or E <= E_infty < V_infty.
ClassCertificate certify_class(const PotentialModel& V, const EnvelopeFn& m,
                               const ClassQuery& q, std::span<const double> grid,
                               std::span<const double> y_grid, Exec exec = Exec::parallel);

}  // namespace clab
