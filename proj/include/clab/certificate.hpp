#pragma once

#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "clab/carleman.hpp"
#include "clab/mollifier.hpp"
#include "clab/potential.hpp"
#include "clab/potential_classes.hpp"
#include "clab/test_functions.hpp"

namespace clab {

/// A and B with their values divided by w' (the normalized forms stay finite
/// where w' under- or overflows).
struct ABGrid {
  std::vector<double> A, B;
  std::vector<double> A_over_wp, B_over_wp;
};

/// A = w'(E + phi'^2 - V_h) + w(2 phi' phi'' - V_h'),
/// B = w^2 (h^{-1}|R_h| + phi'')^2 / (w' + 4 h^{-1} phi' w).
/// Throws ArgumentError if the profile and smoothed grids differ.
ABGrid compute_AB(const PhaseWeightProfile& prof, const SmoothedPotential& sp, double E);

struct CarlemanReport {
  std::vector<double> r;
  std::vector<double> A, B;
  std::vector<double> margin;             // A - (K/2)B - ((E - E_inf)/2) w'
  std::vector<double> margin_normalized;  // margin / w'
  std::vector<double> bracket;            // keyCalc lower bound for (A - (K/2)B)/w'
  double target = 0.0;                    // (E - E_inf)/2; E_inf = 0 in the decay case
  double min_margin = 0.0;                // min of margin / w'
  std::size_t argmin = 0;
  double argmin_r = 0.0;
  bool argmin_in_psi_support = false;
  double min_chain_slack = 0.0;  // min of (A - (K/2)B)/w' - bracket
  bool chain_algebra_ok = false; // A - (K/2)B >= w' bracket at every node
  bool chain_target_ok = false;  // bracket >= target at every node
  bool pass = false;             // min_margin >= 0 (both copies of r = a included)
};

CarlemanReport key_margin(const PhaseWeightProfile& prof, const SmoothedPotential& sp, double E,
                          double E_infty, double K);

/// Profile, weight and smoothed potential sampled on arbitrary nodes. The weight
/// is stored as log w; identities that are homogeneous in w use
/// w = exp(log_w - log_w_ref).
struct FieldSamples {
  HypothesisCase condition = HypothesisCase::Linfty_decay;
  double h = 0.1;
  std::vector<double> x, phi, phi_prime, phi_second, log_w, Wcal;
  std::vector<double> V, Vh, Vh_prime, Rh;
  double log_w_ref = 0.0;
  double jump = std::numeric_limits<double>::quiet_NaN();  // r = a (radial)

  std::size_t size() const { return x.size(); }
  double w(std::size_t i) const;        // relative to exp(log_w_ref)
  double w_prime(std::size_t i) const;  // idem
};

/// Integrates the construction on the union of its own grid and `x`, then
/// mollifies V at `x`. Radial nodes must be positive and different from a.
FieldSamples sample_fields(const ConstructionParams& p, const EnvelopeFn& m,
                           const PotentialModel& V, const ClassCertificate& cert,
                           const MollifierKernel& chi, std::span<const double> x,
                           std::size_t n_construction = 2000);

/// F = |h u'|^2 - (h^2 lambda/r^2 + V_h - phi'^2 - E)|u|^2; lambda = 0 in 1D.
std::vector<double> energy_functional(const TestFunction& u, const FieldSamples& f, double E,
                                      double mode_lambda);

/// -h^2 u'' + 2h phi' u' + (h^2 lambda/r^2 + V - phi'^2 + h phi'' - E +- i eps) u with
/// three-point differences on a uniform grid. Entries 0 and n-1 are ghost nodes
/// and set to 0. sign = +1 or -1.
std::vector<std::complex<double>> conjugated_apply(std::span<const std::complex<double>> u,
                                                   const FieldSamples& f, double E, double eps,
                                                   int sign, double mode_lambda);

struct IdentityResidual {
  double residual = 0.0;  // max |FD (wF)' - expanded| / scale
  double max_abs = 0.0;
  double scale = 0.0;
};

/// Compares a centered difference of wF with the expanded form
/// w'F + w[-2 Re(Pu conj u') -+ 2 eps Im(u conj u') + 4 h phi'|u'|^2
///         + 2 (R_h + h phi'') Re(u conj u') + (2 h^2 lambda/r^3 - V_h' + 2 phi' phi'')|u|^2].
/// Stencils straddling the jump of w' at r = a are skipped.
IdentityResidual wF_derivative_identity(const TestFunction& u, const FieldSamples& f, double E,
                                        double eps, int sign, double mode_lambda);

/// Trapezoidal check of int h phi''|u|^2 = -Re int 2 h phi' u' conj(u); returns
/// the difference relative to the larger side.
double integration_by_parts_residual(const TestFunction& u, const FieldSamples& f);

struct IntegratedSample {
  double lhs = 0.0;       // int (1+r)^{-1-eta}(|u|^2 + |hu'|^2)
  double rhs_P = 0.0;     // int (1+r)^{1+eta} |P u|^2
  double rhs_u = 0.0;     // int |u|^2
  double multiplier = 0.0;  // lhs / (rhs_P + eps rhs_u)
  // Integrated lower bound for (wF)': int 3 w^2/(h^2 w') |Pu|^2 >=
  // int [w'|hu'|^2/3 + ((E - E_inf)/2) w'|u|^2 -+ 2 eps w Im(u conj u')].
  double derivative_gap = 0.0;  // left minus right, relative to the left
  bool derivative_bound_holds = false;
};

struct IntegratedReport {
  std::vector<IntegratedSample> samples;
  double max_multiplier = 0.0;
  double log_multiplier_times_h = 0.0;
  bool all_hold = false;
};

IntegratedReport integrated_carleman_check(std::span<const TestFunction> samples,
                                           const FieldSamples& f, double E, double E_infty,
                                           double eps, int sign, double eta, double mode_lambda);

}  // namespace clab
