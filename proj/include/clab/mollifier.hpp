#pragma once

#include <span>
#include <string>
#include <vector>

#include "clab/envelope.hpp"
#include "clab/parallel.hpp"
#include "clab/potential.hpp"
#include "clab/potential_classes.hpp"
#include "clab/quadrature.hpp"

namespace clab {

/// chi(s) = exp(1 - 1/(4 s (1 - s))) / Z on (0, 1), Z chosen for unit mass.
/// The unnormalized shape peaks at 1 (s = 1/2).
class MollifierKernel {
 public:
  MollifierKernel();

  double operator()(double s) const;
  double derivative(double s) const;
  double shape(double s) const;
  double normalization() const { return norm_; }

  /// int s chi(s) ds.
  double mean() const { return mean_; }
  /// int s^alpha chi(s) ds.
  double moment(double alpha) const;
  /// int |s^alpha chi'(s)| ds.
  double abs_derivative_moment(double alpha) const;
  /// Constant in the derivative bound: 2 int |s^alpha chi'|.
  double C_chi(double alpha) const { return 2.0 * abs_derivative_moment(alpha); }

 private:
  double norm_ = 1.0;
  double mean_ = 0.5;
};

struct MollifyOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-15;
  int max_intervals = 2000;
};

/// int_0^1 V(r + gamma s) chi(s) ds.
quad::Result mollify(const PotentialModel& V, double r, double gamma, const MollifierKernel& chi,
                     const MollifyOptions& opt = {});

/// d/dr of the mollified potential in difference form:
/// -gamma^{-1} int_0^1 [V(r + gamma s) - V(r)] chi'(s) ds.
quad::Result mollify_derivative(const PotentialModel& V, double r, double gamma,
                                const MollifierKernel& chi, const MollifyOptions& opt = {});

struct SmoothedPotential {
  HypothesisCase condition = HypothesisCase::Linfty_decay;
  double h = 0.0;
  double rho = 1.0;
  double gamma = 0.0;
  bool zero_approximation = false;  // V_h = 0, R_h = V
  std::vector<double> r, V, Vh, Vh_prime, Rh;
  std::vector<double> quad_error;   // error estimate of V_h per point

  std::size_t size() const { return r.size(); }
};

/// gamma = h^rho (radial) or h (1D). `delta` is delta_V (radial) or delta_0 (1D);
/// throws HypothesisError naming the bound if h is outside its admissible range.
SmoothedPotential build_smoothed(const PotentialModel& V, double h, double rho,
                                 HypothesisCase condition, double delta,
                                 const MollifierKernel& chi, std::span<const double> grid,
                                 Exec exec = Exec::parallel, const MollifyOptions& opt = {});

struct MollifierReport {
  // actual / bound per point (<= 1 means the bound holds)
  std::vector<double> sup_excess;  // V_h - sup_{[r, r+gamma]} V (<= 0 means it holds)
  std::vector<double> deriv_ratio;
  std::vector<double> remainder_ratio;
  std::vector<double> remainder_ratio_semiclassical;  // 1D only: |R_h| / (c0 h m0)
  double max_sup_excess = 0.0;
  double max_deriv_ratio = 0.0;
  double max_remainder_ratio = 0.0;
  double max_remainder_ratio_semiclassical = 0.0;
  double max_weighted_remainder = 0.0;  // radial: max |R_h| <r>^3 / m^2; 1D: max |R_h| / m0
  double C_chi = 0.0;
  bool sup_ok = false, deriv_ok = false, remainder_ok = false;
  bool pass = false;
};

/// Radial: V_h <= sup V on [r, r + gamma], |V_h'| <= C_chi c2 gamma^{alpha-1} <r>^{-3} m^2,
/// |R_h| <= c2 gamma^alpha <r>^{-3} m^2. 1D: V_h <= sup V on [x, x + h],
/// |V_h'| <= C_chi c0 h^{-1} m0, |R_h| <= 2 c0 m0 (the ratio against c0 h m0 is
/// recorded separately). The zero approximation passes trivially.
MollifierReport verify_mollifier_bounds(const SmoothedPotential& sp, const ClassCertificate& cert,
                                        const PotentialModel& V, const EnvelopeFn& m,
                                        const MollifierKernel& chi, Exec exec = Exec::parallel);

}  // namespace clab
