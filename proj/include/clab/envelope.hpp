#pragma once

#include <string>
#include <vector>

namespace clab {

enum class EnvelopeFamily { power_decay, log_decay, one_over_rlog2 };

/// Decay profile m(r) (or m0(r)) with 0 < m <= 1. Evaluation uses |r| so the
/// same object serves radial and line models.
class EnvelopeFn {
 public:
  /// <r>^{-nu}, nu >= 0.
  static EnvelopeFn power_decay(double nu);
  /// 1 / log(e + r).
  static EnvelopeFn log_decay();
  /// 1 / (1 + r log^2(r + 1)).
  static EnvelopeFn one_over_rlog2();

  /// max(m, 1/(1 + r log^2(r+1))): the floor assumed by the 1D weight.
  EnvelopeFn with_floor() const;

  double operator()(double r) const;
  /// log m(s) at s = e^L - 1, accurate for L far beyond the overflow of e^L.
  double log_at_log1p(double L) const;

  EnvelopeFamily family() const { return family_; }
  double nu() const { return nu_; }
  bool floored() const { return floored_; }
  std::string name() const;

  /// Closed-form integrability metadata.
  bool weighted_l2_integrable() const;  // m <r>^{-1/2} in L^2(0, inf)
  bool l1_integrable() const;           // m in L^1(0, inf)

  /// int_0^inf m(s) ds (throws NumericError if m is not integrable).
  double l1_norm() const;
  /// int_R^inf m(s) ds.
  double l1_tail(double R) const;
  /// int_0^R m(s) ds.
  double l1_partial(double R) const;

 private:
  EnvelopeFn(EnvelopeFamily f, double nu) : family_(f), nu_(nu) {}
  double raw_log_at_log1p(double L) const;
  double raw(double r) const;

  EnvelopeFamily family_;
  double nu_ = 0.0;
  bool floored_ = false;
};

/// log(1 + s^2) at s = e^L - 1.
double log1p_square_at_log1p(double L);

struct IntegrabilityReport {
  bool declared = false;          // from closed-form metadata
  std::vector<double> radii;      // R values of the partial integrals
  std::vector<double> partials;   // int_0^R of the integrand
  double tail = 0.0;              // int_{R_max}^inf (inf if divergent)
  bool converged = false;         // tail < tolerance
};

/// Integrand [m(r) <r>^{-1/2}]^2.
IntegrabilityReport check_m_condition(const EnvelopeFn& m, double tail_tol = 1.0);
/// Integrand m0(r).
IntegrabilityReport check_m0_condition(const EnvelopeFn& m0, double tail_tol = 1.0);

}  // namespace clab
