#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "clab/envelope.hpp"
#include "clab/grid.hpp"
#include "clab/potential_classes.hpp"

namespace clab {

/// (sigma, rho) = ((1 - alpha)/(3 + alpha), 2/(3 + alpha)); throws ArgumentError
/// naming alpha outside [0, 1].
std::pair<double, double> sigma_rho(double alpha);

struct ConstructionParams {
  HypothesisCase condition = HypothesisCase::Linfty_decay;
  double alpha = 0.0;
  double sigma = 1.0 / 3.0;
  double rho = 1.0;
  double eta = 0.5;
  double tau0 = 1.0;
  double a0 = 1.0;
  double M = 0.0;
  double a = 1.0;
  double K = 6.0;
  double h = 0.1;
  double delta = 1.0;  // 1D weight scale
  double E = 1.0;
  double E_infty = 0.0;
  double R_E = 0.0;    // plateau end of the cutoff psi
};

/// Fills sigma, rho, M and a from the primary inputs. The pure decay case uses
/// alpha = 0 for sigma and rho = 1.
ConstructionParams make_params(HypothesisCase condition, double alpha, double eta, double tau0,
                               double a0, double K, double h, double E, double E_infty,
                               double delta = 1.0, double R_E = 0.0);

/// Smooth step: 0 for t <= 0, 1 for t >= 1, C-infinity in between.
double smooth_step(double t);
/// 1 on |r| <= 0.55, 0 on |r| >= 0.70.
double omega_cutoff(double r);
/// 1 on r <= R_E, 0 on r >= R_E + 0.9.
double psi_cutoff(double r, double R_E);

/// max[((r+1) m^2 + 4 r omega - 4)/(4 - m^2), 0].
double phi1_value(double r, const EnvelopeFn& m);

/// int_0^inf (s+1)^{-2} Phi_1(s) ds with Phi_1 as above.
double phi1_weighted_norm(const EnvelopeFn& m);
/// Same integral over (0, R].
double phi1_weighted_partial(const EnvelopeFn& m, double R);

struct PhaseWeightProfile {
  ConstructionParams params;
  Grid grid;
  bool radial = true;
  std::vector<double> Phi, Wcal, Phi1, omega, psi;
  std::vector<double> phi0_prime, phi0, phi_prime, phi, phi_second;
  std::vector<double> w, w_prime, log_w;
  std::vector<double> m;          // envelope (m or floored m0) at the nodes
  double phi1_norm = 0.0;         // ||(s+1)^{-2} Phi_1|| over (0, a]
  double m0_l1 = 0.0;             // 1D: int_0^inf m0
  double max_mismatch_w = 0.0;    // integrated vs closed form (relative)
  double max_mismatch_phi0p = 0.0;
  double max_mismatch_phi0 = 0.0;

  std::size_t size() const { return grid.size(); }
  double r(std::size_t i) const { return grid[i]; }
  /// True at the left copy of the duplicated node r = a.
  bool at_jump_left(std::size_t i) const { return grid.is_jump_left(i); }
  bool at_jump_right(std::size_t i) const { return grid.is_jump_right(i); }
};

struct IntegrationOptions {
  double rel_tol = 1e-12;
  double crosscheck_tol = 1e-8;  // relative; mismatch beyond throws IntegrationError
  bool crosscheck = true;
};

/// Radial grid used by the construction: hybrid spacing on [r_min, r_max] with
/// r_max >= 4a and a duplicated node at a.
Grid construction_grid_radial(const ConstructionParams& p, std::size_t n_points,
                              double r_min = 1e-4, double r_max_floor = 100.0);
/// Symmetric line grid on [-x_max, x_max].
Grid construction_grid_1d(std::size_t n_points, double x_max = 200.0);

struct PhiW {
  std::vector<double> Phi, Wcal, Phi1;
};

/// Phi and W on the radial grid (left/right values at r = a taken from the
/// respective pieces).
PhiW build_Phi_W_radial(const ConstructionParams& p, const EnvelopeFn& m, const Grid& grid);
/// Phi = -2 sgn(x)/(|x|+1) (sgn(0) = +1), W = delta h / m0 with m0 floored.
PhiW build_Phi_W_1d(const ConstructionParams& p, const EnvelopeFn& m0, const Grid& grid);

/// Integrates Phi and 1/W to phi0', phi0, w and cross-checks the closed forms.
PhaseWeightProfile integrate_profiles_radial(const ConstructionParams& p, const EnvelopeFn& m,
                                             const Grid& grid, const IntegrationOptions& opt = {});
PhaseWeightProfile integrate_profiles_1d(const ConstructionParams& p, const EnvelopeFn& m0,
                                         const Grid& grid, const IntegrationOptions& opt = {});

/// Convenience: grid + build + integrate.
PhaseWeightProfile construct_profile(const ConstructionParams& p, const EnvelopeFn& m,
                                     std::size_t n_points = 4000,
                                     const IntegrationOptions& opt = {});

struct LemmaPhiReport {
  std::vector<double> r, integral, lower, upper;
  double norm = 0.0;            // ||(s+1)^{-2} Phi_1||_{L^1(0,inf)}
  double max_slack = 0.0;       // max of integral + log(r+1)
  double min_slack = 0.0;       // min of integral + log(r+1)
  bool holds = false;
};

/// -log(r+1) <= int_0^r Phi <= -log(r+1) + norm with Phi = -1/(s+1+Phi_1(s)),
/// where norm = ||(s+1)^{-2} Phi_1||_{L^1(0,inf)} is supplied by the caller.
LemmaPhiReport lemma_phi_check(const std::function<double(double)>& Phi1,
                               std::span<const double> grid, double norm,
                               double slack_tol = 1e-6);

struct ProfileBoundsReport {
  // Radial
  bool phi0p_lower_ok = false;      // tau0/(r+1) <= phi0' on (0, a]
  bool phi0p_upper_ok = false;      // phi0' <= e^{N} tau0/(r+1) on (0, a]
  bool phi2_ok = false;             // two-sided bound beyond a
  bool w_prime_lower_ok = false;    // w' >= (r+1)^{-1-eta}, r != a
  bool weight_condition_ok = false; // W >= r/2
  double w_sup = 0.0;
  double w_sup_bound = 0.0;         // 2 a^2 e^{(2/eta)(a+1)^{-eta}}
  double C_w = 0.0;                 // sup w * h^{2M}
  double C_w2 = 0.0;                // sup (w^2/w') h^{2M} (r+1)^{-1-eta}
  double phi0_sup = 0.0;            // sup over the grid
  double phi0_limit = 0.0;          // phi0(inf), exact continuation of the r > a piece
  double phi0_bound = 0.0;          // tau0 e^N [log(a+1) + 1/eta]
  double C_phi0 = 0.0;              // sup|phi0| / [coef log h^{-1} + 1/eta]
  // 1D
  double phi_sup = 0.0;             // max |phi|, -> tau0
  bool w_le_one = false;
  double C_exp = 0.0;               // -h min log(w'(|x|+1)^{1+eta}): the C in e^{-C/h}
  double C_w2_1d = 0.0;             // sup (w^2/w') (|x|+1)^{-1-eta}
  bool pass = false;
};

ProfileBoundsReport verify_profile_bounds(const PhaseWeightProfile& prof);

}  // namespace clab
