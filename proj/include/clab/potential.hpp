#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "clab/envelope.hpp"

namespace clab {

enum class DimensionMode { line, radial };

enum class BumpProfile { box, smooth };

/// height on [lo, hi]; `smooth` uses height * exp(1 - 1/(1 - t^2)) over the
/// same support.
struct CompactBump {
  double height = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  BumpProfile profile = BumpProfile::box;
};

/// A(r) * dist(r, tooth Z)^alpha with A(r) = c <r>^{-3} m(r)^2. For alpha = 0
/// the distance factor is replaced by a square wave (1 on the first half of
/// each tooth, 0 on the second).
struct SawtoothHolder {
  double alpha = 0.5;
  double c = 1.0;
  double tooth = 0.1;
  EnvelopeFn m = EnvelopeFn::log_decay();
};

/// +amplitude / -amplitude on alternating intervals of length `period`.
struct StepOscillation {
  double amplitude = 0.25;
  double period = 1.0;
};

/// sum_k a_k cos(k_k r + p_k) with seeded coefficients.
struct RandomFourier {
  int modes = 8;
  double amplitude = 0.5;
  double k_max = 4.0;
  std::uint64_t seed = 1;
  std::vector<double> coef, freq, phase;
};

struct FreeZero {};

struct Constant {
  double value = 0.0;
};

/// slope * r + offset (unbounded; meant for quadrature checks).
struct Linear {
  double slope = 1.0;
  double offset = 0.0;
};

/// c <r>^{-p}.
struct PowerDecay {
  double c = 1.0;
  double p = 2.0;
};

/// amplitude * atan(x / scale).
struct ArctanRamp {
  double amplitude = 1.0;
  double scale = 1.0;
};

/// Smooth bumps height * exp(1 - 1/(1 - t^2)), t = (|x| - center)/half_width.
struct BumpPair {
  double height = 2.0;
  double center = 1.5;
  double half_width = 0.7;
};

/// Piecewise-linear interpolation of (r, V) samples, constant outside.
struct UserTable {
  std::vector<double> r, v;
};

using PotentialParams = std::variant<FreeZero, CompactBump, SawtoothHolder, StepOscillation,
                                     RandomFourier, UserTable, Constant, Linear, PowerDecay,
                                     ArctanRamp, BumpPair>;

class PotentialModel {
 public:
  PotentialModel(PotentialParams params, DimensionMode mode);

  static PotentialModel free_zero(DimensionMode mode = DimensionMode::radial);
  static PotentialModel compact_bump(double height, double lo, double hi,
                                     DimensionMode mode = DimensionMode::radial,
                                     BumpProfile profile = BumpProfile::box);
  static PotentialModel sawtooth_holder(double alpha, double c, double tooth, EnvelopeFn m,
                                        DimensionMode mode = DimensionMode::radial);
  static PotentialModel step_oscillation(double amplitude, double period,
                                         DimensionMode mode = DimensionMode::radial);
  static PotentialModel random_fourier(int modes, double amplitude, double k_max,
                                       std::uint64_t seed,
                                       DimensionMode mode = DimensionMode::radial);
  static PotentialModel user_table(std::vector<double> r, std::vector<double> v,
                                   DimensionMode mode = DimensionMode::radial);
  /// Two-column whitespace-separated text file; '#' starts a comment.
  static PotentialModel user_table_file(const std::string& path,
                                        DimensionMode mode = DimensionMode::radial);
  static PotentialModel constant(double value, DimensionMode mode = DimensionMode::radial);
  static PotentialModel linear(double slope, double offset,
                               DimensionMode mode = DimensionMode::radial);
  static PotentialModel power_decay(double c, double p,
                                    DimensionMode mode = DimensionMode::radial);
  static PotentialModel arctan_ramp(double amplitude, double scale,
                                    DimensionMode mode = DimensionMode::line);
  static PotentialModel bump_pair(double height, double center, double half_width,
                                  DimensionMode mode = DimensionMode::line);

  /// V at a point; throws DomainError for r <= 0 in radial mode.
  double eval(double x) const;
  /// Same as eval; the direction index is reserved for angular models.
  double eval(double x, int direction_index) const;
  double operator()(double x) const { return eval(x); }

  /// Points in (lo, hi) where V or a low derivative is discontinuous.
  std::vector<double> breakpoints(double lo, double hi) const;

  /// Declared upper bound C_V >= sup V.
  double sup_bound() const;
  /// Declared bound on sup |V|.
  double abs_bound() const;

  /// lambda * V.
  PotentialModel scaled(double lambda) const;

  DimensionMode mode() const { return mode_; }
  const PotentialParams& params() const { return params_; }
  double scale() const { return scale_; }
  std::string family_name() const;
  bool is_zero() const;

 private:
  double raw(double x) const;

  PotentialParams params_;
  DimensionMode mode_;
  double scale_ = 1.0;
};

}  // namespace clab
