#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clab/envelope.hpp"
#include "clab/potential.hpp"
#include "clab/potential_classes.hpp"

namespace clab {

struct ClassGridConfig {
  double r_min = 1e-3;    // radial class-check grid: geometric from r_min
  double r_max = 400.0;
  double ratio = 1.01;
  double x_step = 0.05;   // line class-check grid: uniform on [-r_max, r_max]
  double y_min = 1e-6, y_max = 1.0;
  std::size_t y_count = 25;
  std::size_t construction_points = 2000;
  double mollify_r_max = 50.0;  // mollify stage grid
  std::size_t mollify_points = 800;
};

struct ResolventConfig {
  std::vector<double> h_grid;  // defaults to the main h grid
  double eps_c = 1.0, eps_q = 1.0;
  std::vector<int> modes{0};
  int n = 3;
  double L_min = 20.0;
  double ppw = 40.0;
  std::optional<double> E;     // defaults to the main E
};

struct CarlemanConfig {
  std::vector<double> h_grid{0.2, 0.1, 0.05};
  std::size_t samples = 10;
  double window_lo = 0.2, window_hi = 6.0;
  std::size_t points = 4096;
  double k_lo = 0.0, k_hi = 4.0;
  double width = 0.35;
  double eps = 0.1;
  double mode_lambda = 0.0;
};

struct ExperimentConfig {
  nlohmann::json potential;  // family + parameters
  nlohmann::json envelope;   // family + parameters
  HypothesisCase condition = HypothesisCase::Linfty_decay;
  double alpha = 0.0;
  double E = 1.0;
  double E_infty = 0.0;
  double s = 0.75;
  double eta = 0.5;          // 2s - 1 unless given
  double K = 6.0;
  double declared_c = 0.0;
  std::vector<double> h_grid;
  std::optional<double> tau0, a0, delta;  // skip the search when all needed ones are set
  ClassGridConfig grids;
  ResolventConfig resolvent;
  CarlemanConfig carleman;
  std::string output = "out";
  std::uint64_t seed = 1;
  nlohmann::json source;     // the parsed document, for hashing

  DimensionMode mode() const;
};

/// Parses and validates; throws ConfigError naming the offending field (and
/// line/column for syntax errors).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

PotentialModel make_potential(const nlohmann::json& spec, DimensionMode mode);
EnvelopeFn make_envelope(const nlohmann::json& spec);

/// FNV-1a 64 over the canonical JSON dump followed by the seed, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// geometric grid from max down to min with count points.
std::vector<double> geometric_h_grid(double h_max, double h_min, std::size_t count);

}  // namespace clab
