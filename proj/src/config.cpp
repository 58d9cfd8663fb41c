#include "clab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "clab/error.hpp"
#include "clab/grid.hpp"

namespace clab {

using nlohmann::json;

namespace {

double number(const json& j, const std::string& key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(where + key + ": expected a number");
  return j.at(key).get<double>();
}

double required(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + key + ": missing");
  return number(j, key, 0.0, where);
}

std::vector<double> parse_h_grid(const json& j, const std::string& field) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw ConfigError(field + ": entries must be numbers");
      out.push_back(v.get<double>());
    }
  } else if (j.is_object()) {
    const double hi = required(j, "max", field + ".");
    const double lo = required(j, "min", field + ".");
    const double count = required(j, "count", field + ".");
    if (!(count >= 2)) throw ConfigError(field + ".count: must be >= 2");
    if (!(hi > lo && lo > 0.0)) throw ConfigError(field + ": need max > min > 0");
    out = geometric_h_grid(hi, lo, static_cast<std::size_t>(count));
  } else {
    throw ConfigError(field + ": expected an array or {max, min, count}");
  }
  for (double h : out)
    if (!(h > 0.0 && h <= 1.0)) throw ConfigError(field + ": values must lie in (0, 1]");
  return out;
}

}  // namespace

std::vector<double> geometric_h_grid(double h_max, double h_min, std::size_t count) {
  auto g = geometric_sequence(h_min, h_max, count);
  return {g.rbegin(), g.rend()};
}

DimensionMode ExperimentConfig::mode() const {
  return condition == HypothesisCase::holder_1d ? DimensionMode::line : DimensionMode::radial;
}

PotentialModel make_potential(const json& spec, DimensionMode mode) {
  if (!spec.is_object() || !spec.contains("family") || !spec.at("family").is_string())
    throw ConfigError("potential.family: missing");
  const std::string f = spec.at("family").get<std::string>();
  const std::string w = "potential.";
  if (f == "free_zero") return PotentialModel::free_zero(mode);
  if (f == "compact_bump") {
    const std::string prof = spec.value("profile", std::string("box"));
    if (prof != "box" && prof != "smooth") throw ConfigError("potential.profile: box or smooth");
    return PotentialModel::compact_bump(required(spec, "height", w), number(spec, "lo", 1.0, w),
                                        number(spec, "hi", 2.0, w), mode,
                                        prof == "box" ? BumpProfile::box : BumpProfile::smooth);
  }
  if (f == "sawtooth_holder") {
    const json env = spec.contains("envelope") ? spec.at("envelope") : json{{"family", "power_decay"}, {"nu", 0.3}};
    return PotentialModel::sawtooth_holder(required(spec, "alpha", w), number(spec, "c", 1.0, w),
                                           number(spec, "tooth", 1.0, w), make_envelope(env), mode);
  }
  if (f == "step_oscillation")
    return PotentialModel::step_oscillation(required(spec, "amplitude", w),
                                            required(spec, "period", w), mode);
  if (f == "random_fourier")
    return PotentialModel::random_fourier(static_cast<int>(required(spec, "modes", w)),
                                          required(spec, "amplitude", w), required(spec, "k_max", w),
                                          static_cast<std::uint64_t>(number(spec, "seed", 1.0, w)), mode);
  if (f == "user_table") {
    if (!spec.contains("path") || !spec.at("path").is_string())
      throw ConfigError("potential.path: missing");
    return PotentialModel::user_table_file(spec.at("path").get<std::string>(), mode);
  }
  if (f == "constant") return PotentialModel::constant(required(spec, "value", w), mode);
  if (f == "linear")
    return PotentialModel::linear(required(spec, "slope", w), number(spec, "offset", 0.0, w), mode);
  if (f == "power_decay")
    return PotentialModel::power_decay(required(spec, "c", w), required(spec, "p", w), mode);
  if (f == "arctan_ramp")
    return PotentialModel::arctan_ramp(required(spec, "amplitude", w), number(spec, "scale", 1.0, w), mode);
  if (f == "bump_pair")
    return PotentialModel::bump_pair(number(spec, "height", 2.0, w), number(spec, "center", 1.5, w),
                                     number(spec, "half_width", 0.7, w), mode);
  throw ConfigError("potential.family: unknown family '" + f + "'");
}

EnvelopeFn make_envelope(const json& spec) {
  if (!spec.is_object() || !spec.contains("family") || !spec.at("family").is_string())
    throw ConfigError("envelope.family: missing");
  const std::string f = spec.at("family").get<std::string>();
  EnvelopeFn m = EnvelopeFn::log_decay();
  if (f == "power_decay") {
    const double nu = number(spec, "nu", 0.3, "envelope.");
    if (!(nu >= 0.0)) throw ConfigError("envelope.nu: must be >= 0");
    m = EnvelopeFn::power_decay(nu);
  } else if (f == "log_decay") {
    m = EnvelopeFn::log_decay();
  } else if (f == "one_over_rlog2") {
    m = EnvelopeFn::one_over_rlog2();
  } else {
    throw ConfigError("envelope.family: unknown family '" + f + "'");
  }
  if (spec.value("floor", false)) m = m.with_floor();
  return m;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  ExperimentConfig c;
  c.source = j;
  if (!j.contains("case") || !j.at("case").is_string()) throw ConfigError("case: missing");
  try {
    c.condition = hypothesis_case_from_string(j.at("case").get<std::string>());
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("case: ") + e.what());
  }
  c.alpha = number(j, "alpha", 0.0, "");
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) throw ConfigError("alpha: must lie in [0,1]");
  c.E = number(j, "E", 1.0, "");
  c.E_infty = number(j, "E_infty", 0.0, "");
  if (!(c.E > c.E_infty)) throw ConfigError("E: must exceed E_infty");
  c.s = number(j, "s", 0.75, "");
  if (!(c.s > 0.5 && c.s < 1.0)) throw ConfigError("s: must lie in (1/2, 1)");
  c.eta = number(j, "eta", 2.0 * c.s - 1.0, "");
  if (!(c.eta > 0.0 && c.eta < 1.0)) throw ConfigError("eta: must lie in (0, 1)");
  c.K = number(j, "K", 6.0, "");
  if (!(c.K > 0.0)) throw ConfigError("K: must be positive");
  c.declared_c = number(j, "declared_c", 0.0, "");
  if (j.contains("tau0")) c.tau0 = number(j, "tau0", 1.0, "");
  if (j.contains("a0")) c.a0 = number(j, "a0", 1.0, "");
  if (j.contains("delta")) c.delta = number(j, "delta", 1.0, "");
  if (!j.contains("potential")) throw ConfigError("potential: missing");
  c.potential = j.at("potential");
  c.envelope = j.contains("envelope") ? j.at("envelope")
                                       : json{{"family", c.mode() == DimensionMode::line ? "one_over_rlog2" : "power_decay"}};
  // Validate the families early so errors name the field.
  (void)make_potential(c.potential, c.mode());
  (void)make_envelope(c.envelope);
  c.h_grid = j.contains("h_grid") ? parse_h_grid(j.at("h_grid"), "h_grid")
                                  : geometric_h_grid(0.1, 0.025, 5);
  if (j.contains("grids")) {
    const auto& g = j.at("grids");
    const std::string w = "grids.";
    c.grids.r_min = number(g, "r_min", c.grids.r_min, w);
    c.grids.r_max = number(g, "r_max", c.grids.r_max, w);
    c.grids.ratio = number(g, "ratio", c.grids.ratio, w);
    c.grids.x_step = number(g, "x_step", c.grids.x_step, w);
    c.grids.y_min = number(g, "y_min", c.grids.y_min, w);
    c.grids.y_max = number(g, "y_max", c.grids.y_max, w);
    c.grids.y_count = static_cast<std::size_t>(number(g, "y_count", 25, w));
    c.grids.construction_points = static_cast<std::size_t>(number(g, "construction_points", 2000, w));
    c.grids.mollify_r_max = number(g, "mollify_r_max", c.grids.mollify_r_max, w);
    c.grids.mollify_points = static_cast<std::size_t>(number(g, "mollify_points", 800, w));
    if (!(c.grids.r_max > c.grids.r_min && c.grids.r_min > 0.0)) throw ConfigError("grids.r_max: must exceed r_min > 0");
    if (!(c.grids.ratio > 1.0)) throw ConfigError("grids.ratio: must exceed 1");
  }
  c.resolvent.h_grid = c.h_grid;
  if (j.contains("resolvent")) {
    const auto& r = j.at("resolvent");
    const std::string w = "resolvent.";
    if (r.contains("h_grid")) c.resolvent.h_grid = parse_h_grid(r.at("h_grid"), "resolvent.h_grid");
    c.resolvent.eps_c = number(r, "eps_c", 1.0, w);
    c.resolvent.eps_q = number(r, "eps_q", 1.0, w);
    if (!(c.resolvent.eps_c > 0.0)) throw ConfigError("resolvent.eps_c: must be positive");
    if (r.contains("modes")) {
      c.resolvent.modes.clear();
      for (const auto& v : r.at("modes")) {
        if (!v.is_number_integer() || v.get<int>() < 0) throw ConfigError("resolvent.modes: nonnegative integers");
        c.resolvent.modes.push_back(v.get<int>());
      }
    }
    c.resolvent.n = static_cast<int>(number(r, "n", 3, w));
    if (c.resolvent.n < 3) throw ConfigError("resolvent.n: must be >= 3");
    c.resolvent.L_min = number(r, "L_min", 20.0, w);
    c.resolvent.ppw = number(r, "ppw", 40.0, w);
    if (r.contains("E")) c.resolvent.E = number(r, "E", c.E, w);
  }
  if (j.contains("carleman")) {
    const auto& k = j.at("carleman");
    const std::string w = "carleman.";
    if (k.contains("h_grid")) c.carleman.h_grid = parse_h_grid(k.at("h_grid"), "carleman.h_grid");
    c.carleman.samples = static_cast<std::size_t>(number(k, "samples", 10, w));
    c.carleman.window_lo = number(k, "window_lo", c.carleman.window_lo, w);
    c.carleman.window_hi = number(k, "window_hi", c.carleman.window_hi, w);
    c.carleman.points = static_cast<std::size_t>(number(k, "points", 4096, w));
    c.carleman.k_lo = number(k, "k_lo", c.carleman.k_lo, w);
    c.carleman.k_hi = number(k, "k_hi", c.carleman.k_hi, w);
    c.carleman.width = number(k, "width", c.carleman.width, w);
    c.carleman.eps = number(k, "eps", c.carleman.eps, w);
    c.carleman.mode_lambda = number(k, "mode_lambda", 0.0, w);
    if (!(c.carleman.window_hi > c.carleman.window_lo)) throw ConfigError("carleman.window_hi: must exceed window_lo");
    if (c.carleman.points < 16) throw ConfigError("carleman.points: must be >= 16");
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output: expected a string");
    c.output = j.at("output").get<std::string>();
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed: expected a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = cfg.source.dump() + "#" + std::to_string(cfg.seed);
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace clab
