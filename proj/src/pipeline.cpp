#include "clab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "clab/carleman.hpp"
#include "clab/certificate.hpp"
#include "clab/csv.hpp"
#include "clab/error.hpp"
#include "clab/fit.hpp"
#include "clab/grid.hpp"
#include "clab/mollifier.hpp"
#include "clab/resolvent.hpp"
#include "clab/search.hpp"
#include "clab/test_functions.hpp"

namespace clab {

using nlohmann::json;

namespace {

const std::vector<std::pair<Stage, std::string>> kStageNames = {
    {Stage::check_potential, "check-potential"}, {Stage::mollify, "mollify"},
    {Stage::construct, "construct"},             {Stage::certify, "certify"},
    {Stage::carleman, "carleman"},               {Stage::resolvent_sweep, "resolvent-sweep"},
    {Stage::fit, "fit"},                         {Stage::all, "all"}};

// Stages in execution order, with prerequisites.
std::vector<Stage> prerequisites(Stage s) {
  switch (s) {
    case Stage::mollify:
    case Stage::construct: return {Stage::check_potential};
    case Stage::certify: return {Stage::check_potential, Stage::construct};
    case Stage::carleman: return {Stage::check_potential};
    case Stage::fit: return {Stage::resolvent_sweep};
    default: return {};
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

// Non-finite numbers are not valid JSON.
json num(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

class Runner {
 public:
  Runner(const ExperimentConfig& cfg, std::string out, std::ostream* log)
      : cfg_(cfg), out_(std::move(out)), log_(log), hash_(config_hash(cfg)),
        V_(make_potential(cfg.potential, cfg.mode())), m_(make_envelope(cfg.envelope)) {
    std::sort(h_grid_asc_.begin(), h_grid_asc_.end());
  }

  const std::string& hash() const { return hash_; }

  StageOutcome run(Stage s) {
    StageOutcome o;
    o.stage = s;
    switch (s) {
      case Stage::check_potential: check(o); break;
      case Stage::mollify: mollify(o); break;
      case Stage::construct: construct(o); break;
      case Stage::certify: certify(o); break;
      case Stage::carleman: carleman(o); break;
      case Stage::resolvent_sweep: resolvent(o); break;
      case Stage::fit: fit(o); break;
      case Stage::all: break;
    }
    if (log_) *log_ << to_string(s) << ": " << (o.passed ? "ok" : "FAILED") << "  " << o.summary << '\n';
    return o;
  }

 private:
  std::string path(const std::string& name) const { return (std::filesystem::path(out_) / name).string(); }

  std::vector<double> class_grid() const {
    const auto& g = cfg_.grids;
    std::vector<double> out;
    if (cfg_.mode() == DimensionMode::radial) {
      for (double r = g.r_min; r <= g.r_max * (1 + 1e-12); r *= g.ratio) out.push_back(r);
    } else {
      const auto n = static_cast<std::size_t>(std::llround(2.0 * g.r_max / g.x_step)) + 1;
      out = uniform_nodes(-g.r_max, g.r_max, n);
    }
    return out;
  }

  const ClassCertificate& cert() {
    if (!cert_) {
      const auto y = default_y_grid(cfg_.grids.y_min, cfg_.grids.y_max, cfg_.grids.y_count);
      const auto grid = class_grid();
      ClassQuery q{cfg_.condition, cfg_.alpha, cfg_.E, cfg_.E_infty, cfg_.declared_c};
      cert_ = certify_class(V_, m_, q, grid, y, Exec::parallel);
    }
    return *cert_;
  }

  SearchInput search_input() const {
    return {cfg_.condition, cfg_.alpha, cfg_.E, cfg_.E_infty, cfg_.K, cfg_.eta};
  }

  bool constants_given() const {
    if (!cfg_.tau0) return false;
    if (cfg_.condition == HypothesisCase::holder_1d) return cfg_.delta.has_value();
    return cfg_.a0.has_value();
  }

  ConstructionParams params_at(const SearchResult& s, double h) {
    return make_params(cfg_.condition, cfg_.alpha, cfg_.eta, s.tau0, s.a0, cfg_.K, h, cfg_.E,
                       cfg_.E_infty, s.delta, cert().R_EV);
  }

  // Given constants (no search) or a ladder search over h_grid.
  SearchResult constants_for(std::vector<double> h_grid) {
    std::sort(h_grid.begin(), h_grid.end());
    if (constants_given()) {
      SearchResult s;
      s.tau0 = *cfg_.tau0;
      s.a0 = cfg_.a0.value_or(1.0);
      s.delta = cfg_.delta.value_or(1.0);
      s.success = true;
      for (double h : h_grid) {
        const auto pr = probe_margin(params_at(s, h), V_, m_, cert(), chi_, cfg_.grids.construction_points);
        s.probes.push_back(pr);
        s.success = s.success && pr.pass;
        ++s.evaluations;
      }
      s.params = params_at(s, h_grid.front());
      s.h0 = h_grid.back();
      s.message = "constants from config";
      return s;
    }
    SearchOptions opt;
    opt.n_points = cfg_.grids.construction_points;
    return search_constants(search_input(), V_, m_, cert(), chi_, h_grid, opt);
  }

  const SearchResult& search() {
    if (!search_) search_ = constants_for(cfg_.h_grid);
    return *search_;
  }

  static json search_json(const SearchResult& s) {
    json j{{"success", s.success}, {"tau0", num(s.tau0)}, {"a0", num(s.a0)}, {"delta", num(s.delta)},
           {"h0", num(s.h0)}, {"evaluations", s.evaluations}, {"message", s.message},
           {"worst_margin", num(s.worst_margin)}, {"worst_r", num(s.worst_r)}, {"worst_h", num(s.worst_h)}};
    json probes = json::array();
    for (const auto& p : s.probes)
      probes.push_back({{"h", p.h}, {"min_margin", num(p.min_margin)}, {"argmin_r", num(p.argmin_r)}, {"pass", p.pass}});
    j["probes"] = probes;
    return j;
  }

  void check(StageOutcome& o) {
    o.assertion = true;
    const std::string csv = path("check_potential.csv"), js = path("check_potential.json");
    o.artifacts = {csv, js};
    const auto grid = class_grid();
    {
      CsvWriter w(csv, {"r", "V", "m"}, hash_);
      for (double r : grid) w.row({r, V_.eval(r), m_(std::abs(r))});
    }
    json j{{"case", to_string(cfg_.condition)}, {"family", cfg_.potential}, {"envelope", cfg_.envelope}};
    const auto integ = cfg_.mode() == DimensionMode::line ? check_m0_condition(m_) : check_m_condition(m_);
    j["envelope_integrable"] = integ.converged;
    j["envelope_tail"] = num(integ.tail);
    try {
      const auto& c = cert();
      j["certified"] = true;
      j["alpha"] = c.alpha;
      j["c_const"] = num(c.c_const);
      j["c_estimate"] = num(c.c_estimate);
      j["V_infty"] = num(c.V_infty);
      j["delta_V"] = num(c.delta_V);
      j["delta_lower_bound_only"] = c.delta_lower_bound_only;
      j["R_EV"] = num(c.R_EV);
      o.passed = integ.converged;
      o.summary = "c = " + format_number(c.c_const) + ", delta_V = " + format_number(c.delta_V) +
                  ", R_EV = " + format_number(c.R_EV);
    } catch (const HypothesisError& e) {
      j["certified"] = false;
      j["error"] = e.what();
      o.passed = false;
      o.summary = e.what();
    }
    j["pass"] = o.passed;
    write_json(js, j);
  }

  void mollify(StageOutcome& o) {
    o.assertion = true;
    const std::string csv = path("mollify.csv"), js = path("mollify.json");
    o.artifacts = {csv, js};
    const auto& g = cfg_.grids;
    const std::vector<double> grid =
        cfg_.mode() == DimensionMode::radial
            ? geometric_sequence(g.r_min, std::min(g.r_max, g.mollify_r_max), g.mollify_points)
            : uniform_nodes(-std::min(g.r_max, g.mollify_r_max), std::min(g.r_max, g.mollify_r_max),
                            g.mollify_points);
    const double rho = sigma_rho(cfg_.condition == HypothesisCase::holder_radial ? cfg_.alpha : 0.0).second;
    CsvWriter w(csv, {"h", "r", "V", "V_h", "V_h_prime", "R_h"}, hash_);
    json per_h = json::array();
    o.passed = true;
    for (double h : cfg_.h_grid) {
      const auto sp = build_smoothed(V_, h, rho, cfg_.condition, cert().delta_V, chi_, grid);
      const auto rep = verify_mollifier_bounds(sp, cert(), V_, m_, chi_);
      for (std::size_t i = 0; i < sp.size(); ++i) w.row({h, sp.r[i], sp.V[i], sp.Vh[i], sp.Vh_prime[i], sp.Rh[i]});
      per_h.push_back({{"h", h}, {"gamma", sp.gamma}, {"max_sup_excess", num(rep.max_sup_excess)},
                       {"max_deriv_ratio", num(rep.max_deriv_ratio)},
                       {"max_remainder_ratio", num(rep.max_remainder_ratio)},
                       {"max_weighted_remainder", num(rep.max_weighted_remainder)}, {"pass", rep.pass}});
      o.passed = o.passed && rep.pass;
    }
    write_json(js, {{"per_h", per_h}, {"pass", o.passed}});
    o.summary = std::to_string(cfg_.h_grid.size()) + " h values";
  }

  void construct(StageOutcome& o) {
    o.assertion = true;
    const std::string csv = path("construct.csv"), js = path("construct.json");
    o.artifacts = {csv, js};
    const auto& s = search();
    json j{{"search", search_json(s)}};
    o.passed = s.success;
    const auto p = params_at(s, h_grid_asc_.front());
    const auto prof = construct_profile(p, m_, cfg_.grids.construction_points);
    const auto b = verify_profile_bounds(prof);
    {
      CsvWriter w(csv, {"r", "Phi", "Wcal", "phi0_prime", "phi0", "phi_prime", "phi", "phi_second", "log_w", "w",
                        "w_prime"},
                  hash_);
      for (std::size_t i = 0; i < prof.size(); ++i)
        w.row({prof.r(i), prof.Phi[i], prof.Wcal[i], prof.phi0_prime[i], prof.phi0[i], prof.phi_prime[i],
               prof.phi[i], prof.phi_second[i], prof.log_w[i], prof.w[i], prof.w_prime[i]});
    }
    j["h"] = p.h;
    j["M"] = p.M;
    j["a"] = p.a;
    j["sigma"] = p.sigma;
    j["rho"] = p.rho;
    j["max_mismatch_w"] = num(prof.max_mismatch_w);
    j["max_mismatch_phi0_prime"] = num(prof.max_mismatch_phi0p);
    j["max_mismatch_phi0"] = num(prof.max_mismatch_phi0);
    j["bounds"] = {{"pass", b.pass},          {"w_sup", num(b.w_sup)},       {"w_sup_bound", num(b.w_sup_bound)},
                   {"C_w", num(b.C_w)},        {"C_w2", num(b.C_w2)},         {"phi0_sup", num(b.phi0_sup)},
                   {"phi0_bound", num(b.phi0_bound)}, {"C_phi0", num(b.C_phi0)}, {"phi_sup", num(b.phi_sup)},
                   {"C_exp", num(b.C_exp)},    {"C_w2_1d", num(b.C_w2_1d)}};
    o.passed = o.passed && b.pass;
    j["pass"] = o.passed;
    write_json(js, j);
    o.summary = "tau0 = " + format_number(s.tau0) + ", a0 = " + format_number(s.a0) +
                ", delta = " + format_number(s.delta) + ", h0 = " + format_number(s.h0);
  }

  void certify(StageOutcome& o) {
    o.assertion = true;
    const std::string csv = path("certify.csv"), js = path("certify.json");
    o.artifacts = {csv, js};
    const auto& s = search();
    CsvWriter w(csv, {"h", "r", "A_over_wp", "B_over_wp", "margin_normalized", "bracket", "target"}, hash_);
    json per_h = json::array();
    o.passed = true;
    double worst = INFINITY;
    for (double h : h_grid_asc_) {
      const auto p = params_at(s, h);
      const auto prof = construct_profile(p, m_, cfg_.grids.construction_points);
      const auto sp = build_smoothed(V_, h, p.rho, p.condition, cert().delta_V, chi_, prof.grid.nodes());
      const auto ab = compute_AB(prof, sp, cfg_.E);
      const auto rep = key_margin(prof, sp, cfg_.E, cfg_.E_infty, cfg_.K);
      for (std::size_t i = 0; i < prof.size(); ++i)
        w.row({h, prof.r(i), ab.A_over_wp[i], ab.B_over_wp[i], rep.margin_normalized[i], rep.bracket[i], rep.target});
      const bool ok = rep.pass && rep.chain_algebra_ok && rep.chain_target_ok;
      per_h.push_back({{"h", h}, {"min_margin", num(rep.min_margin)}, {"argmin_r", num(rep.argmin_r)},
                       {"argmin_in_psi_support", rep.argmin_in_psi_support},
                       {"min_chain_slack", num(rep.min_chain_slack)}, {"chain_algebra_ok", rep.chain_algebra_ok},
                       {"chain_target_ok", rep.chain_target_ok}, {"pass", ok}});
      o.passed = o.passed && ok;
      worst = std::min(worst, rep.min_margin);
    }
    write_json(js, {{"tau0", num(s.tau0)}, {"a0", num(s.a0)}, {"delta", num(s.delta)}, {"h0", num(s.h0)},
                    {"K", cfg_.K}, {"per_h", per_h}, {"pass", o.passed}});
    o.summary = "min margin " + format_number(worst);
  }

  void carleman(StageOutcome& o) {
    o.assertion = true;
    const std::string csv = path("carleman.csv"), js = path("carleman.json");
    o.artifacts = {csv, js};
    const auto& k = cfg_.carleman;
    const auto s = constants_for(k.h_grid);
    const auto x = uniform_nodes(k.window_lo, k.window_hi, k.points);
    TestParams base;
    base.center = 0.5 * (k.window_lo + k.window_hi);
    base.width = k.width;
    base.k_lo = k.k_lo;
    base.k_hi = k.k_hi;
    base.seed = cfg_.seed;
    const auto batch = random_test_batch(base, k.samples, x);
    CsvWriter w(csv, {"h", "sign", "sample", "lhs", "rhs_P", "rhs_u", "multiplier", "derivative_gap", "holds"},
                hash_);
    json per_h = json::array();
    o.passed = s.success;
    for (double h : k.h_grid) {
      const auto f = sample_fields(params_at(s, h), m_, V_, cert(), chi_, x, cfg_.grids.construction_points);
      for (int sign : {1, -1}) {
        const auto rep = integrated_carleman_check(batch, f, cfg_.E, cfg_.E_infty, k.eps, sign, cfg_.eta, k.mode_lambda);
        for (std::size_t i = 0; i < rep.samples.size(); ++i) {
          const auto& q = rep.samples[i];
          w.row({h, double(sign), double(i), q.lhs, q.rhs_P, q.rhs_u, q.multiplier, q.derivative_gap,
                 q.derivative_bound_holds ? 1.0 : 0.0});
        }
        per_h.push_back({{"h", h}, {"sign", sign}, {"max_multiplier", num(rep.max_multiplier)},
                         {"log_multiplier_times_h", num(rep.log_multiplier_times_h)}, {"all_hold", rep.all_hold}});
        o.passed = o.passed && rep.all_hold;
      }
    }
    write_json(js, {{"search", search_json(s)}, {"per_h", per_h}, {"pass", o.passed}});
    o.summary = std::to_string(k.samples) + " test functions x " + std::to_string(k.h_grid.size()) + " h values";
  }

  SweepGeometry geometry(int l) const {
    SweepGeometry geo;
    geo.mode = cfg_.mode();
    geo.l = geo.mode == DimensionMode::radial ? l : 0;
    geo.n = geo.mode == DimensionMode::radial ? cfg_.resolvent.n : 1;
    geo.L_min = cfg_.resolvent.L_min;
    geo.ppw = cfg_.resolvent.ppw;
    return geo;
  }

  std::vector<int> modes() const {
    return cfg_.mode() == DimensionMode::radial ? cfg_.resolvent.modes : std::vector<int>{0};
  }

  void resolvent(StageOutcome& o) {
    o.assertion = true;
    const std::string csv = path("resolvent.csv");
    o.artifacts = {csv};
    const double E = cfg_.resolvent.E.value_or(cfg_.E);
    const EpsRule eps{cfg_.resolvent.eps_c, cfg_.resolvent.eps_q};
    CsvWriter w(csv, {"h", "eps", "E", "s", "l", "n", "L", "N", "g", "converged"}, hash_);
    runs_.clear();
    std::size_t bad = 0;
    for (int l : modes()) {
      auto runs = h_sweep(V_, E, cfg_.s, eps, cfg_.resolvent.h_grid, geometry(l));
      for (const auto& r : runs) {
        w.row({r.h, r.eps, r.E, r.s, double(r.l), double(r.n), r.L, double(r.N), r.g, r.converged ? 1.0 : 0.0});
        if (!(r.g <= (1.0 + 1e-9) / r.eps)) ++bad;
      }
      runs_.push_back(std::move(runs));
    }
    o.passed = bad == 0;
    o.summary = std::to_string(runs_.size()) + " mode(s), " + std::to_string(bad) + " runs above 1/eps";
  }

  void fit(StageOutcome& o) {
    o.assertion = false;
    const std::string csv = path("fit.csv"), js = path("fit.json");
    o.artifacts = {csv, js};
    // 1D: plain e^{C/h}, so sigma = 0.
    const double sigma = cfg_.condition == HypothesisCase::holder_1d ? 0.0
                         : sigma_rho(cfg_.condition == HypothesisCase::Linfty_decay ? 0.0 : cfg_.alpha).first;
    CsvWriter w(csv, {"model", "l", "sigma", "slope", "intercept", "r2", "rss", "points", "h_min", "h_max"}, hash_);
    json per_mode = json::array();
    const auto ms = modes();
    for (std::size_t k = 0; k < runs_.size(); ++k) {
      const auto pair = fit_exponent(runs_[k], sigma);
      auto fit_json = [](const ExponentFit& f) {
        return json{{"model", to_string(f.model)}, {"sigma", f.sigma}, {"slope", num(f.slope)},
                    {"intercept", num(f.intercept)}, {"r2", num(f.r2)}, {"rss", num(f.rss)}, {"points", f.points}};
      };
      auto row = [&](const ExponentFit& f) {
        w.row(to_string(f.model), {double(ms[k]), f.sigma, f.slope, f.intercept, f.r2, f.rss, double(f.points),
                                   f.h_min, f.h_max});
      };
      json jm{{"l", ms[k]}, {"shape", fit_json(pair.shape)}, {"loglog_valid", pair.loglog_valid}};
      row(pair.shape);
      if (pair.loglog_valid) {
        row(pair.loglog);
        jm["loglog"] = fit_json(pair.loglog);
      }
      std::vector<double> h, g;
      for (const auto& r : runs_[k])
        if (r.converged) {
          h.push_back(r.h);
          g.push_back(r.g);
        }
      std::vector<double> cand;
      for (int i = 0; i <= 12; ++i) cand.push_back(0.05 * i);
      jm["best_sigma"] = select_sigma(h, g, cand);
      per_mode.push_back(jm);
    }
    write_json(js, {{"sigma", sigma}, {"per_mode", per_mode}});
    o.summary = std::to_string(runs_.size()) + " fit(s)";
  }

  const ExperimentConfig& cfg_;
  std::string out_;
  std::ostream* log_;
  std::string hash_;
  PotentialModel V_;
  EnvelopeFn m_;
  MollifierKernel chi_;
  std::vector<double> h_grid_asc_ = cfg_.h_grid;
  std::optional<ClassCertificate> cert_;
  std::optional<SearchResult> search_;
  std::vector<std::vector<ResolventRun>> runs_;
};

}  // namespace

std::string to_string(Stage s) {
  for (const auto& [k, v] : kStageNames)
    if (k == s) return v;
  return "?";
}

Stage stage_from_string(const std::string& s) {
  for (const auto& [k, v] : kStageNames)
    if (v == s) return k;
  throw ArgumentError("unknown stage '" + s + "'");
}

int PipelineResult::exit_code() const {
  for (const auto& s : stages)
    if (s.requested && s.assertion && !s.passed) return 1;
  return 0;
}

PipelineResult run_pipeline(const ExperimentConfig& cfg, Stage stage, const std::string& out_dir,
                            std::ostream* log) {
  std::vector<Stage> order;
  std::vector<Stage> requested;
  if (stage == Stage::all) {
    requested = {Stage::check_potential, Stage::mollify, Stage::construct, Stage::certify,
                 Stage::carleman, Stage::resolvent_sweep, Stage::fit};
  } else {
    requested = {stage};
  }
  for (Stage r : requested) {
    for (Stage p : prerequisites(r))
      if (std::find(order.begin(), order.end(), p) == order.end()) order.push_back(p);
    if (std::find(order.begin(), order.end(), r) == order.end()) order.push_back(r);
  }
  const bool wants_fit = std::find(order.begin(), order.end(), Stage::fit) != order.end();
  if (wants_fit && cfg.resolvent.h_grid.size() < 5)
    throw ArgumentError("fit: fewer than 5 points (" + std::to_string(cfg.resolvent.h_grid.size()) + ")");

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ArgumentError("cannot create output directory '" + out_dir + "': " + ec.message());

  Runner runner(cfg, out_dir, log);
  PipelineResult res;
  res.config_hash = runner.hash();
  for (Stage s : order) {
    try {
      auto o = runner.run(s);
      o.requested = std::find(requested.begin(), requested.end(), s) != requested.end();
      res.stages.push_back(std::move(o));
    } catch (const StageError&) {
      throw;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw StageError(to_string(s), out_dir, e.what());
    }
  }
  return res;
}

}  // namespace clab
