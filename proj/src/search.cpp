#include "clab/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "clab/error.hpp"

namespace clab {

MarginProbe probe_margin(const ConstructionParams& p, const PotentialModel& V, const EnvelopeFn& m,
                         const ClassCertificate& cert, const MollifierKernel& chi,
                         std::size_t n_points) {
  const auto prof = construct_profile(p, m, n_points);
  const auto sp = build_smoothed(V, p.h, p.rho, p.condition, cert.delta_V, chi, prof.grid.nodes());
  const auto rep = key_margin(prof, sp, p.E, p.E_infty, p.K);
  return {p.h, rep.min_margin, rep.argmin_r, rep.pass && rep.chain_algebra_ok && rep.chain_target_ok};
}

namespace {

struct Evaluator {
  const SearchInput& in;
  const PotentialModel& V;
  const EnvelopeFn& m;
  const ClassCertificate& cert;
  const MollifierKernel& chi;
  const SearchOptions& opt;
  SearchResult& res;

  ConstructionParams params(double tau0, double a0, double delta, double h) const {
    return make_params(in.condition, in.alpha, in.eta, tau0, a0, in.K, h, in.E, in.E_infty, delta,
                       cert.R_EV);
  }

  // Probes every h; stops at the first failure and records it.
  bool all_pass(double tau0, double a0, double delta, std::span<const double> hs,
                std::vector<MarginProbe>* out) {
    for (double h : hs) {
      const auto pr = probe_margin(params(tau0, a0, delta, h), V, m, cert, chi, opt.n_points);
      ++res.evaluations;
      if (out) out->push_back(pr);
      if (!pr.pass) {
        res.worst_margin = pr.min_margin;
        res.worst_r = pr.argmin_r;
        res.worst_h = h;
        return false;
      }
    }
    return true;
  }
};

}  // namespace

SearchResult search_constants(const SearchInput& in, const PotentialModel& V, const EnvelopeFn& m,
                              const ClassCertificate& cert, const MollifierKernel& chi,
                              std::span<const double> h_grid, const SearchOptions& opt) {
  if (h_grid.empty()) throw ArgumentError("search_constants: empty h grid");
  std::vector<double> hs(h_grid.begin(), h_grid.end());
  // Small h first: failures there are the most common and the cheapest to detect
  // for the radial ladder, and the order does not affect the accepted constants.
  std::sort(hs.begin(), hs.end());
  SearchResult res;
  Evaluator ev{in, V, m, cert, chi, opt, res};
  const bool one_d = in.condition == HypothesisCase::holder_1d;
  const double a0_start = std::max(1.0, cert.R_EV + 1.0);

  bool found = false;
  double tau0 = opt.tau0_start;
  for (int i = 0; i < opt.tau0_steps && !found; ++i, tau0 *= opt.tau0_factor) {
    if (one_d) {
      double delta = opt.delta_start, fail = std::numeric_limits<double>::quiet_NaN();
      for (int k = 0; k < opt.delta_steps; ++k, delta *= opt.delta_factor) {
        if (ev.all_pass(tau0, 1.0, delta, hs, nullptr)) {
          found = true;
          break;
        }
        fail = delta;
      }
      if (!found) continue;
      if (!std::isnan(fail)) {
        double lo = delta, hi = fail;
        for (int b = 0; b < opt.delta_bisections; ++b) {
          const double mid = std::sqrt(lo * hi);
          (ev.all_pass(tau0, 1.0, mid, hs, nullptr) ? lo : hi) = mid;
        }
        delta = lo;
      }
      res.tau0 = tau0;
      res.a0 = 1.0;
      res.delta = delta;
    } else {
      double a0 = a0_start;
      for (int k = 0; k < opt.a0_steps; ++k, a0 *= opt.a0_factor) {
        if (ev.all_pass(tau0, a0, 1.0, hs, nullptr)) {
          found = true;
          res.tau0 = tau0;
          res.a0 = a0;
          res.delta = 1.0;
          break;
        }
      }
    }
  }
  if (!found) {
    res.message = "ladder exhausted; worst margin " + std::to_string(res.worst_margin) +
                  " at r = " + std::to_string(res.worst_r) + ", h = " + std::to_string(res.worst_h);
    return res;
  }
  res.success = true;
  ev.all_pass(res.tau0, res.a0, res.delta, hs, &res.probes);
  res.params = ev.params(res.tau0, res.a0, res.delta, hs.front());

  // h0: climb from the largest grid value while the margin stays nonnegative and
  // the smoothing hypothesis admits h.
  double h_cap = opt.h0_cap;
  if (in.condition == HypothesisCase::holder_radial)
    h_cap = std::min(h_cap, std::pow(cert.delta_V, 1.0 / res.params.rho));
  if (one_d) h_cap = std::min(h_cap, cert.delta_V);
  res.h0 = hs.back();
  for (double h = hs.back() * opt.h0_factor; h <= h_cap * (1.0 + 1e-12); h *= opt.h0_factor) {
    const auto pr = probe_margin(ev.params(res.tau0, res.a0, res.delta, std::min(h, h_cap)), V, m,
                                 cert, chi, opt.n_points);
    ++res.evaluations;
    if (!pr.pass) break;
    res.h0 = std::min(h, h_cap);
  }
  return res;
}

}  // namespace clab
