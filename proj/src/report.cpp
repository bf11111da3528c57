// SPDX-License-Identifier: Apache-2.0
#include "woldkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "woldkit/wold.hpp"

namespace woldkit {

Json tolerance_json(const TolerancePolicy& pol) {
  Json t;
  t["rank"] = pol.rank;
  t["orth"] = pol.orth;
  t["psd"] = pol.psd;
  t["sub"] = pol.sub;
  t["max_columns"] = pol.max_columns;
  return t;
}

Json number_json(double x) { return std::isfinite(x) ? Json(x) : Json("infeasible"); }

namespace {

Json regularity_json(const RegularityReport& r) {
  Json j;
  j["regular"] = r.regular();
  j["kernel_inclusion"] = r.kernel_inclusion_holds;
  j["kernel_residual"] = r.kernel_residual;
  j["range_closed"] = r.range_closed;
  j["stabilized_at"] = r.stabilized_at;
  j["horizon"] = r.horizon;
  j["anomaly"] = r.anomaly;
  Json per = Json::array();
  for (const auto& w : r.per_m) per.push_back({{"m", w.m}, {"holds", w.holds}, {"residual", w.residual}});
  j["condition_per_m"] = per;
  if (r.boundary) {
    j["boundary"] = {{"interior_holds", r.interior_holds}, {"interior_depth", r.interior_depth}};
  }
  return j;
}

Json growth_json(const GrowthReport& g) {
  Json j;
  j["status"] = "computed";
  j["horizon"] = g.horizon;
  Json lv = Json::array();
  for (const auto& l : g.levels)
    lv.push_back({{"m", l.m}, {"feasible", l.feasible}, {"minimal_d", number_json(l.minimal_d)},
                  {"psd_residual", l.psd_residual}});
  j["levels"] = lv;
  Json ps = Json::array();
  for (double x : g.partial_sums) ps.push_back(number_json(x));
  j["partial_sums"] = ps;
  j["pattern"] = g.pattern;
  j["divergence_note"] = g.divergence_note;
  return j;
}

Json wold_json(const WoldResult& w) {
  Json j;
  j["status"] = "computed";
  j["dim_W"] = w.W.dim();
  j["dim_W_dagger"] = w.W_dagger.dim();
  j["dim_generated"] = w.bracketW.dim();
  j["dim_Rinf"] = w.Rinf.dim();
  j["orthogonal"] = w.orthogonal;
  j["spans_H"] = w.spans_H;
  j["reduces"] = w.reduces;
  j["unitary_restriction"] = w.unitary_restriction;
  j["dagger_equals_adjoint_on_Rinf"] = w.dagger_equals_adjoint_on_Rinf;
  j["isometric_on_Rinf"] = w.isometric_on_Rinf;
  j["fully_coisometric_on_Rinf"] = w.fully_coisometric_on_Rinf;
  j["biregular"] = w.biregular;
  j["hyper_dagger"] = w.hyper_dagger;
  j["unique"] = w.hyper_dagger;
  j["projector_sum_residual"] = w.projector_sum_residual;
  j["projector_product_residual"] = w.projector_product_residual;
  j["restriction_residual"] = w.restriction_residual;
  return j;
}

Json skipped(const std::string& why) { return {{"status", "skipped"}, {"reason", why}}; }

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

Json shift_json(const UnilateralSpec& spec, const WoldResult& w, const TolerancePolicy& pol, bool& holds) {
  Json j;
  j["kind"] = "unilateral";
  auto c = check_unilateral_weight_condition(spec, {}, spec.L, spec.L, pol);
  Json md = Json::array();
  for (double x : c.minimal_d) md.push_back(number_json(x));
  j["minimal_d"] = md;
  j["gamma_Z"] = c.gamma_z;
  j["gamma_hypothesis"] = c.gamma_hypothesis;
  j["pairs_covered"] = c.covered;
  j["pairs_skipped"] = c.skipped;
  const bool cond = c.holds && c.gamma_hypothesis;
  j["condition_holds"] = cond;
  holds = !cond || (w.Rinf.is_zero() && w.bracketW.dim() == w.Rinf.ambient_dim());
  j["assertions_hold"] = holds;
  return j;
}

Json shift_json(const BilateralSpec& spec, const WoldResult& w, bool& holds) {
  Json j;
  j["kind"] = "bilateral";
  const BilateralBuild b = build_bilateral_shift(spec);
  Json g = Json::array();
  for (const auto& e : b.g) g.push_back({{"i", e.i}, {"m", e.m}, {"target", e.target}, {"in_window", e.in_window}});
  j["index_map"] = g;
  bool cond = false;
  try {
    auto c = check_bilateral_weight_condition(spec, {}, spec.M);
    Json md = Json::array();
    for (double x : c.minimal_d) md.push_back(number_json(x));
    j["minimal_d"] = md;
    j["tuples_checked"] = c.checked;
    j["tuples_skipped"] = c.skipped;
    j["violations"] = c.violations.size();
    cond = c.holds;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ConditionIViolated) throw;
    j["condition_i"] = e.what();
  }
  j["condition_holds"] = cond;
  holds = !cond || (w.reduces && w.unitary_restriction);
  j["assertions_hold"] = holds;
  return j;
}

}  // namespace

Analysis analyze(const Instance& inst, const AnalyzeOptions& opts) {
  const TolerancePolicy& pol = opts.pol;
  Representation rep;
  std::string kind = "representation";
  if (const auto* r = std::get_if<Representation>(&inst)) {
    rep = *r;
  } else if (const auto* u = std::get_if<UnilateralSpec>(&inst)) {
    rep = build_unilateral_shift(*u, pol);
    kind = "unilateral";
  } else {
    rep = build_bilateral_shift(std::get<BilateralSpec>(inst), pol).rep;
    kind = "bilateral";
  }

  Analysis out;
  Json& j = out.report;
  j["tool"] = {{"name", "woldkit"}, {"version", WOLDKIT_VERSION}};
  j["input"] = {{"path", opts.input}, {"kind", kind}, {"dim_E", rep.d}, {"dim_H", rep.m}};
  j["tolerance"] = tolerance_json(pol);

  const WoldResult w = wold_decompose(rep, {}, opts.horizon, pol, false);
  j["regularity"] = regularity_json(w.regularity);
  j["gamma"] = number_json(w.gamma);

  std::vector<std::string> warnings;
  if (rank_info(rep.V, pol).near_cutoff) warnings.push_back("rank: a singular value of V lies near the cutoff");
  {
    const RangeChain chain = range_chain(rep, pol);
    for (std::size_t n = 0; n < chain.near_cutoff.size(); ++n)
      if (chain.near_cutoff[n]) {
        warnings.push_back("rank: a singular value of V_" + std::to_string(n + 1) + " lies near the cutoff");
        break;
      }
  }
  if (w.regularity.anomaly) warnings.push_back("tolerance anomaly: condition witnesses disagree with the kernel inclusion");
  if (rep.has_boundary())
    warnings.push_back("boundary: truncated model, verdicts use interior columns up to depth " +
                       std::to_string(rep.safe_depth));

  const auto& failed = w.failed_preconditions;
  const bool early = std::find(failed.begin(), failed.end(), "regular") != failed.end() ||
                     std::find(failed.begin(), failed.end(), "gamma >= 1") != failed.end();
  j["growth"] = early ? skipped("requires " + join(failed)) : growth_json(w.growth);
  j["wold"] = failed.empty() ? wold_json(w) : skipped("requires " + join(failed));
  j["failed_preconditions"] = failed;

  bool shift_ok = true;
  if (const auto* u = std::get_if<UnilateralSpec>(&inst))
    j["shift"] = shift_json(*u, w, pol, shift_ok);
  else if (const auto* b = std::get_if<BilateralSpec>(&inst))
    j["shift"] = shift_json(*b, w, shift_ok);
  if (!shift_ok) warnings.push_back("shift assertions failed");
  j["warnings"] = warnings;

  out.exit_code = failed.empty() && shift_ok ? 0 : 2;

  std::ostringstream t;
  t << "woldkit " << WOLDKIT_VERSION << "  " << kind << "  dim_E=" << rep.d << " dim_H=" << rep.m << "\n";
  t << "regular: " << (w.regularity.regular() ? "yes" : "no") << "  gamma: " << w.gamma
    << "  horizon: " << w.regularity.horizon << "\n";
  if (failed.empty()) {
    t << "W: " << w.W.dim() << "  [W]: " << w.bracketW.dim() << "  R_inf: " << w.Rinf.dim()
      << "  decomposes: " << (w.decomposes() ? "yes" : "no") << "  reduces: " << (w.reduces ? "yes" : "no")
      << "  unitary on R_inf: " << (w.unitary_restriction ? "yes" : "no") << "\n";
  } else {
    t << "preconditions failed: " << join(failed) << "\n";
  }
  for (const auto& s : warnings) t << "warning: " << s << "\n";
  out.text = t.str();
  return out;
}

}  // namespace woldkit
