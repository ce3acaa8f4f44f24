#include "ppk/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace ppk {

namespace {

using nlohmann::json;

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;  // JSON has no inf/nan
}

json complex_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

const char* tag_name(RootTag t) {
  switch (t) {
    case RootTag::Gmres: return "gmres";
    case RootTag::Balance: return "balance";
    case RootTag::Stability: return "stability";
  }
  return "?";
}

}  // namespace

json to_json(const SolveReport& r) {
  json history = json::array();
  for (const auto& c : r.history)
    history.push_back(json{{"cycle", c.cycle},
                           {"shortcut_resnorm", finite_or_null(c.shortcut_resnorm)},
                           {"true_resnorm", finite_or_null(c.true_resnorm)},
                           {"matvecs_cum", c.matvecs_cum}});
  return json{{"schema", r.schema},
              {"seed", r.seed},
              {"converged", r.converged},
              {"stagnated", r.stagnated},
              {"cycles", r.cycles},
              {"iterations", r.iterations},
              {"degree", r.degree},
              {"added_copies", r.added_copies},
              {"degree_retries", r.degree_retries},
              {"balance", r.balance},
              {"final_resnorm", finite_or_null(r.final_resnorm)},
              {"final_true_resnorm", finite_or_null(r.final_true_resnorm)},
              {"matvecs", r.matvecs},
              // vecops/dots include polynomial-application internals
              {"vecops", r.counters.vecops},
              {"dots", r.counters.dots},
              {"correction_applied", r.correction_applied},
              {"correction_resnorm", finite_or_null(r.correction_resnorm)},
              {"notes", r.notes},
              {"history", std::move(history)}};
}

json to_json(const CorrectionReport& r) {
  return json{{"resnorm_before", finite_or_null(r.resnorm_before)},
              {"resnorm_after_deflation", finite_or_null(r.resnorm_after_deflation)},
              {"resnorm_after_gmres", finite_or_null(r.resnorm_after_gmres)},
              {"deflation_vectors", r.deflation_vectors},
              {"spurious_roots", r.spurious_roots},
              {"deflation_skipped", r.deflation_skipped}};
}

json to_json(const PofReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back(json{{"root", complex_json(e.root)},
                           {"multiplicity", e.multiplicity},
                           {"is_pair", e.is_pair},
                           {"tag", tag_name(e.tag)},
                           {"log10_pof", finite_or_null(e.log10_pof)},
                           {"residual_norm", e.residual_norm < 0 ? json(nullptr)
                                                                 : json(e.residual_norm)},
                           {"spurious", e.spurious},
                           {"side", e.side}});
  return json{{"larger_side", r.larger_side},
              {"max_log10_pof", finite_or_null(r.max_log10)},
              {"entries", std::move(entries)}};
}

json to_json(const SplineReport& r) {
  json iv = json::array();
  for (const auto& i : r.intervals)
    iv.push_back(json{{"left", i.left},
                      {"right", i.right},
                      {"critical", i.critical},
                      {"value", finite_or_null(i.value)},
                      {"flagged", i.flagged}});
  return json{{"applicable", r.applicable}, {"pass", r.pass}, {"intervals", std::move(iv)}};
}

json to_json(const PPGmresResult& r) {
  json roots = json::array();
  for (Complex z : r.roots) roots.push_back(complex_json(z));
  return json{{"schema", r.report.schema},
              {"report", to_json(r.report)},
              {"corrections", to_json(r.correction)},
              {"pof", to_json(r.pof_report)},
              {"spline", to_json(r.spline)},
              {"roots", std::move(roots)}};
}

json to_json(const EigenResult& r) {
  json vals = json::array(), resids = json::array();
  for (Complex z : r.values) vals.push_back(complex_json(z));
  for (double v : r.residuals) resids.push_back(finite_or_null(v));
  return json{{"schema", 1},
              {"seed", r.seed},
              {"converged", r.converged},
              {"cycles", r.cycles},
              {"matvecs", r.matvecs},
              {"degree", r.degree},
              {"warning", r.warning},
              {"values", std::move(vals)},
              {"residuals", std::move(resids)}};
}

void write_history_csv(std::ostream& os, const SolveReport& r) {
  os << "cycle,shortcut_resnorm,true_resnorm,matvecs_cum\n";
  char buf[128];
  for (const auto& c : r.history) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%lld\n", c.cycle, c.shortcut_resnorm,
                  c.true_resnorm, static_cast<long long>(c.matvecs_cum));
    os << buf;
  }
}

std::string render_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace ppk
