// End-to-end verification runs: load data, fit or accept coefficients, decide
// optimality, run the necessary-condition checks, and emit a JSON report.
// Exit codes: 0 everything optimal/holding, 2 refuted, 3 inconclusive,
// 1 reserved for hard errors (exceptions reaching the command line).
#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "cheb/approx.hpp"
#include "cheb/basis.hpp"
#include "cheb/core.hpp"
#include "cheb/io.hpp"
#include "cheb/optimality.hpp"
#include "cheb/reduction.hpp"

namespace cheb {

enum class RunCommand { Fit, Verify, Reduce, Cuts, Demo };

inline const char* to_string(RunCommand c) {
  switch (c) {
    case RunCommand::Fit: return "fit";
    case RunCommand::Verify: return "verify";
    case RunCommand::Reduce: return "reduce";
    case RunCommand::Cuts: return "cuts";
    default: return "demo";
  }
}

struct RunConfig {
  RunCommand command = RunCommand::Verify;
  std::string data_path;
  std::string basis = "monomial";
  std::size_t dimension = 0;  // 0: take the dimension from the data file
  std::size_t degree = 1;
  std::string coeffs_path;  // empty: fit before verifying
  std::string out_path;     // empty: report to stdout
  double tol_extremal = 0.0;  // 0: 1e-7 * max(1, uniform error)
  double tol_lp = 1e-9;
  std::size_t branch_budget = 10000;
};

struct VerificationReport {
  int schema = 1;
  std::string command;
  std::string data_path;
  std::size_t dataset_size = 0;
  std::size_t dimension = 0;
  std::size_t degree = 0;
  std::size_t basis_size = 0;
  Vec coefficients;
  bool fitted = false;  // true when the coefficients were fit in this run
  double uniform_error = 0.0;
  double extremal_tolerance = 0.0;
  std::optional<ExtremalSets> extremal;
  std::optional<bool> sufficient_optimal;
  std::optional<ConditionVerdict> reduction_verdict;
  std::optional<ConditionVerdict> cut_verdict;
  std::optional<OptimalityCertificate> certificate;
  std::optional<SeparationWitness> witness;
  std::optional<Vec> descent;
  std::optional<ReductionTrace> trace;
  std::optional<CutReport> cuts;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> timings_ms;
  int exit_code = 0;
};

namespace detail {

inline int verdict_exit(ConditionVerdict v) {
  switch (v) {
    case ConditionVerdict::Holds: return 0;
    case ConditionVerdict::Violated: return 2;
    default: return 3;
  }
}

// refutations (2) dominate, then inconclusive (3), then clean (0)
inline int worst_exit(const std::vector<int>& codes) {
  int worst = 0;
  for (int c : codes) {
    if (c == 2) return 2;
    if (c == 3) worst = 3;
  }
  return worst;
}

template <class F>
inline auto timed(VerificationReport& report, const char* stage, F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  auto finish = [&] {
    auto t1 = std::chrono::steady_clock::now();
    report.timings_ms.emplace_back(stage,
                                   std::chrono::duration<double, std::milli>(t1 - t0).count());
  };
  if constexpr (std::is_void_v<decltype(f())>) {
    f();
    finish();
  } else {
    auto r = f();
    finish();
    return r;
  }
}

inline Json to_json(const ExtremalSets& ex) {
  return Json{{"tolerance", ex.tolerance}, {"positive", ex.positive}, {"negative", ex.negative}};
}

inline Json to_json(const OptimalityCertificate& cert) {
  auto side = [](const std::vector<std::pair<std::size_t, double>>& s) {
    Json arr = Json::array();
    for (const auto& [i, w] : s) arr.push_back(Json{{"index", i}, {"weight", w}});
    return arr;
  };
  return Json{{"positive", side(cert.positive)},
              {"negative", side(cert.negative)},
              {"residual", cert.residual}};
}

inline Json to_json(const SeparationWitness& w) {
  return Json{{"normal", w.normal},
              {"offset", w.offset},
              {"margin", w.margin},
              {"positive_side", w.positive_side_is_plus ? "positive_extremals" : "negative_extremals"}};
}

inline Json to_json(const SignedPointSet& s) {
  return Json{{"dimension", s.dimension},
              {"degree", s.degree},
              {"points", s.points},
              {"signs", s.signs}};
}

inline Json to_json(const ReductionBranch& br) {
  return Json{{"coordinate", br.coordinate},
              {"kind", to_string(br.kind)},
              {"delta", br.delta},
              {"removed", br.removed},
              {"result", to_json(br.result)}};
}

inline Json to_json(const ReductionTrace& trace) {
  Json branches = Json::array();
  for (const auto& br : trace.branches) branches.push_back(to_json(br));
  return Json{{"verdict", to_string(trace.verdict)},
              {"nodes_explored", trace.nodes_explored},
              {"refutation_chain", std::move(branches)}};
}

inline Json to_json(const CutCheck& c) {
  Json j{{"defining_points", c.defining},
         {"degree_after", c.degree_after},
         {"feasible", c.feasible}};
  if (!c.normal.empty()) {
    j["normal"] = c.normal;
    j["offset"] = c.offset;
    j["resigned_signs"] = c.resigned_signs;
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline Json to_json(const CutReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return Json{{"verdict", to_string(r.verdict)},
              {"nodes_explored", r.nodes_explored},
              {"checks", std::move(checks)}};
}

}  // namespace detail

inline Json report_to_json(const VerificationReport& r) {
  Json j;
  j["schema"] = r.schema;
  j["command"] = r.command;
  j["dataset"] = Json{{"path", r.data_path}, {"dimension", r.dimension}, {"points", r.dataset_size}};
  j["basis"] = Json{{"kind", "monomial"}, {"degree", r.degree}, {"size", r.basis_size}};
  j["coefficients"] = r.coefficients;
  j["fitted"] = r.fitted;
  j["uniform_error"] = r.uniform_error;
  j["extremal_tolerance"] = r.extremal_tolerance;
  if (r.extremal) j["extremal"] = detail::to_json(*r.extremal);
  Json verdicts = Json::object();
  if (r.sufficient_optimal)
    verdicts["sufficient_condition"] = *r.sufficient_optimal ? "optimal" : "not_optimal";
  if (r.reduction_verdict) verdicts["necessary_reduction"] = to_string(*r.reduction_verdict);
  if (r.cut_verdict) verdicts["cut_condition"] = to_string(*r.cut_verdict);
  j["verdicts"] = std::move(verdicts);
  if (r.certificate) j["certificate"] = detail::to_json(*r.certificate);
  if (r.witness) j["witness"] = detail::to_json(*r.witness);
  if (r.descent) j["descent_direction"] = *r.descent;
  if (r.trace) j["reduction"] = detail::to_json(*r.trace);
  if (r.cuts) j["cuts"] = detail::to_json(*r.cuts);
  j["warnings"] = r.warnings;
  Json timings = Json::object();
  for (const auto& [k, v] : r.timings_ms) timings[k] = v;
  j["timings_ms"] = std::move(timings);
  j["exit_code"] = r.exit_code;
  return j;
}

namespace detail {

inline VerificationReport run_core(const RunConfig& cfg, const Dataset& data,
                                   const std::string& data_label,
                                   std::optional<Vec> preset_coefficients = {}) {
  if (cfg.basis != "monomial")
    throw PreconditionError("run: unknown basis '" + cfg.basis + "'; only 'monomial' is built in");
  if (cfg.degree == 0) throw PreconditionError("run: degree must be at least 1");
  if (cfg.tol_lp <= 0.0) throw PreconditionError("run: tol-lp must be positive");
  if (cfg.tol_extremal < 0.0) throw PreconditionError("run: tol-extremal must be nonnegative");

  VerificationReport report;
  report.command = to_string(cfg.command);
  report.data_path = data_label;
  report.dataset_size = data.size();
  report.dimension = data.dimension;
  report.degree = cfg.degree;

  auto basis = BasisSpec::monomial(data.dimension, cfg.degree);
  report.basis_size = basis.size();
  if (data.size() < basis.size() + 1)
    report.warnings.push_back(
        "dataset has " + std::to_string(data.size()) + " points; at least n+2 = " +
        std::to_string(basis.size() + 1) +
        " are recommended for a nontrivial best-approximation problem");

  LpOptions lp;
  lp.tol = cfg.tol_lp;

  if (preset_coefficients) {
    report.coefficients = std::move(*preset_coefficients);
    if (report.coefficients.size() != basis.size())
      throw PreconditionError("run: preset coefficients have " +
                              std::to_string(report.coefficients.size()) + " entries, basis needs " +
                              std::to_string(basis.size()));
  } else if (!cfg.coeffs_path.empty()) {
    report.coefficients = load_coefficients(cfg.coeffs_path);
    if (report.coefficients.size() != basis.size())
      throw PreconditionError("run: coefficients file has " +
                              std::to_string(report.coefficients.size()) + " entries, basis needs " +
                              std::to_string(basis.size()));
  } else {
    auto fit = timed(report, "fit", [&] { return fit_minimax(basis, data, lp); });
    report.coefficients = fit.coefficients;
    report.fitted = true;
  }
  report.uniform_error = uniform_error(basis, report.coefficients, data);
  report.extremal_tolerance = cfg.tol_extremal > 0.0
                                  ? cfg.tol_extremal
                                  : default_extremal_tolerance(report.uniform_error);

  const bool signs_defined = report.uniform_error > report.extremal_tolerance;
  if (cfg.command == RunCommand::Fit) {
    if (signs_defined)
      report.extremal =
          extract_extremal_sets(basis, report.coefficients, data, report.extremal_tolerance);
    else
      report.warnings.push_back(
          "approximation error below tolerance; extremal signs undefined");
    report.exit_code = 0;
    return report;
  }
  if (!signs_defined)
    throw PreconditionError("approximation error below tolerance; extremal signs undefined");

  std::vector<int> codes;
  ReductionOptions ropts;
  ropts.node_budget = cfg.branch_budget;
  ropts.lp = lp;

  if (cfg.command == RunCommand::Verify || cfg.command == RunCommand::Cuts) {
    auto res = timed(report, "verify", [&] {
      return verify_optimality(basis, report.coefficients, data, report.extremal_tolerance, lp);
    });
    report.extremal = res.extremal;
    report.sufficient_optimal = res.optimal;
    report.certificate = std::move(res.certificate);
    report.witness = std::move(res.witness);
    if (report.witness)
      report.descent = descent_direction(basis, report.coefficients, data, *report.witness);
    codes.push_back(res.optimal ? 0 : 2);
  } else {
    report.extremal = timed(report, "extremal", [&] {
      return extract_extremal_sets(basis, report.coefficients, data, report.extremal_tolerance);
    });
  }

  auto signed_set = make_signed_set(data, *report.extremal, cfg.degree);

  if (cfg.command == RunCommand::Verify || cfg.command == RunCommand::Reduce) {
    report.trace = timed(report, "reduction",
                         [&] { return verify_necessary_condition(signed_set, ropts); });
    report.reduction_verdict = report.trace->verdict;
    codes.push_back(verdict_exit(report.trace->verdict));
  }

  if (cfg.command == RunCommand::Cuts ||
      (cfg.command == RunCommand::Verify && cfg.degree >= 2)) {
    report.cuts =
        timed(report, "cuts", [&] { return cut_condition_check(signed_set, ropts); });
    report.cut_verdict = report.cuts->verdict;
    codes.push_back(verdict_exit(report.cuts->verdict));
  } else if (cfg.command == RunCommand::Verify) {
    report.warnings.push_back("cut condition needs degree at least 2; skipped");
  }

  report.exit_code = worst_exit(codes);
  return report;
}

}  // namespace detail

// Runs fit/verify/reduce/cuts against a dataset file.  Demo runs are driven
// by run_demo below.
inline VerificationReport run(const RunConfig& cfg) {
  if (cfg.command == RunCommand::Demo)
    throw PreconditionError("run: the demo command is driven by run_demo");
  if (cfg.data_path.empty()) throw PreconditionError("run: no dataset file given");
  std::optional<std::size_t> want;
  if (cfg.dimension > 0) want = cfg.dimension;
  auto data = load_dataset(cfg.data_path, want);
  return detail::run_core(cfg, data, cfg.data_path);
}

struct DemoOutcome {
  std::vector<VerificationReport> reports;
  bool expectations_met = false;
};

// Two embedded fixtures.  First: the planar spike dataset whose best linear
// fit has error exactly 1 and a one-point-versus-triangle certificate.
// Second: the six-point star under the quadratic basis with the zero model,
// where every hyperplane cut and every shift chain passes yet the full
// intersection condition fails, so the verdict is not-optimal.
inline DemoOutcome run_demo(const RunConfig& base = {}) {
  DemoOutcome demo;

  RunConfig spike_cfg = base;
  spike_cfg.command = RunCommand::Verify;
  spike_cfg.degree = 1;
  spike_cfg.coeffs_path.clear();
  auto spike = make_dataset(2, {{1.0, 1.0}, {-1.0, 1.0}, {0.0, -1.0}, {0.0, 0.0}},
                            {0.0, 0.0, 0.0, 2.0});
  auto r1 = detail::run_core(spike_cfg, spike, "<embedded spike fixture>");
  bool ok1 = r1.sufficient_optimal.value_or(false) &&
             std::abs(r1.uniform_error - 1.0) <= 1e-9 &&
             r1.reduction_verdict == ConditionVerdict::Holds && r1.certificate.has_value();

  RunConfig star_cfg = base;
  star_cfg.command = RunCommand::Verify;
  star_cfg.degree = 2;
  star_cfg.coeffs_path.clear();
  auto star = make_dataset(2,
                           {{0.0, 0.0}, {1.0, 4.0}, {2.0, 0.0}, {0.0, 2.0}, {1.0, -1.0}, {2.0, 2.0}},
                           {1.0, 1.0, 1.0, -1.0, -1.0, -1.0});
  auto r2 = detail::run_core(star_cfg, star, "<embedded star fixture>", Vec(6, 0.0));
  bool ok2 = !r2.sufficient_optimal.value_or(true) && r2.witness.has_value() &&
             r2.reduction_verdict == ConditionVerdict::Holds &&
             r2.cut_verdict == ConditionVerdict::Holds;

  demo.reports.push_back(std::move(r1));
  demo.reports.push_back(std::move(r2));
  demo.expectations_met = ok1 && ok2;
  return demo;
}

inline Json demo_to_json(const DemoOutcome& demo) {
  Json fixtures = Json::array();
  for (const auto& r : demo.reports) fixtures.push_back(report_to_json(r));
  return Json{{"schema", 1},
              {"command", "demo"},
              {"fixtures", std::move(fixtures)},
              {"expectations_met", demo.expectations_met},
              {"exit_code", demo.expectations_met ? 0 : 1}};
}

}  // namespace cheb
