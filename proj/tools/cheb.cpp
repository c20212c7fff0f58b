// Command line front end: fit and verify uniform approximations, check the
// necessary conditions, and emit a JSON report.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "cheb/cheb.hpp"

namespace {

// report destination chosen by --out; stdout otherwise
int emit(const cheb::Json& j, const std::string& out_path, int code) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write report to '" << out_path << "'\n";
      return 1;
    }
    out << j.dump(2) << "\n";
    std::cerr << "report written to " << out_path << "\n";
  }
  return code;
}

int run_command(const cheb::RunConfig& cfg) {
  auto report = cheb::run(cfg);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  return emit(cheb::report_to_json(report), cfg.out_path, report.exit_code);
}

int run_demo_command(const cheb::RunConfig& cfg) {
  auto demo = cheb::run_demo(cfg);
  for (const auto& rep : demo.reports)
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
  int code = demo.expectations_met ? 0 : 1;
  if (!demo.expectations_met)
    std::cerr << "error: demo fixtures did not reproduce the expected verdicts\n";
  return emit(cheb::demo_to_json(demo), cfg.out_path, code);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "cheb: best uniform approximation on finite point sets.\n"
      "Fits minimax coefficients, certifies optimality through the extremal\n"
      "convex hull intersection test, and checks the degree reduction and\n"
      "hyperplane cut necessary conditions."};
  app.require_subcommand(1);

  cheb::RunConfig cfg;

  auto add_common = [&cfg](CLI::App* cmd, bool needs_data) {
    auto* data = cmd->add_option("-d,--data", cfg.data_path,
                                 "dataset file (CSV rows x1,...,xd,f or JSON)");
    if (needs_data) data->required();
    cmd->add_option("--basis", cfg.basis, "basis family (monomial)")
        ->capture_default_str();
    cmd->add_option("--dim", cfg.dimension,
                    "number of coordinates (default: inferred from the data)");
    cmd->add_option("-m,--degree", cfg.degree, "total degree of the basis")
        ->capture_default_str();
    cmd->add_option("-o,--out", cfg.out_path,
                    "write the JSON report here instead of stdout");
    cmd->add_option("--tol-extremal", cfg.tol_extremal,
                    "extremal membership tolerance (default: scaled automatically)");
    cmd->add_option("--tol-lp", cfg.tol_lp, "linear program pivot tolerance")
        ->capture_default_str();
    cmd->add_option("--branch-budget", cfg.branch_budget,
                    "node budget for the reduction and cut searches")
        ->capture_default_str();
  };
  auto add_coeffs = [&cfg](CLI::App* cmd) {
    cmd->add_option("-c,--coeffs", cfg.coeffs_path,
                    "coefficient file to check (default: fit first)");
  };

  auto* fit = app.add_subcommand("fit", "compute the best uniform approximation");
  add_common(fit, true);

  auto* verify = app.add_subcommand(
      "verify", "certify optimality and run every applicable necessary condition");
  add_common(verify, true);
  add_coeffs(verify);

  auto* reduce = app.add_subcommand(
      "reduce", "check the coordinate shift degree reduction condition");
  add_common(reduce, true);
  add_coeffs(reduce);

  auto* cuts = app.add_subcommand(
      "cuts", "check the hyperplane sign flip condition (degree 2 and up)");
  add_common(cuts, true);
  add_coeffs(cuts);

  auto* demo = app.add_subcommand(
      "demo", "run the two built-in fixtures and check their expected verdicts");
  add_common(demo, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) cfg.command = cheb::RunCommand::Fit;
    if (verify->parsed()) cfg.command = cheb::RunCommand::Verify;
    if (reduce->parsed()) cfg.command = cheb::RunCommand::Reduce;
    if (cuts->parsed()) cfg.command = cheb::RunCommand::Cuts;
    if (demo->parsed()) {
      cfg.command = cheb::RunCommand::Demo;
      return run_demo_command(cfg);
    }
    return run_command(cfg);
  } catch (const cheb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
