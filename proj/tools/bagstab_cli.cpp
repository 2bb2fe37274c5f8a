// Command-line front end: experiment runs, bound calculators, the
// resampling-assumption verifier, and synthetic-control fits from CSV.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bagstab/bounds.hpp"
#include "bagstab/error.hpp"
#include "bagstab/report.hpp"
#include "bagstab/resampling.hpp"
#include "bagstab/runner.hpp"
#include "bagstab/scm.hpp"

namespace {

using nlohmann::json;

constexpr int kExitError = 1;
constexpr int kExitBoundViolation = 2;

struct BoundArgs {
  std::string theorem;
  double radius = 1.0;
  std::size_t n = 0;
  double p = 0.5;
  std::optional<std::size_t> bags;
  double R = 1.0;
  std::size_t K = 1;
  double rho = 0.0;
  double C = 1.0;
  double delta = 0.05;
  std::optional<double> epsilon;
  std::string mode = "discrete";
  double parameter = 0.0;
};

json evaluate_bound(const BoundArgs& a) {
  json out;
  out["theorem"] = a.theorem;
  json inputs;
  double value = 0.0;
  if (a.theorem == "thm1" || a.theorem == "cor2") {
    const bagstab::HilbertBoundInput in{a.radius, a.n, a.p, a.bags};
    inputs = {{"radius", a.radius}, {"n", a.n}, {"p", a.p}};
    if (a.theorem == "cor2") {
      bagstab::require(a.bags.has_value(), "cor2 needs --B");
      inputs["B"] = *a.bags;
      value = bagstab::hilbert_finiteB_bound(in);
    } else if (a.epsilon) {
      inputs["epsilon"] = *a.epsilon;
      value = bagstab::hilbert_tail_bound(in, *a.epsilon);
    } else {
      value = bagstab::hilbert_meansquare_bound(in);
    }
  } else if (a.theorem == "thm2") {
    const bagstab::BanachBoundInput in{a.R, a.K, a.rho, a.n, a.p};
    inputs = {{"R", a.R}, {"K", a.K}, {"rho", a.rho}, {"n", a.n}, {"p", a.p}};
    if (a.bags) {
      inputs["B"] = *a.bags;
      value = bagstab::banach_finiteB_bound(in, *a.bags);
    } else if (a.epsilon) {
      inputs["epsilon"] = *a.epsilon;
      value = bagstab::banach_tail_bound(in, *a.epsilon);
    } else {
      value = bagstab::banach_meansquare_bound(in);
    }
  } else if (a.theorem == "hayes") {
    bagstab::require(a.bags.has_value(), "hayes needs --B");
    inputs = {{"C", a.C}, {"B", *a.bags}, {"delta", a.delta}};
    value = bagstab::hayes_deviation_bound(a.C, *a.bags, a.delta);
    out["meansquare"] = bagstab::hayes_meansquare_bound(a.C, *a.bags);
  } else if (a.theorem == "setting2") {
    bagstab::Setting2Mode mode;
    if (a.mode == "discrete") {
      mode = bagstab::Setting2Mode::discrete;
    } else if (a.mode == "lipschitz") {
      mode = bagstab::Setting2Mode::lipschitz;
    } else {
      throw bagstab::ArgumentError("--mode must be discrete or lipschitz");
    }
    inputs = {{"mode", a.mode}, {"parameter", a.parameter}, {"n", a.n}, {"p", a.p}};
    out["inputs"] = inputs;
    out["value"] = bagstab::to_json(bagstab::setting2_comparison(a.parameter, a.n, a.p, mode));
    return out;
  } else {
    throw bagstab::ArgumentError("unknown theorem '" + a.theorem + "'");
  }
  out["inputs"] = inputs;
  out["value"] = value;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Leave-one-out stability of bagged algorithms"};
  app.require_subcommand(1);

  std::string experiment;
  bagstab::ExperimentConfig cfg;
  std::optional<std::size_t> n, d, m, bags;
  std::string scheme = "subbag";
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run an experiment and report stability against its bound");
  run->add_option("--experiment", experiment, "1, 2, 3, 4 or counterexample")->required();
  run->add_option("--n", n, "sample size (controls for experiment 2)");
  run->add_option("--d", d, "features, predictors or columns");
  run->add_option("--m", m, "bag size (default n/2)");
  run->add_option("--B", bags, "number of bags");
  run->add_flag("--exact", cfg.exact, "use the exact bagged average");
  run->add_option("--seed", cfg.seed, "master seed");
  run->add_option("--scheme", scheme, "subbag or bootstrap");
  run->add_flag("--paper-scale", cfg.paper_scale, "use the published experiment sizes");
  run->add_option("--out", out_dir, "directory for report files");

  BoundArgs bound;
  std::optional<std::size_t> bound_n;
  auto* bounds = app.add_subcommand("bounds", "Evaluate a stability bound");
  bounds->add_option("--theorem", bound.theorem, "thm1, cor2, thm2, hayes or setting2")->required();
  bounds->add_option("--radius", bound.radius, "Chebyshev radius (thm1, cor2)");
  bounds->add_option("--n", bound_n, "sample size");
  bounds->add_option("--p", bound.p, "inclusion probability");
  bounds->add_option("--B", bound.bags, "number of bags");
  bounds->add_option("--R", bound.R, "approximation budget (thm2)");
  bounds->add_option("--K", bound.K, "approximation dimension (thm2)");
  bounds->add_option("--rho", bound.rho, "approximation slack (thm2)");
  bounds->add_option("--C", bound.C, "norm bound (hayes)");
  bounds->add_option("--delta", bound.delta, "failure probability (hayes)");
  bounds->add_option("--epsilon", bound.epsilon, "tail level (thm1, thm2)");
  bounds->add_option("--mode", bound.mode, "discrete or lipschitz (setting2)");
  bounds->add_option("--param", bound.parameter, "K or L (setting2)");

  std::string verify_scheme;
  std::size_t verify_n = 0, verify_m = 0;
  auto* verify = app.add_subcommand("verify-assumptions", "Check the resampling assumptions by enumeration");
  verify->add_option("--scheme", verify_scheme, "subbag or bootstrap")->required();
  verify->add_option("--n", verify_n, "dataset size")->required();
  verify->add_option("--m", verify_m, "bag size")->required();

  std::string csv, treated;
  std::optional<std::size_t> scm_m, scm_bags;
  std::uint64_t scm_seed = 0;
  auto* scm = app.add_subcommand("scm", "Synthetic-control weights from a panel CSV");
  scm->add_option("--csv", csv, "panel file")->required();
  scm->add_option("--treated", treated, "name of the treated unit")->required();
  scm->add_option("--subbag", scm_m, "subbag size");
  scm->add_option("--B", scm_bags, "number of bags (exact average when omitted)");
  scm->add_option("--seed", scm_seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*run) {
      cfg.experiment = bagstab::parse_experiment(experiment);
      cfg.scheme = bagstab::parse_scheme_kind(scheme);
      cfg.n = n;
      cfg.d = d;
      cfg.m = m;
      cfg.bags = bags;
      const bagstab::StabilityReport report = bagstab::run_experiment(cfg);
      if (!out_dir.empty()) bagstab::emit_report(report, out_dir);
      std::cout << json{{"experiment", report.experiment},
                        {"n", report.n},
                        {"m", report.m},
                        {"B", report.bags ? json(*report.bags) : json(nullptr)},
                        {"beta_sq_base", report.beta_sq_base},
                        {"beta_sq_bagged", report.beta_sq_bagged},
                        {"theorem", report.theorem},
                        {"bound", report.bound ? json(*report.bound) : json(nullptr)},
                        {"bound_satisfied", report.bound_satisfied ? json(*report.bound_satisfied) : json(nullptr)},
                        {"runtime_seconds", report.runtime_seconds}}
                       .dump(2)
                << "\n";
      if (report.bound_satisfied.has_value() && !*report.bound_satisfied) {
        std::cerr << "bound violated: beta^2 of the bagged fit exceeds the " << report.theorem << " bound\n";
        return kExitBoundViolation;
      }
      return 0;
    }
    if (*bounds) {
      bound.n = bound_n.value_or(0);
      std::cout << evaluate_bound(bound).dump(2) << "\n";
      return 0;
    }
    if (*verify) {
      const bagstab::BagScheme s(bagstab::parse_scheme_kind(verify_scheme), verify_n, verify_m);
      std::cout << bagstab::to_json(bagstab::verify_assumption1(s)).dump(2) << "\n";
      return 0;
    }
    if (*scm) {
      const bagstab::PanelData panel = bagstab::read_panel_csv(csv, treated);
      std::cout << bagstab::run_scm_panel(panel, scm_m, scm_bags, scm_seed).dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
