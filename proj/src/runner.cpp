#include "bagstab/runner.hpp"

#include <chrono>
#include <cmath>

#include "bagstab/bounds.hpp"
#include "bagstab/discrete.hpp"
#include "bagstab/engine.hpp"
#include "bagstab/error.hpp"
#include "bagstab/generators.hpp"
#include "bagstab/lssa.hpp"
#include "bagstab/stability.hpp"
#include "bagstab/tree.hpp"

namespace bagstab {

namespace {

constexpr std::uint64_t kSitesDomain = 0x73697465732d6431ULL;
constexpr std::uint64_t kBaseDomain = 0x626173652d6d7374ULL;
constexpr std::uint64_t kBagDomain = 0x6261672d6d737472ULL;
constexpr std::size_t kEpsilonPoints = 64;

struct Profiles {
  LooProfile base;
  LooProfile bagged;
};

template <class F>
auto stage(const std::string& name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const std::exception& e) {
    throw FitError("stage '" + name + "': " + e.what());
  }
}

template <class Z>
Profiles profile_both(const BaseAlgorithm<Z>& alg, std::span<const Z> data, const ResolvedConfig& rc) {
  const BagScheme scheme(rc.scheme, rc.n, rc.m);
  Profiles p;
  p.base = stage("base leave-one-out", [&] {
    return loo_profile(base_fit(alg, derive_seed(rc.seed, kBaseDomain, 0)), data, alg.space);
  });
  const BagConfig cfg{scheme, rc.bags, derive_seed(rc.seed, kBagDomain, 0)};
  p.bagged = stage("bagged leave-one-out", [&] { return loo_profile(bagged_fit(alg, cfg), data, alg.space); });
  return p;
}

void fill_statistics(StabilityReport& r, const Profiles& p) {
  r.dist_base = p.base.distances;
  r.dist_bagged = p.bagged.distances;
  r.beta_sq_base = mean_square(p.base);
  r.beta_sq_bagged = mean_square(p.bagged);
  const std::vector<std::vector<double>> sets{r.dist_base, r.dist_bagged};
  r.epsilons = default_epsilon_grid(sets, kEpsilonPoints);
  r.delta_base = tail_curve(p.base, r.epsilons).deltas;
  r.delta_bagged = tail_curve(p.bagged, r.epsilons).deltas;
}

void attach_bound(StabilityReport& r, const std::string& theorem, double bound, nlohmann::json inputs) {
  r.theorem = theorem;
  r.bound = bound;
  r.bound_inputs = std::move(inputs);
  r.bound_satisfied = r.beta_sq_bagged <= bound;
  r.delta_bound.resize(r.epsilons.size());
  bool dominated = true;
  for (std::size_t k = 0; k < r.epsilons.size(); ++k) {
    r.delta_bound[k] = r.epsilons[k] > 0.0 ? tail_from_meansquare(bound, r.epsilons[k]) : 1.0;
    if (r.delta_bagged[k] > r.delta_bound[k]) dominated = false;
  }
  r.tail_dominated = dominated;
}

void attach_hilbert_bound(StabilityReport& r, double radius) {
  const HilbertBoundInput in{radius, r.n, r.inclusion_probability, r.bags};
  nlohmann::json inputs = {{"radius", radius}, {"n", r.n}, {"p", r.inclusion_probability}};
  if (r.bags) {
    inputs["B"] = *r.bags;
    attach_bound(r, "cor2", hilbert_finiteB_bound(in), inputs);
  } else {
    attach_bound(r, "thm1", hilbert_meansquare_bound(in), inputs);
  }
}

StabilityReport skeleton(const ResolvedConfig& rc, SpaceKind space) {
  StabilityReport r;
  r.experiment = to_string(rc.experiment);
  r.n = rc.n;
  r.d = rc.d;
  r.m = rc.m;
  r.bags = rc.bags;
  r.scheme = std::string(to_string(rc.scheme));
  r.space = std::string(to_string(space));
  r.seed = rc.seed;
  r.inclusion_probability = BagScheme(rc.scheme, rc.n, rc.m).inclusion_probability();
  r.theorem = "none";
  return r;
}

StabilityReport run_trees(const ResolvedConfig& rc) {
  const auto data = stage("generate", [&] { return gen_experiment1(rc.n, rc.d, rc.seed); });
  const auto sites = EvaluationSites::halton(kGridSites, rc.d, derive_seed(rc.seed, kSitesDomain, 0));
  BaseAlgorithm<LabeledPoint> alg;
  alg.fit = [sites](std::span<const LabeledPoint> d, std::uint64_t) -> OutputPoint {
    return tree_to_grid(tree_fit(d, kTreeMaxDepth), sites);
  };
  alg.order_invariant = true;
  alg.deterministic = true;
  alg.space = SpaceDescriptor(SpaceKind::grid_l2, 0.5);
  StabilityReport r = skeleton(rc, SpaceKind::grid_l2);
  fill_statistics(r, profile_both(alg, std::span<const LabeledPoint>(data), rc));
  attach_hilbert_bound(r, 0.5);
  r.notes.push_back("outputs are tree predictions on " + std::to_string(kGridSites) +
                    " shifted Halton sites; radius 1/2 is the Chebyshev radius of [0,1]-valued functions about 1/2");
  return r;
}

StabilityReport run_scm(const ResolvedConfig& rc) {
  const auto synth = stage("generate", [&] { return gen_experiment2_synthetic(rc.n, rc.d, rc.seed); });
  const PanelData& panel = synth.panel;
  const std::size_t total = rc.n;
  BaseAlgorithm<ControlUnit> alg;
  alg.fit = [treated = panel.treated, total](std::span<const ControlUnit> units, std::uint64_t) -> OutputPoint {
    return scm_fit(treated, units, total);
  };
  alg.order_invariant = true;
  alg.deterministic = true;
  alg.space = SpaceDescriptor(SpaceKind::simplex_euclidean, simplex_euclidean_radius(total));
  StabilityReport r = skeleton(rc, SpaceKind::simplex_euclidean);
  fill_statistics(r, profile_both(alg, std::span<const ControlUnit>(panel.controls), rc));
  attach_hilbert_bound(r, simplex_euclidean_radius(total));
  r.notes.push_back("synthetic panel; identity predictor weighting; omitted controls get weight 0");
  return r;
}

StabilityReport run_lssa(const ResolvedConfig& rc) {
  const auto data = stage("generate", [&] { return gen_experiment3(rc.n, rc.seed, kLssaRadius); });
  BaseAlgorithm<LssaSample> alg;
  alg.fit = [](std::span<const LssaSample> s, std::uint64_t) -> OutputPoint { return lssa_fit(s, kLssaRadius); };
  alg.order_invariant = true;
  alg.deterministic = true;
  alg.space = SpaceDescriptor(SpaceKind::sobolev, kLssaRadius);
  StabilityReport r = skeleton(rc, SpaceKind::sobolev);
  fill_statistics(r, profile_both(alg, std::span<const LssaSample>(data.samples), rc));
  attach_hilbert_bound(r, kLssaRadius);
  r.notes.push_back("Sobolev s=2 ball of radius 10 about the zero function; kmax = ceil(|D|/2) per fitted dataset");
  return r;
}

StabilityReport run_softmax(const ResolvedConfig& rc) {
  const auto rows = stage("generate", [&] { return gen_experiment4(rc.n, rc.d, rc.seed); });
  const std::size_t d = rc.d;
  BaseAlgorithm<BinaryRow> alg;
  alg.fit = [d](std::span<const BinaryRow> x, std::uint64_t) -> OutputPoint { return softmax_columns(x, d); };
  alg.order_invariant = true;
  alg.deterministic = true;
  alg.space = SpaceDescriptor(SpaceKind::simplex_tv, 1.0);
  StabilityReport r = skeleton(rc, SpaceKind::simplex_tv);
  fill_statistics(r, profile_both(alg, std::span<const BinaryRow>(rows), rc));
  const BanachBoundInput in{1.0, d, 0.0, rc.n, r.inclusion_probability};
  nlohmann::json inputs = {{"R", 1.0}, {"K", d}, {"rho", 0.0}, {"n", rc.n}, {"p", r.inclusion_probability}};
  if (rc.bags) {
    inputs["B"] = *rc.bags;
    attach_bound(r, "thm2-finiteB", banach_finiteB_bound(in, *rc.bags), inputs);
  } else {
    attach_bound(r, "thm2", banach_meansquare_bound(in), inputs);
  }
  r.notes.push_back("simplex differences are l1 combinations of the d vertex directions 2e_j (unit TV norm), so K=d, "
                    "R=1, rho=0");
  return r;
}

StabilityReport run_counterexample(const ResolvedConfig& rc) {
  std::vector<std::uint64_t> data(rc.n);
  for (std::size_t i = 0; i < rc.n; ++i) data[i] = i + 1;
  BaseAlgorithm<std::uint64_t> alg;
  alg.fit = [](std::span<const std::uint64_t> x, std::uint64_t) -> OutputPoint { return counterexample_alg(x); };
  alg.order_invariant = true;
  alg.deterministic = true;
  alg.space = SpaceDescriptor(SpaceKind::sparse_tv, 1.0);
  StabilityReport r = skeleton(rc, SpaceKind::sparse_tv);
  fill_statistics(r, profile_both(alg, std::span<const std::uint64_t>(data), rc));
  r.notes.push_back("instability witness: every leave-one-out TV distance equals p; no bound is claimed");
  return r;
}

}  // namespace

Experiment parse_experiment(const std::string& name) {
  if (name == "1") return Experiment::regression_trees;
  if (name == "2") return Experiment::synthetic_control;
  if (name == "3") return Experiment::lssa;
  if (name == "4") return Experiment::softmax;
  if (name == "counterexample") return Experiment::counterexample;
  throw ArgumentError("unknown experiment '" + name + "'");
}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::regression_trees: return "1";
    case Experiment::synthetic_control: return "2";
    case Experiment::lssa: return "3";
    case Experiment::softmax: return "4";
    case Experiment::counterexample: return "counterexample";
  }
  return "?";
}

ResolvedConfig resolve(const ExperimentConfig& cfg) {
  ResolvedConfig rc;
  rc.experiment = cfg.experiment;
  rc.seed = cfg.seed;
  rc.scheme = cfg.scheme;
  std::size_t n = 200;
  std::size_t d = 0;
  std::optional<std::size_t> bags = cfg.paper_scale ? 10'000 : 1'000;
  switch (cfg.experiment) {
    case Experiment::regression_trees:
      n = cfg.paper_scale ? 500 : 200;
      d = cfg.paper_scale ? 40 : 10;
      break;
    case Experiment::synthetic_control:
      n = 16;
      d = 6;
      break;
    case Experiment::lssa:
      n = 200;
      break;
    case Experiment::softmax:
      n = cfg.paper_scale ? 2000 : 200;
      d = cfg.paper_scale ? 100 : 50;
      break;
    case Experiment::counterexample:
      n = 10;
      bags = std::nullopt;
      break;
  }
  rc.n = cfg.n.value_or(n);
  rc.d = cfg.d.value_or(d);
  rc.m = cfg.m.value_or(rc.n / 2);
  rc.bags = cfg.exact ? std::nullopt : (cfg.bags ? cfg.bags : bags);
  require(rc.n >= 2, "n must be >= 2");
  require(rc.m >= 1 && rc.m < rc.n, "m must satisfy 1 <= m < n");
  if (rc.bags) require(*rc.bags >= 1, "B must be >= 1");
  if (cfg.experiment != Experiment::lssa && cfg.experiment != Experiment::counterexample) {
    require(rc.d >= 1, "d must be >= 1");
  } else {
    require(!cfg.d.has_value(), "--d does not apply to this experiment");
  }
  return rc;
}

StabilityReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const ResolvedConfig rc = resolve(cfg);
  StabilityReport r;
  switch (rc.experiment) {
    case Experiment::regression_trees: r = run_trees(rc); break;
    case Experiment::synthetic_control: r = run_scm(rc); break;
    case Experiment::lssa: r = run_lssa(rc); break;
    case Experiment::softmax: r = run_softmax(rc); break;
    case Experiment::counterexample: r = run_counterexample(rc); break;
  }
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

nlohmann::json run_scm_panel(const PanelData& panel, std::optional<std::size_t> m, std::optional<std::size_t> bags,
                             std::uint64_t seed) {
  panel.validate();
  const std::size_t total = panel.controls.size();
  const ScmSolution sol = scm_solve(panel.treated, panel.controls);
  auto named = [&](const SimplexWeights& w) {
    nlohmann::json out = nlohmann::json::object();
    for (std::size_t j = 0; j < total; ++j) {
      const std::string name = j < panel.control_names.size() ? panel.control_names[j] : std::to_string(j);
      out[name] = w.weights()[j];
    }
    return out;
  };
  nlohmann::json out;
  out["treated"] = panel.treated_name;
  out["controls"] = total;
  out["predictors"] = panel.treated.size();
  out["weights"] = named(scm_fit(panel.treated, panel.controls, total));
  out["objective"] = sol.objective;
  out["duality_gap"] = sol.duality_gap;
  if (!m) return out;

  BaseAlgorithm<ControlUnit> alg;
  alg.fit = [treated = panel.treated, total](std::span<const ControlUnit> units, std::uint64_t) -> OutputPoint {
    return scm_fit(treated, units, total);
  };
  alg.order_invariant = true;
  alg.deterministic = true;
  alg.space = SpaceDescriptor(SpaceKind::simplex_euclidean, simplex_euclidean_radius(total));
  ResolvedConfig rc;
  rc.experiment = Experiment::synthetic_control;
  rc.n = total;
  rc.d = panel.treated.size();
  rc.m = *m;
  rc.bags = bags;
  rc.seed = seed;
  const Profiles p = profile_both(alg, std::span<const ControlUnit>(panel.controls), rc);
  out["subbag_m"] = *m;
  out["B"] = bags ? nlohmann::json(*bags) : nlohmann::json(nullptr);
  out["bagged_weights"] = named(std::get<SimplexWeights>(p.bagged.full));
  out["beta_sq_base"] = mean_square(p.base);
  out["beta_sq_bagged"] = mean_square(p.bagged);
  return out;
}

}  // namespace bagstab
