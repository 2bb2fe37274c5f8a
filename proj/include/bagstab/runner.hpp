#pragma once

// End-to-end experiment runs: generate data, profile the base fit and its
// bagged version, and compare the bagged stability with the matching bound.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bagstab/report.hpp"
#include "bagstab/resampling.hpp"
#include "bagstab/scm.hpp"

namespace bagstab {

enum class Experiment { regression_trees = 1, synthetic_control = 2, lssa = 3, softmax = 4, counterexample = 5 };

Experiment parse_experiment(const std::string& name);
std::string to_string(Experiment e);

/// Unset sizes fall back to desk defaults (or the published sizes when
/// paper_scale is set).
struct ExperimentConfig {
  Experiment experiment = Experiment::regression_trees;
  std::optional<std::size_t> n;
  std::optional<std::size_t> d;
  std::optional<std::size_t> m;
  std::optional<std::size_t> bags;
  /// Use the exact (derandomized) bagged average instead of B bags.
  bool exact = false;
  bool paper_scale = false;
  std::uint64_t seed = 0;
  SchemeKind scheme = SchemeKind::subbag;
};

/// The configuration after defaults are filled in.
struct ResolvedConfig {
  Experiment experiment = Experiment::regression_trees;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t m = 0;
  std::optional<std::size_t> bags;  ///< nullopt means exact
  std::uint64_t seed = 0;
  SchemeKind scheme = SchemeKind::subbag;
};

inline constexpr std::size_t kTreeMaxDepth = 50;
inline constexpr std::size_t kGridSites = 4096;
inline constexpr double kLssaRadius = 10.0;

ResolvedConfig resolve(const ExperimentConfig& cfg);

StabilityReport run_experiment(const ExperimentConfig& cfg);

/// Synthetic-control weights for a panel, optionally subbagged with bag
/// size m and B bags (exact average when B is unset), plus leave-one-control-out
/// stability of both fits when bagging is requested.
nlohmann::json run_scm_panel(const PanelData& panel, std::optional<std::size_t> m, std::optional<std::size_t> bags,
                             std::uint64_t seed);

}  // namespace bagstab
