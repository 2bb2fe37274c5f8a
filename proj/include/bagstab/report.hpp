#pragma once

// Stability reports: the empirical leave-one-out statistics of a base fit
// and its bagged version next to the matching theoretical bound.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bagstab {

struct StabilityReport {
  std::string experiment;
  std::size_t n = 0;
  std::size_t d = 0;  ///< feature, predictor or column count; 0 when unused
  std::size_t m = 0;
  std::optional<std::size_t> bags;  ///< nullopt for the exact average
  std::string scheme;
  std::string space;
  std::uint64_t seed = 0;
  double inclusion_probability = 0.0;

  std::vector<double> dist_base;
  std::vector<double> dist_bagged;
  double beta_sq_base = 0.0;
  double beta_sq_bagged = 0.0;

  std::vector<double> epsilons;
  std::vector<double> delta_base;
  std::vector<double> delta_bagged;
  /// min(1, bound / eps^2), or empty when no bound applies.
  std::vector<double> delta_bound;

  std::string theorem;  ///< "none" when no bound is claimed
  nlohmann::json bound_inputs = nlohmann::json::object();
  std::optional<double> bound;
  /// beta_sq_bagged <= bound; nullopt when no bound is claimed.
  std::optional<bool> bound_satisfied;
  /// delta_bagged(eps) <= delta_bound(eps) on every grid point.
  std::optional<bool> tail_dominated;
  std::vector<std::string> notes;

  double runtime_seconds = 0.0;

  friend bool operator==(const StabilityReport&, const StabilityReport&) = default;
};

/// Serializes a report. Wall-clock time is emitted only on request so that
/// repeated runs produce identical bytes.
nlohmann::json to_json(const StabilityReport& report, bool include_timing = false);
StabilityReport report_from_json(const nlohmann::json& j);

/// Writes report.json, loo_distances.csv, tail_curve.csv, histogram.svg and
/// tail.svg into `dir`, creating it if needed.
void emit_report(const StabilityReport& report, const std::filesystem::path& dir);

/// Shortest-exact decimal rendering used in CSV output (%.17g).
std::string format_real(double v);

}  // namespace bagstab
