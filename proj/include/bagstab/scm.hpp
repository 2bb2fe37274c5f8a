#pragma once

// Synthetic control weights: the convex combination of control units whose
// predictors are closest (in l2) to the treated unit's.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bagstab/spaces.hpp"

namespace bagstab {

/// One control unit; `id` is its coordinate in the full weight vector.
struct ControlUnit {
  std::size_t id = 0;
  std::vector<double> predictors;
};

struct PanelData {
  std::vector<double> treated;
  std::vector<ControlUnit> controls;
  std::vector<std::string> control_names;  ///< optional, parallel to controls
  std::string treated_name;

  void validate() const;
};

struct ScmSolution {
  std::vector<double> weights;  ///< over the supplied units, in id order
  std::vector<std::size_t> ids;
  double objective = 0.0;
  double duality_gap = 0.0;
  std::size_t iterations = 0;
};

/// Minimizes ||treated - sum_j w_j c_j||^2 over the simplex with Wolfe's
/// min-norm-point method (a fully corrective conditional-gradient scheme),
/// stopping at Frank-Wolfe duality gap <= 1e-10. Duplicate ids are merged
/// and units are processed in id order.
ScmSolution scm_solve(std::span<const double> treated, std::span<const ControlUnit> controls);

/// scm_solve spread onto `total_units` coordinates; units absent from
/// `controls` get weight 0.
SimplexWeights scm_fit(std::span<const double> treated, std::span<const ControlUnit> controls,
                       std::size_t total_units);
SimplexWeights scm_fit(const PanelData& panel);

/// Objective ||treated - C^T w||^2 for weights over `controls` (in order).
double scm_objective(std::span<const double> treated, std::span<const ControlUnit> controls,
                     std::span<const double> weights);

/// Reads a panel CSV: header row, unit name in the first column, one
/// predictor per remaining column. The row named `treated` becomes the
/// treated unit and the others become controls, in file order.
PanelData read_panel_csv(const std::filesystem::path& path, const std::string& treated);

}  // namespace bagstab
