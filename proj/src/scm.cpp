#include "bagstab/scm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Dense>

#include "bagstab/error.hpp"

namespace bagstab {

namespace {

constexpr double kGapTolerance = 1e-10;
constexpr std::size_t kMaxIterations = 100'000;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void PanelData::validate() const {
  require(!treated.empty(), "PanelData: treated unit has no predictors");
  require(controls.size() >= 2, "PanelData: need at least two control units");
  for (double v : treated) require(std::isfinite(v), "PanelData: non-finite treated predictor");
  for (const auto& c : controls) {
    if (c.predictors.size() != treated.size()) throw ShapeError("PanelData: predictor count mismatch");
    for (double v : c.predictors) require(std::isfinite(v), "PanelData: non-finite control predictor");
  }
}

double scm_objective(std::span<const double> treated, std::span<const ControlUnit> controls,
                     std::span<const double> weights) {
  if (controls.size() != weights.size()) throw ShapeError("scm_objective: weight count mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < treated.size(); ++k) {
    double r = treated[k];
    for (std::size_t j = 0; j < controls.size(); ++j) r -= weights[j] * controls[j].predictors[k];
    s += r * r;
  }
  return s;
}

ScmSolution scm_solve(std::span<const double> treated, std::span<const ControlUnit> controls) {
  require(!controls.empty(), "scm_solve: no control units");
  const std::size_t p = treated.size();
  std::vector<const ControlUnit*> units;
  for (const auto& c : controls) {
    if (c.predictors.size() != p) throw ShapeError("scm_solve: predictor count mismatch");
    units.push_back(&c);
  }
  std::stable_sort(units.begin(), units.end(), [](auto* a, auto* b) { return a->id < b->id; });
  units.erase(std::unique(units.begin(), units.end(), [](auto* a, auto* b) { return a->id == b->id; }),
              units.end());
  const std::size_t J = units.size();

  // Column j holds c_j - treated; the goal is the min-norm point of their hull.
  Eigen::MatrixXd P(p, J);
  for (std::size_t j = 0; j < J; ++j) {
    for (std::size_t k = 0; k < p; ++k) P(k, j) = units[j]->predictors[k] - treated[k];
  }

  std::vector<std::size_t> corral;
  std::vector<double> lambda;
  {
    Eigen::Index start = 0;
    P.colwise().squaredNorm().minCoeff(&start);
    corral.push_back(static_cast<std::size_t>(start));
    lambda.push_back(1.0);
  }
  Eigen::VectorXd y = P.col(static_cast<Eigen::Index>(corral[0]));

  ScmSolution sol;
  std::size_t iterations = 0;
  double gap = INFINITY;
  while (iterations < kMaxIterations) {
    ++iterations;
    const Eigen::VectorXd scores = P.transpose() * y;
    Eigen::Index best = 0;
    scores.minCoeff(&best);
    gap = 2.0 * (y.squaredNorm() - scores(best));
    if (gap <= kGapTolerance) break;
    if (std::find(corral.begin(), corral.end(), static_cast<std::size_t>(best)) != corral.end()) break;
    corral.push_back(static_cast<std::size_t>(best));
    lambda.push_back(0.0);

    // Minor cycles: move toward the affine minimizer of the corral, dropping
    // points whose weight reaches zero.
    while (iterations < kMaxIterations) {
      ++iterations;
      const std::size_t s = corral.size();
      Eigen::VectorXd alpha(static_cast<Eigen::Index>(s));
      if (s == 1) {
        alpha(0) = 1.0;
      } else {
        const Eigen::VectorXd base = P.col(static_cast<Eigen::Index>(corral[0]));
        Eigen::MatrixXd M(p, static_cast<Eigen::Index>(s - 1));
        for (std::size_t k = 1; k < s; ++k) M.col(static_cast<Eigen::Index>(k - 1)) = P.col(static_cast<Eigen::Index>(corral[k])) - base;
        const Eigen::VectorXd beta = M.colPivHouseholderQr().solve(-base);
        alpha(0) = 1.0 - beta.sum();
        alpha.tail(static_cast<Eigen::Index>(s - 1)) = beta;
      }
      if ((alpha.array() > 1e-14).all()) {
        for (std::size_t k = 0; k < s; ++k) lambda[k] = alpha(static_cast<Eigen::Index>(k));
        break;
      }
      double theta = 1.0;
      std::size_t leaving = 0;
      for (std::size_t k = 0; k < s; ++k) {
        const double a = alpha(static_cast<Eigen::Index>(k));
        if (a <= 1e-14) {
          const double t = lambda[k] / (lambda[k] - a);
          if (t < theta) {
            theta = t;
            leaving = k;
          }
        }
      }
      for (std::size_t k = 0; k < s; ++k) {
        lambda[k] = theta * alpha(static_cast<Eigen::Index>(k)) + (1.0 - theta) * lambda[k];
      }
      lambda[leaving] = 0.0;
      std::vector<std::size_t> kept_corral;
      std::vector<double> kept_lambda;
      for (std::size_t k = 0; k < s; ++k) {
        if (lambda[k] > 1e-15) {
          kept_corral.push_back(corral[k]);
          kept_lambda.push_back(lambda[k]);
        }
      }
      corral = std::move(kept_corral);
      lambda = std::move(kept_lambda);
    }
    double total = 0.0;
    for (double l : lambda) total += l;
    for (double& l : lambda) l /= total;
    y.setZero();
    for (std::size_t k = 0; k < corral.size(); ++k) y += lambda[k] * P.col(static_cast<Eigen::Index>(corral[k]));
  }
  if (gap > kGapTolerance) {
    // A stalled corral still yields a valid gap; accept it only if tight.
    if (iterations >= kMaxIterations || gap > 1e-8) {
      throw ConvergenceError("scm_solve: duality gap " + std::to_string(gap) + " after " +
                             std::to_string(iterations) + " iterations");
    }
  }

  sol.ids.resize(J);
  sol.weights.assign(J, 0.0);
  for (std::size_t j = 0; j < J; ++j) sol.ids[j] = units[j]->id;
  for (std::size_t k = 0; k < corral.size(); ++k) sol.weights[corral[k]] = lambda[k];
  sol.objective = y.squaredNorm();
  sol.duality_gap = gap;
  sol.iterations = iterations;
  return sol;
}

SimplexWeights scm_fit(std::span<const double> treated, std::span<const ControlUnit> controls,
                       std::size_t total_units) {
  const ScmSolution sol = scm_solve(treated, controls);
  std::vector<double> full(total_units, 0.0);
  for (std::size_t j = 0; j < sol.ids.size(); ++j) {
    if (sol.ids[j] >= total_units) throw ShapeError("scm_fit: unit id outside the weight vector");
    full[sol.ids[j]] = sol.weights[j];
  }
  return SimplexWeights(std::move(full));
}

SimplexWeights scm_fit(const PanelData& panel) {
  panel.validate();
  std::size_t total = 0;
  for (const auto& c : panel.controls) total = std::max(total, c.id + 1);
  return scm_fit(panel.treated, panel.controls, total);
}

PanelData read_panel_csv(const std::filesystem::path& path, const std::string& treated) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ArgumentError("panel CSV is empty: " + path.string());
  const std::size_t columns = split_csv_line(line).size();
  require(columns >= 2, "panel CSV needs a name column and at least one predictor");

  PanelData panel;
  bool found = false;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != columns) {
      throw ArgumentError("panel CSV line " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                          " fields, got " + std::to_string(fields.size()));
    }
    std::vector<double> values;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(fields[k], &used));
        if (used != fields[k].size()) throw std::invalid_argument(fields[k]);
      } catch (const std::exception&) {
        throw ArgumentError("panel CSV line " + std::to_string(line_no) + ": not a number: '" + fields[k] + "'");
      }
    }
    if (fields[0] == treated) {
      require(!found, "panel CSV: treated unit '" + treated + "' appears twice");
      found = true;
      panel.treated = std::move(values);
      panel.treated_name = treated;
    } else {
      panel.controls.push_back({panel.controls.size(), std::move(values)});
      panel.control_names.push_back(fields[0]);
    }
  }
  require(found, "panel CSV: no row named '" + treated + "'");
  panel.validate();
  return panel;
}

}  // namespace bagstab
