#pragma once

// Output spaces for bagged algorithms: the point types, their metrics, and
// the weighted averaging that bagging needs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace bagstab {

/// A point of R^d under the Euclidean norm.
class VectorPoint {
 public:
  VectorPoint() = default;
  explicit VectorPoint(std::vector<double> coords);

  const std::vector<double>& coords() const { return coords_; }
  std::size_t size() const { return coords_.size(); }

  friend bool operator==(const VectorPoint&, const VectorPoint&) = default;

 private:
  std::vector<double> coords_;
};

/// A probability vector in the simplex of dimension K-1.
///
/// Entries down to -1e-12 are clamped to zero and the vector renormalized;
/// anything further outside the simplex is rejected.
class SimplexWeights {
 public:
  static constexpr double kClampTolerance = 1e-12;
  static constexpr double kSumTolerance = 1e-9;

  SimplexWeights() = default;
  explicit SimplexWeights(std::vector<double> weights);

  /// The vertex e_j of the K-dimensional simplex.
  static SimplexWeights vertex(std::size_t dimension, std::size_t j);
  static SimplexWeights uniform(std::size_t dimension);

  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return weights_.size(); }

  friend bool operator==(const SimplexWeights&, const SimplexWeights&) = default;

 private:
  std::vector<double> weights_;
};

/// An even real function on [-pi, pi] stored by its Fourier coefficients
/// a_0..a_kmax, so f(x) = a_0 + 2 sum_{k>=1} a_k cos(kx).
class FourierEvenFunction {
 public:
  FourierEvenFunction() = default;
  FourierEvenFunction(std::vector<double> coeffs, double smoothness);

  const std::vector<double>& coeffs() const { return coeffs_; }
  double smoothness() const { return smoothness_; }
  std::size_t kmax() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

  /// Sobolev weight of coefficient k, with the +-k pair folded in:
  /// 1 for k = 0 and 2 (1 + k^2)^s otherwise.
  static double weight(std::size_t k, double smoothness);

  /// Squared Sobolev norm sum_k weight(k) a_k^2.
  double squared_norm() const;
  double evaluate(double x) const;

  friend bool operator==(const FourierEvenFunction&, const FourierEvenFunction&) = default;

 private:
  std::vector<double> coeffs_;
  double smoothness_ = 0.0;
};

/// A fixed set of M evaluation sites in [0,1]^d, stored row-major.
class EvaluationSites {
 public:
  EvaluationSites(std::size_t dimension, std::vector<double> coords);

  /// Randomly shifted Halton points; the shift is drawn from `seed`.
  static std::shared_ptr<const EvaluationSites> halton(std::size_t count,
                                                       std::size_t dimension,
                                                       std::uint64_t seed);

  std::size_t dimension() const { return dimension_; }
  std::size_t count() const { return coords_.size() / dimension_; }
  std::span<const double> site(std::size_t i) const {
    return {coords_.data() + i * dimension_, dimension_};
  }
  /// Coordinate f of every site, in site order.
  std::span<const double> column(std::size_t f) const { return {columns_.data() + f * count(), count()}; }

 private:
  std::size_t dimension_;
  std::vector<double> coords_;
  std::vector<double> columns_;
};

/// A function [0,1]^d -> R known through its values on shared sites.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(std::shared_ptr<const EvaluationSites> sites, std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  const std::shared_ptr<const EvaluationSites>& sites() const { return sites_; }
  std::size_t size() const { return values_.size(); }

  friend bool operator==(const GridFunction& a, const GridFunction& b) {
    return a.sites_ == b.sites_ && a.values_ == b.values_;
  }

 private:
  std::shared_ptr<const EvaluationSites> sites_;
  std::vector<double> values_;
};

/// A finitely supported distribution over string keys.
class SparseDistribution {
 public:
  static constexpr double kSumTolerance = 1e-12;

  SparseDistribution() = default;
  explicit SparseDistribution(std::map<std::string, double> mass);

  static SparseDistribution point_mass(std::string key);

  const std::map<std::string, double>& mass() const { return mass_; }
  double at(const std::string& key) const;

  friend bool operator==(const SparseDistribution&, const SparseDistribution&) = default;

 private:
  std::map<std::string, double> mass_;
};

using OutputPoint =
    std::variant<VectorPoint, SimplexWeights, FourierEvenFunction, GridFunction, SparseDistribution>;

enum class SpaceKind { euclidean, simplex_tv, simplex_euclidean, sobolev, grid_l2, sparse_tv };

std::string_view to_string(SpaceKind kind);
SpaceKind parse_space_kind(std::string_view name);

struct SpaceDescriptor {
  SpaceKind kind = SpaceKind::euclidean;
  std::optional<double> radius_hint;

  SpaceDescriptor() = default;
  explicit SpaceDescriptor(SpaceKind k, std::optional<double> radius = std::nullopt);
};

/// Metric of `space` between two points of that space.
double distance(const SpaceDescriptor& space, const OutputPoint& a, const OutputPoint& b);

/// Coordinatewise weighted average; `weights` must sum to 1 within 1e-9.
/// Fourier functions of different kmax are zero-padded to the longer one.
OutputPoint affine_combine(std::span<const OutputPoint> points, std::span<const double> weights);

/// Running weighted sum of points, finalized into a point of the same kind.
/// Additions are applied in call order, so the result depends only on the
/// sequence of (point, weight) pairs.
class PointAccumulator {
 public:
  void add(const OutputPoint& point, double weight);
  bool empty() const { return count_ == 0; }
  std::size_t count() const { return count_; }
  /// Weighted sum divided by the total weight; exactly the common point
  /// when every added point is equal.
  OutputPoint mean() const;

 private:
  std::size_t count_ = 0;
  bool uniform_ = true;
  OutputPoint first_;
  std::size_t kind_ = 0;
  double total_weight_ = 0.0;
  double smoothness_ = 0.0;
  std::vector<double> dense_;
  std::shared_ptr<const EvaluationSites> sites_;
  std::map<std::string, double> sparse_;
};

/// Chebyshev radius of the simplex of dimension K-1 in l2: sqrt((K-1)/K).
double simplex_euclidean_radius(std::size_t K);

nlohmann::json to_json(const OutputPoint& point);
/// Inverse of to_json. Grid functions need the sites they were evaluated on;
/// Fourier functions take their smoothness from `smoothness`.
OutputPoint point_from_json(const nlohmann::json& j, SpaceKind kind, double smoothness = 2.0,
                            std::shared_ptr<const EvaluationSites> sites = nullptr);

}  // namespace bagstab
