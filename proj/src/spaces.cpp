#include "bagstab/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bagstab/error.hpp"
#include "bagstab/seeding.hpp"

namespace bagstab {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::vector<std::size_t> first_primes(std::size_t count) {
  std::vector<std::size_t> primes;
  for (std::size_t c = 2; primes.size() < count; ++c) {
    bool prime = true;
    for (std::size_t p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

double radical_inverse(std::size_t index, std::size_t base) {
  double result = 0.0;
  double scale = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= static_cast<double>(base);
  }
  return result;
}

template <class T>
const T& expect(const OutputPoint& p, const char* space) {
  if (const T* v = std::get_if<T>(&p)) return *v;
  throw ShapeError(std::string("point does not belong to space ") + space);
}

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw ShapeError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

double sum_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  check_same_size(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

double sum_sq_diff(const std::vector<double>& a, const std::vector<double>& b) {
  check_same_size(a.size(), b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

VectorPoint::VectorPoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (!all_finite(coords_)) throw ArgumentError("VectorPoint: non-finite coordinate");
}

SimplexWeights::SimplexWeights(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw ArgumentError("SimplexWeights: empty weight vector");
  if (!all_finite(weights_)) throw ArgumentError("SimplexWeights: non-finite weight");
  bool clamped = false;
  for (double& w : weights_) {
    if (w < -kClampTolerance) {
      throw ArgumentError("SimplexWeights: negative weight " + std::to_string(w));
    }
    if (w < 0.0) {
      w = 0.0;
      clamped = true;
    }
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw ArgumentError("SimplexWeights: weights sum to " + std::to_string(total));
  }
  if (clamped) {
    for (double& w : weights_) w /= total;
  }
}

SimplexWeights SimplexWeights::vertex(std::size_t dimension, std::size_t j) {
  require(j < dimension, "SimplexWeights::vertex: index out of range");
  std::vector<double> w(dimension, 0.0);
  w[j] = 1.0;
  return SimplexWeights(std::move(w));
}

SimplexWeights SimplexWeights::uniform(std::size_t dimension) {
  require(dimension > 0, "SimplexWeights::uniform: dimension must be positive");
  return SimplexWeights(std::vector<double>(dimension, 1.0 / static_cast<double>(dimension)));
}

FourierEvenFunction::FourierEvenFunction(std::vector<double> coeffs, double smoothness)
    : coeffs_(std::move(coeffs)), smoothness_(smoothness) {
  if (coeffs_.empty()) throw ArgumentError("FourierEvenFunction: needs at least a_0");
  if (!all_finite(coeffs_)) throw ArgumentError("FourierEvenFunction: non-finite coefficient");
  if (!(smoothness_ >= 0.0)) throw ArgumentError("FourierEvenFunction: smoothness must be >= 0");
}

double FourierEvenFunction::weight(std::size_t k, double smoothness) {
  if (k == 0) return 1.0;
  const double kk = static_cast<double>(k);
  return 2.0 * std::pow(1.0 + kk * kk, smoothness);
}

double FourierEvenFunction::squared_norm() const {
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) s += weight(k, smoothness_) * coeffs_[k] * coeffs_[k];
  return s;
}

double FourierEvenFunction::evaluate(double x) const {
  double v = coeffs_[0];
  for (std::size_t k = 1; k < coeffs_.size(); ++k) v += 2.0 * coeffs_[k] * std::cos(static_cast<double>(k) * x);
  return v;
}

EvaluationSites::EvaluationSites(std::size_t dimension, std::vector<double> coords)
    : dimension_(dimension), coords_(std::move(coords)) {
  require(dimension_ > 0, "EvaluationSites: dimension must be positive");
  require(!coords_.empty() && coords_.size() % dimension_ == 0,
          "EvaluationSites: coordinate count must be a positive multiple of the dimension");
  const std::size_t n = count();
  columns_.resize(coords_.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < dimension_; ++f) columns_[f * n + i] = coords_[i * dimension_ + f];
  }
}

std::shared_ptr<const EvaluationSites> EvaluationSites::halton(std::size_t count,
                                                               std::size_t dimension,
                                                               std::uint64_t seed) {
  require(count > 0 && dimension > 0, "EvaluationSites::halton: empty site set");
  const auto primes = first_primes(dimension);
  SplitMix64 gen(seed);
  std::vector<double> shift(dimension);
  for (double& s : shift) s = uniform_unit(gen);
  std::vector<double> coords(count * dimension);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < dimension; ++j) {
      double v = radical_inverse(i + 1, primes[j]) + shift[j];
      coords[i * dimension + j] = v - std::floor(v);
    }
  }
  return std::make_shared<const EvaluationSites>(dimension, std::move(coords));
}

GridFunction::GridFunction(std::shared_ptr<const EvaluationSites> sites, std::vector<double> values)
    : sites_(std::move(sites)), values_(std::move(values)) {
  if (!sites_) throw ArgumentError("GridFunction: missing evaluation sites");
  check_same_size(values_.size(), sites_->count());
  if (!all_finite(values_)) throw ArgumentError("GridFunction: non-finite value");
}

SparseDistribution::SparseDistribution(std::map<std::string, double> mass) : mass_(std::move(mass)) {
  double total = 0.0;
  for (auto& [key, m] : mass_) {
    if (!(m >= 0.0 && m <= 1.0 + kSumTolerance)) {
      throw ArgumentError("SparseDistribution: mass outside [0,1] at key " + key);
    }
    m = std::min(m, 1.0);
    total += m;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw ArgumentError("SparseDistribution: masses sum to " + std::to_string(total));
  }
}

SparseDistribution SparseDistribution::point_mass(std::string key) {
  return SparseDistribution({{std::move(key), 1.0}});
}

double SparseDistribution::at(const std::string& key) const {
  auto it = mass_.find(key);
  return it == mass_.end() ? 0.0 : it->second;
}

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::simplex_tv: return "simplex-tv";
    case SpaceKind::simplex_euclidean: return "simplex-euclidean";
    case SpaceKind::sobolev: return "sobolev";
    case SpaceKind::grid_l2: return "grid-l2";
    case SpaceKind::sparse_tv: return "sparse-tv";
  }
  return "unknown";
}

SpaceKind parse_space_kind(std::string_view name) {
  for (SpaceKind k : {SpaceKind::euclidean, SpaceKind::simplex_tv, SpaceKind::simplex_euclidean,
                      SpaceKind::sobolev, SpaceKind::grid_l2, SpaceKind::sparse_tv}) {
    if (to_string(k) == name) return k;
  }
  throw ArgumentError("unknown space kind: " + std::string(name));
}

SpaceDescriptor::SpaceDescriptor(SpaceKind k, std::optional<double> radius)
    : kind(k), radius_hint(radius) {
  if (radius_hint && !(*radius_hint > 0.0)) throw ArgumentError("SpaceDescriptor: radius must be > 0");
}

double distance(const SpaceDescriptor& space, const OutputPoint& a, const OutputPoint& b) {
  switch (space.kind) {
    case SpaceKind::euclidean: {
      const auto& x = expect<VectorPoint>(a, "euclidean");
      const auto& y = expect<VectorPoint>(b, "euclidean");
      return std::sqrt(sum_sq_diff(x.coords(), y.coords()));
    }
    case SpaceKind::simplex_tv: {
      const auto& x = expect<SimplexWeights>(a, "simplex-tv");
      const auto& y = expect<SimplexWeights>(b, "simplex-tv");
      return 0.5 * sum_abs_diff(x.weights(), y.weights());
    }
    case SpaceKind::simplex_euclidean: {
      const auto& x = expect<SimplexWeights>(a, "simplex-euclidean");
      const auto& y = expect<SimplexWeights>(b, "simplex-euclidean");
      return std::sqrt(sum_sq_diff(x.weights(), y.weights()));
    }
    case SpaceKind::sobolev: {
      const auto& x = expect<FourierEvenFunction>(a, "sobolev");
      const auto& y = expect<FourierEvenFunction>(b, "sobolev");
      if (x.smoothness() != y.smoothness()) throw ShapeError("sobolev: smoothness mismatch");
      const auto& ca = x.coeffs();
      const auto& cb = y.coeffs();
      double s = 0.0;
      for (std::size_t k = 0; k < std::max(ca.size(), cb.size()); ++k) {
        const double d = (k < ca.size() ? ca[k] : 0.0) - (k < cb.size() ? cb[k] : 0.0);
        s += FourierEvenFunction::weight(k, x.smoothness()) * d * d;
      }
      return std::sqrt(s);
    }
    case SpaceKind::grid_l2: {
      const auto& x = expect<GridFunction>(a, "grid-l2");
      const auto& y = expect<GridFunction>(b, "grid-l2");
      if (x.sites() != y.sites()) throw ShapeError("grid-l2: functions evaluated on different sites");
      return std::sqrt(sum_sq_diff(x.values(), y.values()) / static_cast<double>(x.size()));
    }
    case SpaceKind::sparse_tv: {
      const auto& x = expect<SparseDistribution>(a, "sparse-tv").mass();
      const auto& y = expect<SparseDistribution>(b, "sparse-tv").mass();
      // Merge walk over the two sorted key sets.
      double s = 0.0;
      auto i = x.begin();
      auto j = y.begin();
      while (i != x.end() || j != y.end()) {
        if (j == y.end() || (i != x.end() && i->first < j->first)) {
          s += i->second;
          ++i;
        } else if (i == x.end() || j->first < i->first) {
          s += j->second;
          ++j;
        } else {
          s += std::abs(i->second - j->second);
          ++i;
          ++j;
        }
      }
      return 0.5 * s;
    }
  }
  throw ShapeError("unknown space");
}

void PointAccumulator::add(const OutputPoint& point, double weight) {
  if (count_ > 0 && point.index() != kind_) throw ShapeError("affine_combine: mixed point kinds");
  kind_ = point.index();
  auto add_dense = [&](const std::vector<double>& v, bool pad) {
    if (count_ == 0) {
      dense_.assign(v.size(), 0.0);
    } else if (v.size() != dense_.size()) {
      if (!pad) check_same_size(v.size(), dense_.size());
      if (v.size() > dense_.size()) dense_.resize(v.size(), 0.0);
    }
    for (std::size_t i = 0; i < v.size(); ++i) dense_[i] += weight * v[i];
  };
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, VectorPoint>) {
          add_dense(p.coords(), false);
        } else if constexpr (std::is_same_v<T, SimplexWeights>) {
          add_dense(p.weights(), false);
        } else if constexpr (std::is_same_v<T, FourierEvenFunction>) {
          if (count_ > 0 && p.smoothness() != smoothness_) throw ShapeError("affine_combine: smoothness mismatch");
          smoothness_ = p.smoothness();
          add_dense(p.coeffs(), true);
        } else if constexpr (std::is_same_v<T, GridFunction>) {
          if (count_ > 0 && p.sites() != sites_) throw ShapeError("affine_combine: different evaluation sites");
          sites_ = p.sites();
          add_dense(p.values(), false);
        } else {
          for (const auto& [key, m] : p.mass()) sparse_[key] += weight * m;
        }
      },
      point);
  if (count_ == 0) {
    first_ = point;
  } else if (uniform_ && !(point == first_)) {
    uniform_ = false;
  }
  total_weight_ += weight;
  ++count_;
}

OutputPoint PointAccumulator::mean() const {
  if (count_ == 0) throw ShapeError("affine_combine: no points");
  if (!(total_weight_ > 0.0)) throw ArgumentError("affine_combine: total weight must be positive");
  if (uniform_) return first_;
  std::vector<double> v = dense_;
  if (total_weight_ != 1.0) {
    for (double& x : v) x /= total_weight_;
  }
  switch (kind_) {
    case 0: return VectorPoint(std::move(v));
    case 1: return SimplexWeights(std::move(v));
    case 2: return FourierEvenFunction(std::move(v), smoothness_);
    case 3: return GridFunction(sites_, std::move(v));
    default: {
      std::map<std::string, double> mass;
      for (const auto& [key, m] : sparse_) {
        const double scaled = total_weight_ == 1.0 ? m : m / total_weight_;
        if (scaled > 0.0) mass.emplace(key, std::min(scaled, 1.0));
      }
      return SparseDistribution(std::move(mass));
    }
  }
}

OutputPoint affine_combine(std::span<const OutputPoint> points, std::span<const double> weights) {
  if (points.empty()) throw ShapeError("affine_combine: empty point list");
  check_same_size(points.size(), weights.size());
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) throw ArgumentError("affine_combine: weights must sum to 1");
  PointAccumulator acc;
  for (std::size_t i = 0; i < points.size(); ++i) acc.add(points[i], weights[i]);
  return acc.mean();
}

double simplex_euclidean_radius(std::size_t K) {
  require(K >= 2, "simplex_euclidean_radius: K must be >= 2");
  const double k = static_cast<double>(K);
  return std::sqrt((k - 1.0) / k);
}

nlohmann::json to_json(const OutputPoint& point) {
  return std::visit(
      [](const auto& p) -> nlohmann::json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, VectorPoint>) return p.coords();
        else if constexpr (std::is_same_v<T, SimplexWeights>) return p.weights();
        else if constexpr (std::is_same_v<T, FourierEvenFunction>) return p.coeffs();
        else if constexpr (std::is_same_v<T, GridFunction>) return p.values();
        else return p.mass();
      },
      point);
}

OutputPoint point_from_json(const nlohmann::json& j, SpaceKind kind, double smoothness,
                            std::shared_ptr<const EvaluationSites> sites) {
  switch (kind) {
    case SpaceKind::euclidean: return VectorPoint(j.get<std::vector<double>>());
    case SpaceKind::simplex_tv:
    case SpaceKind::simplex_euclidean: return SimplexWeights(j.get<std::vector<double>>());
    case SpaceKind::sobolev: return FourierEvenFunction(j.get<std::vector<double>>(), smoothness);
    case SpaceKind::grid_l2: return GridFunction(std::move(sites), j.get<std::vector<double>>());
    case SpaceKind::sparse_tv: return SparseDistribution(j.get<std::map<std::string, double>>());
  }
  throw ShapeError("unknown space");
}

}  // namespace bagstab
