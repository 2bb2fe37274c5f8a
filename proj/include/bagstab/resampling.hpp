#pragma once

// Resampling distributions over bags of indices, their inclusion
// probabilities, and an exhaustive checker for the conditions the stability
// guarantees place on them.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bagstab {

enum class SchemeKind { bootstrap, subbag };

std::string_view to_string(SchemeKind kind);
SchemeKind parse_scheme_kind(std::string_view name);

/// A bag: a sequence of indices into the dataset. Order is kept.
using Bag = std::vector<std::size_t>;

/// Resampling distribution drawing bags of size m from n indices.
///
/// The public constructor only accepts nontrivial schemes (inclusion
/// probability below one). The leave-one-out companion of a scheme may be
/// trivial, e.g. subbag(n, n-1) pairs with subbag(n-1, n-1).
class BagScheme {
 public:
  BagScheme(SchemeKind kind, std::size_t n, std::size_t m);

  SchemeKind kind() const { return kind_; }
  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }

  /// Conditional law of a bag given that index n-1 is absent, as a scheme
  /// on n-1 indices.
  BagScheme leave_one_out() const;

  /// Expected fraction of the n indices that appear in a bag.
  double inclusion_probability() const;

  friend bool operator==(const BagScheme&, const BagScheme&) = default;

 private:
  struct Unchecked {};
  BagScheme(SchemeKind kind, std::size_t n, std::size_t m, Unchecked);

  SchemeKind kind_;
  std::size_t n_;
  std::size_t m_;
};

/// Draws one bag. Subbags are a uniformly random m-subset in uniformly random
/// order; bootstrap bags are m independent uniform indices.
Bag sample_bag(const BagScheme& scheme, std::uint64_t seed);

/// 1 - (1 - 1/n)^m for bootstrap, m/n for subbagging.
double inclusion_probability(const BagScheme& scheme);

/// Number of ordered bags in the support: n^m or n!/(n-m)!. Saturates at
/// UINT64_MAX.
std::uint64_t sequence_support_size(const BagScheme& scheme);

/// Number of order-collapsed bags: C(n, m) subsets, or C(n+m-1, m) multisets
/// for bootstrap. Saturates at UINT64_MAX.
std::uint64_t collapsed_support_size(const BagScheme& scheme);

/// Visits every ordered bag in the support with its probability, obtained by
/// multiplying the per-draw probabilities of the sampling process.
void for_each_sequence(const BagScheme& scheme,
                       const std::function<void(const Bag&, double)>& visit);

/// Walks order-collapsed bags (sorted index lists) in lexicographic order
/// together with their probabilities: 1/C(n,m) for subsets and the
/// multinomial weight m!/prod(c_i!) n^-m for bootstrap multisets.
class CollapsedBagEnumerator {
 public:
  explicit CollapsedBagEnumerator(const BagScheme& scheme);

  /// Writes the next bag and its probability; false once exhausted.
  bool next(Bag& bag, double& probability);

 private:
  BagScheme scheme_;
  Bag current_;
  bool started_ = false;
  bool done_ = false;
  double subset_probability_ = 0.0;
  std::vector<double> log_factorial_;
};

struct AssumptionReport {
  static constexpr double kTolerance = 1e-12;

  bool symmetry_ok = false;
  bool nontrivial_ok = false;
  bool covariance_ok = false;
  bool loo_compat_ok = false;
  double inclusion_probability = 0.0;
  double max_covariance = 0.0;
  double min_covariance = 0.0;
  double symmetry_gap = 0.0;
  double loo_tv_gap = 0.0;
  std::uint64_t support_size = 0;

  bool all_ok() const { return symmetry_ok && nontrivial_ok && covariance_ok && loo_compat_ok; }
};

nlohmann::json to_json(const AssumptionReport& report);

/// Default enumeration budget for verify_assumption1 (ordered bags).
inline constexpr std::uint64_t kAssumptionBudget = 10'000'000;

/// Enumerates the whole support of the scheme and checks symmetry (under 20
/// random index permutations), nontrivial subsampling, nonpositive pairwise
/// inclusion covariance, and that the law of r given n-1 not in r equals the
/// leave-one-out scheme. Throws BudgetError if the support exceeds `budget`.
AssumptionReport verify_assumption1(const BagScheme& scheme, std::uint64_t permutation_seed = 0,
                                    std::uint64_t budget = kAssumptionBudget);

}  // namespace bagstab
