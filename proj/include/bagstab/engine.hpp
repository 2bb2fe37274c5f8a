#pragma once

// Bagged and derandomized fits of a base algorithm, and leave-one-out
// profiles of any fit.
//
// Every fit is a pure function of its inputs. Random streams are derived
// from (master seed, stream, index) and reductions run in index order, so
// results are bit-identical for any thread count.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bagstab/error.hpp"
#include "bagstab/parallel.hpp"
#include "bagstab/resampling.hpp"
#include "bagstab/seeding.hpp"
#include "bagstab/spaces.hpp"

namespace bagstab {

/// A base algorithm A(D; xi) with outputs in `space`.
template <class Z>
struct BaseAlgorithm {
  std::function<OutputPoint(std::span<const Z>, std::uint64_t seed)> fit;
  /// Output depends on the multiset of data points only.
  bool order_invariant = false;
  /// Output ignores the seed.
  bool deterministic = true;
  SpaceDescriptor space;
};

struct BagConfig {
  BagScheme scheme;
  /// Number of bags; nullopt requests the exact (derandomized) average.
  std::optional<std::size_t> bags;
  std::uint64_t master_seed = 0;
};

/// A full-data output, the n leave-one-out outputs, and their distances.
struct LooProfile {
  OutputPoint full;
  std::vector<OutputPoint> dropped;
  std::vector<double> distances;
};

/// A fit as seen by loo_profile: data plus a stream id. The full-data fit
/// gets stream 0 and the fit without point i gets stream i+1.
template <class Z>
using FitFn = std::function<OutputPoint(std::span<const Z>, std::uint64_t stream)>;

/// Upper limit on order-collapsed bags for derandomized_fit.
inline constexpr std::uint64_t kDerandomizeBudget = 1'000'000;

namespace detail {

inline constexpr std::uint64_t kBagStreamDomain = 0x6261672d73747265ULL;
inline constexpr std::uint64_t kBaseStreamDomain = 0x626173652d737472ULL;
inline constexpr std::size_t kChunk = 64;

// Copies the bagged rows into `out`, reusing its storage.
template <class Z>
void gather(std::span<const Z> data, const Bag& bag, std::vector<Z>& out) {
  out.resize(bag.size());
  for (std::size_t k = 0; k < bag.size(); ++k) out[k] = data[bag[k]];
}

// Evaluates produce(j, slot) for j in [0, count) in parallel chunks and
// folds the results into `acc` in index order. Within a chunk each slot in
// [0, kChunk) belongs to exactly one task.
template <class Produce>
void ordered_accumulate(std::size_t count, PointAccumulator& acc, const Produce& produce) {
  std::vector<OutputPoint> outputs;
  std::vector<double> weights;
  for (std::size_t start = 0; start < count; start += kChunk) {
    const std::size_t len = std::min(kChunk, count - start);
    outputs.assign(len, OutputPoint{});
    weights.assign(len, 0.0);
    parallel_for(len, [&](std::size_t j) { produce(start + j, j, outputs[j], weights[j]); });
    for (std::size_t j = 0; j < len; ++j) acc.add(outputs[j], weights[j]);
  }
}

inline std::string with_context(const std::string& where, const std::exception& e) {
  return where + ": " + e.what();
}

}  // namespace detail

/// Average of B outputs A(D^{r_b}; xi_b) with bags r_b drawn from cfg.scheme.
/// `stream` selects an independent family of bag seeds.
template <class Z>
OutputPoint bag_fit(const BaseAlgorithm<Z>& alg, std::span<const Z> data, const BagConfig& cfg,
                    std::uint64_t stream = 0) {
  require(cfg.bags.has_value(), "bag_fit: needs a finite number of bags");
  require(*cfg.bags >= 1, "bag_fit: B must be >= 1");
  require(data.size() == cfg.scheme.n(), "bag_fit: data size " + std::to_string(data.size()) +
                                             " does not match scheme n=" + std::to_string(cfg.scheme.n()));
  const std::uint64_t stream_seed = derive_seed(cfg.master_seed, detail::kBagStreamDomain, stream);
  PointAccumulator acc;
  std::vector<std::vector<Z>> slots(std::min(detail::kChunk, *cfg.bags));
  detail::ordered_accumulate(*cfg.bags, acc, [&](std::size_t b, std::size_t slot, OutputPoint& out, double& w) {
    const Bag bag = sample_bag(cfg.scheme, derive_seed(stream_seed, 2 * b, 0));
    std::vector<Z>& subset = slots[slot];
    detail::gather(data, bag, subset);
    try {
      out = alg.fit(std::span<const Z>(subset), derive_seed(stream_seed, 2 * b + 1, 0));
    } catch (const std::exception& e) {
      throw FitError(detail::with_context("bag " + std::to_string(b), e));
    }
    w = 1.0;
  });
  return acc.mean();
}

/// Exact expectation of A(D^r) over r ~ scheme, collapsed over bag order.
/// Requires a deterministic, order-invariant algorithm.
template <class Z>
OutputPoint derandomized_fit(const BaseAlgorithm<Z>& alg, std::span<const Z> data, const BagScheme& scheme,
                             std::uint64_t budget = kDerandomizeBudget) {
  require(alg.deterministic, "derandomized_fit: algorithm must ignore its seed");
  require(alg.order_invariant, "derandomized_fit: algorithm must be order-invariant");
  require(data.size() == scheme.n(), "derandomized_fit: data size does not match scheme");
  const std::uint64_t support = collapsed_support_size(scheme);
  if (support > budget) {
    throw BudgetError("derandomized_fit: " + std::to_string(support) + " bags exceed budget " +
                      std::to_string(budget));
  }
  CollapsedBagEnumerator bags(scheme);
  PointAccumulator acc;
  std::vector<Bag> chunk_bags(detail::kChunk);
  std::vector<double> chunk_probs(detail::kChunk);
  std::vector<OutputPoint> outputs(detail::kChunk);
  std::vector<std::vector<Z>> slots(detail::kChunk);
  std::size_t index = 0;
  for (;;) {
    std::size_t len = 0;
    while (len < detail::kChunk && bags.next(chunk_bags[len], chunk_probs[len])) ++len;
    if (len == 0) break;
    parallel_for(len, [&](std::size_t j) {
      std::vector<Z>& subset = slots[j];
      detail::gather(data, chunk_bags[j], subset);
      try {
        outputs[j] = alg.fit(std::span<const Z>(subset), 0);
      } catch (const std::exception& e) {
        throw FitError(detail::with_context("bag " + std::to_string(index + j), e));
      }
    });
    for (std::size_t j = 0; j < len; ++j) acc.add(outputs[j], chunk_probs[j]);
    index += len;
  }
  return acc.mean();
}

/// The base algorithm itself as a FitFn; stream s receives its own seed.
template <class Z>
FitFn<Z> base_fit(BaseAlgorithm<Z> alg, std::uint64_t master_seed) {
  return [alg = std::move(alg), master_seed](std::span<const Z> data, std::uint64_t stream) {
    return alg.fit(data, derive_seed(master_seed, detail::kBaseStreamDomain, stream));
  };
}

namespace detail {
inline BagScheme scheme_for_size(const BagScheme& scheme, std::size_t size) {
  if (size == scheme.n()) return scheme;
  if (size + 1 == scheme.n()) return scheme.leave_one_out();
  throw ArgumentError("bagged fit: data size " + std::to_string(size) + " fits neither n=" +
                      std::to_string(scheme.n()) + " nor its leave-one-out size");
}
}  // namespace detail

/// Bagged fit. Leave-one-out data (size n-1) is bagged with the
/// leave-one-out scheme; each stream draws fresh bags.
template <class Z>
FitFn<Z> bagged_fit(BaseAlgorithm<Z> alg, BagConfig cfg) {
  return [alg = std::move(alg), cfg](std::span<const Z> data, std::uint64_t stream) {
    BagConfig local = cfg;
    local.scheme = detail::scheme_for_size(cfg.scheme, data.size());
    if (!local.bags) return derandomized_fit(alg, data, local.scheme);
    return bag_fit(alg, data, local, stream);
  };
}

/// Derandomized fit as a FitFn.
template <class Z>
FitFn<Z> derandomized(BaseAlgorithm<Z> alg, BagScheme scheme) {
  return bagged_fit(std::move(alg), BagConfig{scheme, std::nullopt, 0});
}

/// Runs `fit` on D and on every D^{\i}, in parallel over i.
template <class Z>
LooProfile loo_profile(const FitFn<Z>& fit, std::span<const Z> data, const SpaceDescriptor& space) {
  const std::size_t n = data.size();
  require(n >= 2, "loo_profile: needs at least two data points");
  std::vector<OutputPoint> outputs(n + 1);
  parallel_for(n + 1, [&](std::size_t t) {
    if (t == 0) {
      try {
        outputs[0] = fit(data, 0);
      } catch (const std::exception& e) {
        throw FitError(detail::with_context("full-data fit", e));
      }
      return;
    }
    const std::size_t i = t - 1;
    std::vector<Z> rest;
    rest.reserve(n - 1);
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i) rest.push_back(data[k]);
    }
    try {
      outputs[t] = fit(std::span<const Z>(rest), t);
    } catch (const std::exception& e) {
      throw FitError(detail::with_context("leave-one-out " + std::to_string(i), e));
    }
  });
  LooProfile profile;
  profile.full = std::move(outputs[0]);
  profile.dropped.assign(std::make_move_iterator(outputs.begin() + 1), std::make_move_iterator(outputs.end()));
  profile.distances.resize(n);
  for (std::size_t i = 0; i < n; ++i) profile.distances[i] = distance(space, profile.full, profile.dropped[i]);
  return profile;
}

struct ConvergenceRow {
  std::size_t bags = 0;
  double mean_distance = 0.0;
  double median_distance = 0.0;
  std::vector<double> distances;
};

/// Distance between B-bag fits and the derandomized fit, over `reps`
/// independent master seeds, for each B in `bag_counts`.
template <class Z>
std::vector<ConvergenceRow> mc_convergence_probe(const BaseAlgorithm<Z>& alg, std::span<const Z> data,
                                                 const BagScheme& scheme, std::span<const std::size_t> bag_counts,
                                                 std::size_t reps, std::uint64_t master_seed) {
  require(reps >= 1, "mc_convergence_probe: reps must be >= 1");
  require(!bag_counts.empty(), "mc_convergence_probe: no bag counts given");
  const OutputPoint exact = derandomized_fit(alg, data, scheme);
  std::vector<ConvergenceRow> rows;
  for (std::size_t B : bag_counts) {
    ConvergenceRow row;
    row.bags = B;
    row.distances.resize(reps);
    for (std::size_t r = 0; r < reps; ++r) {
      const BagConfig cfg{scheme, B, derive_seed(master_seed, B, r)};
      row.distances[r] = distance(alg.space, bag_fit(alg, data, cfg), exact);
    }
    double total = 0.0;
    for (double d : row.distances) total += d;
    row.mean_distance = total / static_cast<double>(reps);
    std::vector<double> sorted = row.distances;
    std::sort(sorted.begin(), sorted.end());
    row.median_distance = reps % 2 == 1 ? sorted[reps / 2] : 0.5 * (sorted[reps / 2 - 1] + sorted[reps / 2]);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace bagstab
