#pragma once

// Algorithms with outputs in probability simplices: the softmax of binary
// column sums and the distinct-value-set point mass.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bagstab/spaces.hpp"

namespace bagstab {

/// One row of a 0/1 matrix.
struct BinaryRow {
  std::vector<std::uint8_t> bits;
};

/// softmax over columns of the column sums: w_j = exp(s_j) / sum_k exp(s_k).
/// The maximum is subtracted before exponentiation.
SimplexWeights softmax_columns(std::span<const BinaryRow> rows, std::size_t d);

/// Canonical key of the set of distinct values: sorted, comma-separated.
std::string distinct_value_key(std::span<const std::uint64_t> data);

/// Unit mass on distinct_value_key(data).
SparseDistribution counterexample_alg(std::span<const std::uint64_t> data);

}  // namespace bagstab
