#include "bagstab/discrete.hpp"

#include <algorithm>
#include <cmath>

#include "bagstab/error.hpp"

namespace bagstab {

SimplexWeights softmax_columns(std::span<const BinaryRow> rows, std::size_t d) {
  require(d >= 1, "softmax_columns: d must be >= 1");
  std::vector<std::uint32_t> sums(d, 0);
  for (const auto& row : rows) {
    if (row.bits.size() != d) throw ShapeError("softmax_columns: row length differs from d");
    for (std::size_t j = 0; j < d; ++j) sums[j] += row.bits[j];
  }
  const std::uint32_t top = *std::max_element(sums.begin(), sums.end());
  std::vector<double> w(d);
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    w[j] = std::exp(static_cast<double>(sums[j]) - static_cast<double>(top));
    total += w[j];
  }
  for (double& v : w) v /= total;
  return SimplexWeights(std::move(w));
}

std::string distinct_value_key(std::span<const std::uint64_t> data) {
  std::vector<std::uint64_t> values(data.begin(), data.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::string key;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k > 0) key += ',';
    key += std::to_string(values[k]);
  }
  return key;
}

SparseDistribution counterexample_alg(std::span<const std::uint64_t> data) {
  require(!data.empty(), "counterexample_alg: empty data");
  return SparseDistribution::point_mass(distinct_value_key(data));
}

}  // namespace bagstab
