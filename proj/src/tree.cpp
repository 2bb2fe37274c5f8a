#include "bagstab/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "bagstab/error.hpp"

namespace bagstab {

namespace {

constexpr double kMinGain = 1e-12;

// Rows live in canonical order as indices 0..n-1. Every node owns the same
// contiguous segment [lo, hi) of `canonical` and of each per-feature order,
// and splitting partitions all of them stably, so each per-feature segment
// stays sorted by that feature with ties in canonical order.
struct Builder {
  std::size_t dim;
  std::size_t max_depth;
  std::vector<double> x;  // feature-major: x[f * n + r]
  std::vector<double> y;
  std::size_t n;
  std::vector<std::size_t> canonical;
  std::vector<std::vector<std::size_t>> order;
  std::vector<char> goes_left;
  std::vector<std::size_t> buffer;
  std::vector<RegressionTree::Node> nodes;
  std::size_t reached_depth = 0;

  double feature(std::size_t f, std::size_t r) const { return x[f * n + r]; }

  void partition(std::vector<std::size_t>& v, std::size_t lo, std::size_t hi) {
    std::size_t left = lo;
    std::size_t right = 0;
    for (std::size_t k = lo; k < hi; ++k) {
      const std::size_t r = v[k];
      if (goes_left[r]) {
        v[left++] = r;
      } else {
        buffer[right++] = r;
      }
    }
    std::copy(buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(right),
              v.begin() + static_cast<std::ptrdiff_t>(left));
  }

  int build(std::size_t lo, std::size_t hi, std::size_t depth) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({});
    reached_depth = std::max(reached_depth, depth);
    const std::size_t count = hi - lo;

    double total = 0.0;
    double total_sq = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      const double v = y[canonical[k]];
      total += v;
      total_sq += v * v;
    }
    nodes[id].value = total / static_cast<double>(count);
    if (count < 2 || depth >= max_depth) return id;
    const double parent_sse = total_sq - total * total / static_cast<double>(count);

    double best_sse = INFINITY;
    int best_feature = -1;
    double best_threshold = 0.0;
    for (std::size_t f = 0; f < dim; ++f) {
      const std::vector<std::size_t>& sorted = order[f];
      double left_sum = 0.0;
      double left_sq = 0.0;
      for (std::size_t k = lo; k + 1 < hi; ++k) {
        const double v = y[sorted[k]];
        left_sum += v;
        left_sq += v * v;
        const double here = feature(f, sorted[k]);
        const double next = feature(f, sorted[k + 1]);
        if (!(next > here)) continue;
        const double nl = static_cast<double>(k + 1 - lo);
        const double nr = static_cast<double>(hi - k - 1);
        const double right_sum = total - left_sum;
        const double right_sq = total_sq - left_sq;
        const double sse = (left_sq - left_sum * left_sum / nl) + (right_sq - right_sum * right_sum / nr);
        if (sse < best_sse) {
          best_sse = sse;
          best_feature = static_cast<int>(f);
          double mid = 0.5 * (here + next);
          if (!(mid < next)) mid = here;
          best_threshold = mid;
        }
      }
    }
    if (best_feature < 0 || parent_sse - best_sse < kMinGain) return id;

    std::size_t left_count = 0;
    for (std::size_t k = lo; k < hi; ++k) {
      const std::size_t r = canonical[k];
      goes_left[r] = feature(static_cast<std::size_t>(best_feature), r) <= best_threshold;
      left_count += goes_left[r] ? 1 : 0;
    }
    partition(canonical, lo, hi);
    for (auto& sorted : order) partition(sorted, lo, hi);
    nodes[id].feature = best_feature;
    nodes[id].threshold = best_threshold;
    const int l = build(lo, lo + left_count, depth + 1);
    const int r = build(lo + left_count, hi, depth + 1);
    nodes[id].left = l;
    nodes[id].right = r;
    return id;
  }
};

}  // namespace

RegressionTree::RegressionTree(std::vector<Node> nodes, std::size_t dimension, std::size_t depth)
    : nodes_(std::move(nodes)), dimension_(dimension), depth_(depth) {
  require(!nodes_.empty(), "RegressionTree: no nodes");
}

double RegressionTree::predict(std::span<const double> x) const {
  const Node* node = &nodes_[0];
  while (node->feature >= 0) {
    node = &nodes_[x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right];
  }
  return node->value;
}

std::size_t RegressionTree::leaf_count() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.feature < 0; }));
}

RegressionTree tree_fit(std::span<const LabeledPoint> data, std::size_t max_depth) {
  require(!data.empty(), "tree_fit: empty training set");
  const std::size_t dim = data[0].x.size();
  require(dim >= 1, "tree_fit: points need at least one feature");
  for (const auto& p : data) {
    if (p.x.size() != dim) throw ShapeError("tree_fit: inconsistent feature dimension");
    if (!std::isfinite(p.y)) throw ArgumentError("tree_fit: non-finite response");
  }
  const std::size_t n = data.size();
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), std::size_t{0});
  std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    if (data[a].x != data[b].x) return data[a].x < data[b].x;
    return data[a].y < data[b].y;
  });
  Builder builder{dim, max_depth, std::vector<double>(dim * n), std::vector<double>(n), n, {}, {}, {}, {}, {}, 0};
  for (std::size_t r = 0; r < n; ++r) {
    const LabeledPoint& p = data[rank[r]];
    builder.y[r] = p.y;
    for (std::size_t f = 0; f < dim; ++f) builder.x[f * n + r] = p.x[f];
  }
  builder.canonical.resize(n);
  std::iota(builder.canonical.begin(), builder.canonical.end(), std::size_t{0});
  builder.order.assign(dim, builder.canonical);
  for (std::size_t f = 0; f < dim; ++f) {
    const double* col = builder.x.data() + f * n;
    std::stable_sort(builder.order[f].begin(), builder.order[f].end(),
                     [col](std::size_t a, std::size_t b) { return col[a] < col[b]; });
  }
  builder.goes_left.assign(n, 0);
  builder.buffer.resize(n);
  builder.build(0, n, 0);
  return RegressionTree(std::move(builder.nodes), dim, builder.reached_depth);
}

double training_mse(const RegressionTree& tree, std::span<const LabeledPoint> data) {
  require(!data.empty(), "training_mse: empty data");
  double s = 0.0;
  for (const auto& p : data) {
    const double r = tree.predict(p.x) - p.y;
    s += r * r;
  }
  return s / static_cast<double>(data.size());
}

GridFunction tree_to_grid(const RegressionTree& tree, const std::shared_ptr<const EvaluationSites>& sites) {
  require(sites != nullptr, "tree_to_grid: missing sites");
  if (sites->dimension() != tree.dimension()) throw ShapeError("tree_to_grid: site dimension mismatch");
  const std::size_t count = sites->count();
  const auto& nodes = tree.nodes();
  std::vector<double> values(count);
  // Sites are routed down the tree in bulk: each node partitions the index
  // block it receives, and leaves write their value to every site in it.
  thread_local std::vector<std::uint32_t> index;
  thread_local std::vector<std::uint32_t> right_buffer;
  index.resize(count);
  right_buffer.resize(count);
  std::iota(index.begin(), index.end(), std::uint32_t{0});
  struct Task {
    int node;
    std::size_t lo;
    std::size_t hi;
  };
  std::vector<Task> stack{{0, 0, count}};
  while (!stack.empty()) {
    const Task t = stack.back();
    stack.pop_back();
    if (t.lo == t.hi) continue;
    const auto& node = nodes[static_cast<std::size_t>(t.node)];
    if (node.feature < 0) {
      for (std::size_t k = t.lo; k < t.hi; ++k) values[index[k]] = node.value;
      continue;
    }
    const double* column = sites->column(static_cast<std::size_t>(node.feature)).data();
    std::size_t left = t.lo;
    std::size_t right = 0;
    for (std::size_t k = t.lo; k < t.hi; ++k) {
      const std::uint32_t i = index[k];
      const bool go_left = column[i] <= node.threshold;
      index[left] = i;
      right_buffer[right] = i;
      left += go_left ? 1 : 0;
      right += go_left ? 0 : 1;
    }
    std::copy(right_buffer.begin(), right_buffer.begin() + static_cast<std::ptrdiff_t>(right),
              index.begin() + static_cast<std::ptrdiff_t>(left));
    stack.push_back({node.right, left, t.hi});
    stack.push_back({node.left, t.lo, left});
  }
  return GridFunction(sites, std::move(values));
}

}  // namespace bagstab
