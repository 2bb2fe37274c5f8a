#include "bagstab/stability.hpp"

#include <algorithm>
#include <cmath>

namespace bagstab {

double mean_square(std::span<const double> distances) {
  require(!distances.empty(), "mean_square: empty profile");
  double s = 0.0;
  for (double d : distances) s += d * d;
  return s / static_cast<double>(distances.size());
}

double mean_square(const LooProfile& profile) { return mean_square(profile.distances); }

double mean_square(std::span<const LooProfile> replicates) {
  require(!replicates.empty(), "mean_square: no replicates");
  double s = 0.0;
  for (const auto& p : replicates) s += mean_square(p);
  return s / static_cast<double>(replicates.size());
}

TailCurve tail_curve(std::span<const double> distances, std::span<const double> epsilons) {
  require(!epsilons.empty(), "tail_curve: empty epsilon grid");
  for (std::size_t k = 1; k < epsilons.size(); ++k) {
    require(epsilons[k] > epsilons[k - 1], "tail_curve: epsilon grid must be strictly increasing");
  }
  std::vector<double> sorted(distances.begin(), distances.end());
  std::sort(sorted.begin(), sorted.end());
  TailCurve curve;
  curve.epsilons.assign(epsilons.begin(), epsilons.end());
  curve.deltas.reserve(epsilons.size());
  const double n = static_cast<double>(sorted.size());
  for (double eps : epsilons) {
    const auto first = std::lower_bound(sorted.begin(), sorted.end(), eps);
    curve.deltas.push_back(static_cast<double>(sorted.end() - first) / n);
  }
  return curve;
}

TailCurve tail_curve(const LooProfile& profile, std::span<const double> epsilons) {
  return tail_curve(profile.distances, epsilons);
}

TailCurve tail_curve(std::span<const LooProfile> replicates, std::span<const double> epsilons) {
  require(!replicates.empty(), "tail_curve: no replicates");
  TailCurve total = tail_curve(replicates[0], epsilons);
  for (std::size_t r = 1; r < replicates.size(); ++r) {
    const TailCurve c = tail_curve(replicates[r], epsilons);
    for (std::size_t k = 0; k < c.deltas.size(); ++k) total.deltas[k] += c.deltas[k];
  }
  for (double& d : total.deltas) d /= static_cast<double>(replicates.size());
  return total;
}

std::vector<double> default_epsilon_grid(std::span<const std::vector<double>> distance_sets,
                                         std::size_t points) {
  double lo = INFINITY;
  double hi = 0.0;
  for (const auto& set : distance_sets) {
    for (double d : set) {
      if (d > 0.0) lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  }
  std::vector<double> grid{0.0};
  if (!(hi > 0.0)) return grid;
  const double start = lo / 2.0;
  const double stop = hi * 1.05;
  const double log_start = std::log(start);
  const double step = points > 1 ? (std::log(stop) - log_start) / static_cast<double>(points - 1) : 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double eps = std::exp(log_start + step * static_cast<double>(k));
    if (eps > grid.back()) grid.push_back(eps);
  }
  return grid;
}

double tail_from_meansquare(double beta_sq, double epsilon) {
  require(epsilon > 0.0, "tail_from_meansquare: epsilon must be > 0");
  require(beta_sq >= 0.0, "tail_from_meansquare: beta^2 must be >= 0");
  return std::min(1.0, beta_sq / (epsilon * epsilon));
}

double meansquare_from_tail(double epsilon, double delta, double diameter) {
  require(delta >= 0.0 && delta <= 1.0, "meansquare_from_tail: delta must lie in [0,1]");
  require(diameter >= 0.0, "meansquare_from_tail: diameter must be >= 0");
  require(epsilon >= 0.0, "meansquare_from_tail: epsilon must be >= 0");
  return epsilon * epsilon + delta * diameter * diameter;
}

}  // namespace bagstab
