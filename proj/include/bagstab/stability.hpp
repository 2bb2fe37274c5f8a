#pragma once

// Empirical stability statistics of leave-one-out profiles and the
// conversions between mean-square and tail stability.

#include <span>
#include <vector>

#include "bagstab/engine.hpp"

namespace bagstab {

/// delta(eps) = fraction of leave-one-out distances >= eps, on an increasing
/// grid of eps values.
struct TailCurve {
  std::vector<double> epsilons;
  std::vector<double> deltas;

  friend bool operator==(const TailCurve&, const TailCurve&) = default;
};

/// (1/n) sum_i d_i^2.
double mean_square(std::span<const double> distances);
double mean_square(const LooProfile& profile);
/// Average of mean_square over seed replicates of a randomized algorithm.
double mean_square(std::span<const LooProfile> replicates);

/// Grid must be nonempty and strictly increasing; the comparison is d >= eps.
TailCurve tail_curve(std::span<const double> distances, std::span<const double> epsilons);
TailCurve tail_curve(const LooProfile& profile, std::span<const double> epsilons);
TailCurve tail_curve(std::span<const LooProfile> replicates, std::span<const double> epsilons);

/// eps = 0 followed by 64 log-spaced points from half the smallest positive
/// distance to 1.05 times the largest, over all given distance sets.
std::vector<double> default_epsilon_grid(std::span<const std::vector<double>> distance_sets,
                                         std::size_t points = 64);

/// Tail level implied by mean-square stability: min(1, beta^2 / eps^2).
double tail_from_meansquare(double beta_sq, double epsilon);

/// Mean-square level implied by tail stability on a set of diameter D:
/// eps^2 + delta D^2.
double meansquare_from_tail(double epsilon, double delta, double diameter);

}  // namespace bagstab
