#pragma once

// Synthetic data-generating processes for the four experiments.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bagstab/discrete.hpp"
#include "bagstab/lssa.hpp"
#include "bagstab/scm.hpp"
#include "bagstab/tree.hpp"

namespace bagstab {

/// X ~ U[0,1]^d and Y~_i = sum_j sin(X_ij / j) + alpha_i 1{i = 1 mod 3}
/// + gamma_i 1{i = 1 mod 4} for 1-based i, alpha ~ U[-1/4,1/4], gamma ~ U[0,1];
/// responses are min-max normalized to [0,1]. `include_latent = false`
/// drops both latent terms.
std::vector<LabeledPoint> gen_experiment1(std::size_t n, std::size_t d, std::uint64_t seed,
                                          bool include_latent = true);

/// f*(x) = sin(2/(1-x) + 2/(1+x)).
double experiment3_truth(double x);

/// X = +-U1 U2 (density -log|x| / 2 on [-1,1]) and Y = f*(X) + N(0, 0.1^2).
LssaData gen_experiment3(std::size_t n, std::uint64_t seed, double radius = 10.0);

/// n x d matrix of iid Bernoulli(0.2) entries.
std::vector<BinaryRow> gen_experiment4(std::size_t n, std::size_t d, std::uint64_t seed);

struct SyntheticPanel {
  PanelData panel;
  std::vector<double> true_weights;  ///< generating weights over the controls
};

/// Controls with iid N(0,1) predictors; the treated unit is a uniformly
/// random convex combination of three distinct controls plus N(0, noise_sd^2)
/// noise per predictor.
SyntheticPanel gen_experiment2_synthetic(std::size_t n_controls, std::size_t p, std::uint64_t seed,
                                         double noise_sd = 0.1);

}  // namespace bagstab
