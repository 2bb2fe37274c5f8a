#pragma once

// Least-squares spectral analysis: even Fourier-cosine regression from
// irregular samples on [-1,1] under a Sobolev-ball constraint.

#include <cstddef>
#include <span>
#include <vector>

#include "bagstab/spaces.hpp"

namespace bagstab {

struct LssaSample {
  double x = 0.0;
  double y = 0.0;
};

struct LssaData {
  std::vector<LssaSample> samples;
  double radius = 10.0;  ///< Sobolev-ball radius R
};

/// Number of cosine frequencies used for a dataset of size n: ceil(n/2).
std::size_t lssa_kmax(std::size_t n);

/// argmin over a_0..a_kmax of sum_i (y_i - f_a(x_i))^2 subject to
/// ||f_a||_s^2 <= R^2, with f_a(x) = a_0 + sum_k 2 a_k cos(k x) and the norm
/// a_0^2 + sum_k 2 (1+k^2)^s a_k^2. When the minimum-norm least-squares
/// solution is infeasible the multiplier lambda > 0 of the active constraint
/// is found by bisection until |norm^2 - R^2| <= 1e-10 R^2.
FourierEvenFunction lssa_fit(std::span<const LssaSample> samples, double radius, double smoothness = 2.0);
FourierEvenFunction lssa_fit(const LssaData& data, double smoothness = 2.0);

/// Residual sum of squares of `f` on `samples`.
double lssa_objective(const FourierEvenFunction& f, std::span<const LssaSample> samples);

}  // namespace bagstab
