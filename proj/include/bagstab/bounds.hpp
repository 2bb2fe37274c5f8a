#pragma once

// Closed-form stability guarantees for bagging: the Hilbert-space bounds
// (derandomized and finite-B), the vector Azuma-Hoeffding radius, and the
// Banach-space bound under a K-term approximation condition.

#include <cstddef>
#include <optional>
#include <string>

#include <json.hpp>

namespace bagstab {

/// e^2 to full double precision.
inline constexpr double kESquared = 7.389056098930650227230427;

struct HilbertBoundInput {
  double radius = 0.0;  ///< Chebyshev radius of the output set
  std::size_t n = 0;
  double p = 0.0;  ///< inclusion probability
  std::optional<std::size_t> bags;

  void validate() const;
};

struct BanachBoundInput {
  double R = 0.0;      ///< diameter bound and l1 budget of the approximation
  std::size_t K = 0;   ///< number of approximating directions
  double rho = 0.0;    ///< approximation slack
  std::size_t n = 0;
  double p = 0.0;

  void validate() const;
};

/// radius^2/(n-1) * p/(1-p).
double hilbert_meansquare_bound(const HilbertBoundInput& in);

/// min(1, hilbert_meansquare_bound / eps^2).
double hilbert_tail_bound(const HilbertBoundInput& in, double epsilon);

/// radius^2 (p/((n-1)(1-p)) + 16 e^2 / B).
double hilbert_finiteB_bound(const HilbertBoundInput& in);

/// Radius C sqrt(log(2e^2/delta) / (2B)) that the average of B centred
/// vectors bounded by C exceeds with probability at most delta.
double hayes_deviation_bound(double C, std::size_t B, double delta);

/// Companion mean-square bound C^2 e^2 / B.
double hayes_meansquare_bound(double C, std::size_t B);

/// (H_n - 1)/(n - H_n) with H_n the n-th harmonic number.
double harmonic_eta(std::size_t n);

/// 1.6 [R sqrt(2(1+eta) log(2K)/n (p/(1-p) + 4 eta/(1-p)^2))
///      + R sqrt(p/(n(1-p))) + 2 rho p]^2.
double banach_meansquare_bound(const BanachBoundInput& in);

/// min(1, banach_meansquare_bound / eps^2).
double banach_tail_bound(const BanachBoundInput& in, double epsilon);

/// Finite-B Banach bound: inf over s > 0 of
/// (1+s) T + (1 + 1/s)(8 K R^2 / B + 8 rho^2), T the derandomized bound.
/// The infimum is (sqrt(T) + sqrt(8KR^2/B + 8 rho^2))^2.
double banach_finiteB_bound(const BanachBoundInput& in, std::size_t bags);

/// The same infimum taken over `grid_points` log-spaced s in [1e-6, 1e6].
double banach_finiteB_bound_grid(const BanachBoundInput& in, std::size_t bags,
                                 std::size_t grid_points = 1000);

enum class Setting2Mode { discrete, lipschitz };

struct Setting2Comparison {
  Setting2Mode mode = Setting2Mode::discrete;
  double parameter = 0.0;  ///< K (discrete) or L (lipschitz)
  std::size_t n = 0;
  double p = 0.0;
  /// Hilbert-route TV bound; for lipschitz only known up to a constant.
  double hilbert = 0.0;
  bool hilbert_up_to_constant = false;
  double banach = 0.0;
  std::size_t banach_K = 0;  ///< approximation dimension used by the Banach route
  double banach_rho = 0.0;
};

/// Compares the Hilbert-route and Banach-route TV stability bounds for
/// distributions on K atoms (discrete) or L-Lipschitz densities on [0,1]
/// (lipschitz, with slack rho = L/(2K) and K minimized over [1, 1e6]).
Setting2Comparison setting2_comparison(double parameter, std::size_t n, double p, Setting2Mode mode);

nlohmann::json to_json(const Setting2Comparison& c);

}  // namespace bagstab
