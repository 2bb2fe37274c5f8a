#include "bagstab/bounds.hpp"

#include <cmath>
#include <limits>

#include "bagstab/error.hpp"
#include "bagstab/spaces.hpp"

namespace bagstab {

namespace {

double odds(double p) { return p / (1.0 - p); }

// The bracketed term of the Banach bound, with eta supplied by the caller.
double banach_bracket(const BanachBoundInput& in, double eta) {
  const double n = static_cast<double>(in.n);
  const double p = in.p;
  const double q = 1.0 - p;
  const double concentration =
      in.R * std::sqrt(2.0 * (1.0 + eta) * std::log(2.0 * static_cast<double>(in.K)) / n *
                       (odds(p) + 4.0 * eta / (q * q)));
  const double variance = in.R * std::sqrt(odds(p) / n);
  return concentration + variance + 2.0 * in.rho * p;
}

double banach_bound_with_eta(const BanachBoundInput& in, double eta) {
  const double bracket = banach_bracket(in, eta);
  return 1.6 * bracket * bracket;
}

double monte_carlo_term(const BanachBoundInput& in, std::size_t bags) {
  return 8.0 * static_cast<double>(in.K) * in.R * in.R / static_cast<double>(bags) + 8.0 * in.rho * in.rho;
}

}  // namespace

void HilbertBoundInput::validate() const {
  require(radius > 0.0 && std::isfinite(radius), "Hilbert bound: radius must be > 0");
  require(n >= 2, "Hilbert bound: n must be >= 2");
  require(p > 0.0 && p < 1.0, "Hilbert bound: inclusion probability must lie in (0,1)");
  if (bags) require(*bags >= 1, "Hilbert bound: B must be >= 1");
}

void BanachBoundInput::validate() const {
  require(R > 0.0 && std::isfinite(R), "Banach bound: R must be > 0");
  require(K >= 1, "Banach bound: K must be >= 1");
  require(rho >= 0.0 && std::isfinite(rho), "Banach bound: rho must be >= 0");
  require(n >= 2, "Banach bound: n must be >= 2");
  require(p > 0.0 && p < 1.0, "Banach bound: inclusion probability must lie in (0,1)");
}

double hilbert_meansquare_bound(const HilbertBoundInput& in) {
  in.validate();
  return in.radius * in.radius / static_cast<double>(in.n - 1) * odds(in.p);
}

double hilbert_tail_bound(const HilbertBoundInput& in, double epsilon) {
  require(epsilon > 0.0, "hilbert_tail_bound: epsilon must be > 0");
  return std::min(1.0, hilbert_meansquare_bound(in) / (epsilon * epsilon));
}

double hilbert_finiteB_bound(const HilbertBoundInput& in) {
  in.validate();
  require(in.bags.has_value(), "hilbert_finiteB_bound: B is required");
  return in.radius * in.radius *
         (odds(in.p) / static_cast<double>(in.n - 1) + 16.0 * kESquared / static_cast<double>(*in.bags));
}

double hayes_deviation_bound(double C, std::size_t B, double delta) {
  require(C > 0.0, "hayes_deviation_bound: C must be > 0");
  require(B >= 1, "hayes_deviation_bound: B must be >= 1");
  require(delta > 0.0 && delta < 1.0, "hayes_deviation_bound: delta must lie in (0,1)");
  return C * std::sqrt(std::log(2.0 * kESquared / delta) / (2.0 * static_cast<double>(B)));
}

double hayes_meansquare_bound(double C, std::size_t B) {
  require(C > 0.0, "hayes_meansquare_bound: C must be > 0");
  require(B >= 1, "hayes_meansquare_bound: B must be >= 1");
  return C * C * kESquared / static_cast<double>(B);
}

double harmonic_eta(std::size_t n) {
  require(n >= 2, "harmonic_eta: n must be >= 2");
  // Smallest terms first.
  double h = 0.0;
  for (std::size_t k = n; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return (h - 1.0) / (static_cast<double>(n) - h);
}

double banach_meansquare_bound(const BanachBoundInput& in) {
  in.validate();
  return banach_bound_with_eta(in, harmonic_eta(in.n));
}

double banach_tail_bound(const BanachBoundInput& in, double epsilon) {
  require(epsilon > 0.0, "banach_tail_bound: epsilon must be > 0");
  return std::min(1.0, banach_meansquare_bound(in) / (epsilon * epsilon));
}

double banach_finiteB_bound(const BanachBoundInput& in, std::size_t bags) {
  require(bags >= 1, "banach_finiteB_bound: B must be >= 1");
  const double t = banach_meansquare_bound(in);
  const double c = monte_carlo_term(in, bags);
  const double root = std::sqrt(t) + std::sqrt(c);
  return root * root;
}

double banach_finiteB_bound_grid(const BanachBoundInput& in, std::size_t bags, std::size_t grid_points) {
  require(bags >= 1, "banach_finiteB_bound_grid: B must be >= 1");
  require(grid_points >= 2, "banach_finiteB_bound_grid: need at least two grid points");
  const double t = banach_meansquare_bound(in);
  const double c = monte_carlo_term(in, bags);
  const double lo = std::log(1e-6);
  const double hi = std::log(1e6);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double s = std::exp(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(grid_points - 1));
    best = std::min(best, (1.0 + s) * t + (1.0 + 1.0 / s) * c);
  }
  return best;
}

Setting2Comparison setting2_comparison(double parameter, std::size_t n, double p, Setting2Mode mode) {
  require(n >= 2, "setting2_comparison: n must be >= 2");
  require(p > 0.0 && p < 1.0, "setting2_comparison: p must lie in (0,1)");
  Setting2Comparison c;
  c.mode = mode;
  c.parameter = parameter;
  c.n = n;
  c.p = p;
  const double eta = harmonic_eta(n);

  if (mode == Setting2Mode::discrete) {
    require(parameter >= 2.0 && parameter == std::floor(parameter),
            "setting2_comparison: K must be an integer >= 2");
    const auto K = static_cast<std::size_t>(parameter);
    const double radius = simplex_euclidean_radius(K);
    // d_TV^2 <= (K/4) ||.||_2^2.
    c.hilbert = static_cast<double>(K) / 4.0 * hilbert_meansquare_bound({radius, n, p, std::nullopt});
    const BanachBoundInput in{1.0, K, 0.0, n, p};
    in.validate();
    c.banach = banach_bound_with_eta(in, eta);
    c.banach_K = K;
    return c;
  }

  require(parameter > 0.0 && std::isfinite(parameter), "setting2_comparison: L must be > 0");
  // rad_L2 of the L-Lipschitz densities grows like L^{1/4}; the constant is
  // not pinned down, so this value is the scaling law with constant one.
  c.hilbert = std::sqrt(parameter) / static_cast<double>(n - 1) * odds(p);
  c.hilbert_up_to_constant = true;
  constexpr std::size_t kMaxK = 1'000'000;
  c.banach = std::numeric_limits<double>::infinity();
  for (std::size_t K = 1; K <= kMaxK; ++K) {
    const BanachBoundInput in{1.0, K, parameter / (2.0 * static_cast<double>(K)), n, p};
    const double v = banach_bound_with_eta(in, eta);
    if (v < c.banach) {
      c.banach = v;
      c.banach_K = K;
      c.banach_rho = in.rho;
    }
  }
  return c;
}

nlohmann::json to_json(const Setting2Comparison& c) {
  return {{"mode", c.mode == Setting2Mode::discrete ? "discrete" : "lipschitz"},
          {"parameter", c.parameter},
          {"n", c.n},
          {"p", c.p},
          {"hilbert", c.hilbert},
          {"hilbert_up_to_constant", c.hilbert_up_to_constant},
          {"banach", c.banach},
          {"banach_K", c.banach_K},
          {"banach_rho", c.banach_rho}};
}

}  // namespace bagstab
