#include "bagstab/lssa.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "bagstab/error.hpp"

namespace bagstab {

namespace {

constexpr std::size_t kMaxBisection = 200;
constexpr double kNormTolerance = 1e-10;
constexpr double kNullTolerance = 1e-13;

}  // namespace

std::size_t lssa_kmax(std::size_t n) { return (n + 1) / 2; }

FourierEvenFunction lssa_fit(std::span<const LssaSample> samples, double radius, double smoothness) {
  require(!samples.empty(), "lssa_fit: no samples");
  require(radius > 0.0 && std::isfinite(radius), "lssa_fit: radius must be > 0");
  require(smoothness >= 0.0, "lssa_fit: smoothness must be >= 0");
  const auto n = static_cast<Eigen::Index>(samples.size());
  const auto K = static_cast<Eigen::Index>(lssa_kmax(samples.size()) + 1);

  // In b = D^{1/2} a the constraint is the Euclidean ball of radius R.
  Eigen::VectorXd inv_sqrt_d(K);
  for (Eigen::Index k = 0; k < K; ++k) {
    inv_sqrt_d(k) = 1.0 / std::sqrt(FourierEvenFunction::weight(static_cast<std::size_t>(k), smoothness));
  }
  Eigen::MatrixXd A(n, K);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    require(std::isfinite(s.x) && std::isfinite(s.y), "lssa_fit: non-finite sample");
    y(i) = s.y;
    A(i, 0) = inv_sqrt_d(0);
    for (Eigen::Index k = 1; k < K; ++k) A(i, k) = 2.0 * std::cos(static_cast<double>(k) * s.x) * inv_sqrt_d(k);
  }
  const Eigen::MatrixXd G = A.transpose() * A;
  const Eigen::VectorXd h = A.transpose() * y;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G);
  if (eig.info() != Eigen::Success) throw ConvergenceError("lssa_fit: eigendecomposition failed");
  const Eigen::VectorXd lambda_g = eig.eigenvalues();
  const Eigen::MatrixXd& Q = eig.eigenvectors();
  Eigen::VectorXd c = Q.transpose() * h;
  const double cutoff = kNullTolerance * std::max(lambda_g.maxCoeff(), 0.0);
  for (Eigen::Index k = 0; k < K; ++k) {
    if (lambda_g(k) <= cutoff) c(k) = 0.0;
  }

  // Squared norm of b(lambda) = (G + lambda I)^+ h in the eigenbasis.
  auto norm_sq = [&](double lam) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      if (c(k) == 0.0) continue;
      const double v = c(k) / (lambda_g(k) + lam);
      s += v * v;
    }
    return s;
  };
  auto solution = [&](double lam) {
    Eigen::VectorXd z(K);
    for (Eigen::Index k = 0; k < K; ++k) z(k) = c(k) == 0.0 ? 0.0 : c(k) / (lambda_g(k) + lam);
    const Eigen::VectorXd b = Q * z;
    std::vector<double> coeffs(static_cast<std::size_t>(K));
    for (Eigen::Index k = 0; k < K; ++k) coeffs[static_cast<std::size_t>(k)] = b(k) * inv_sqrt_d(k);
    return FourierEvenFunction(std::move(coeffs), smoothness);
  };

  const double r2 = radius * radius;
  if (norm_sq(0.0) <= r2) return solution(0.0);

  double lo = 0.0;
  double hi = c.norm() / radius;  // norm_sq(hi) <= R^2
  for (std::size_t it = 0; it < kMaxBisection; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (norm_sq(mid) > r2) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (std::abs(norm_sq(hi) - r2) <= kNormTolerance * r2) return solution(hi);
  }
  if (std::abs(norm_sq(hi) - r2) <= kNormTolerance * r2) return solution(hi);
  throw ConvergenceError("lssa_fit: multiplier bisection did not reach the constraint boundary");
}

FourierEvenFunction lssa_fit(const LssaData& data, double smoothness) {
  return lssa_fit(std::span<const LssaSample>(data.samples), data.radius, smoothness);
}

double lssa_objective(const FourierEvenFunction& f, std::span<const LssaSample> samples) {
  double s = 0.0;
  for (const auto& p : samples) {
    const double r = p.y - f.evaluate(p.x);
    s += r * r;
  }
  return s;
}

}  // namespace bagstab
