#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "bagstab/discrete.hpp"
#include "bagstab/engine.hpp"
#include "bagstab/error.hpp"
#include "bagstab/generators.hpp"
#include "bagstab/lssa.hpp"
#include "bagstab/scm.hpp"
#include "bagstab/stability.hpp"
#include "bagstab/tree.hpp"

using namespace bagstab;

namespace {

// Minimum of the SCM objective over a grid on the simplex of three controls.
double grid_oracle(std::span<const double> treated, std::span<const ControlUnit> controls, double step) {
  double best = INFINITY;
  const int steps = static_cast<int>(std::lround(1.0 / step));
  for (int a = 0; a <= steps; ++a) {
    for (int b = 0; a + b <= steps; ++b) {
      if (controls.size() == 2 && a + b != steps) continue;
      std::vector<double> w{a * step, b * step};
      if (controls.size() == 3) w.push_back(1.0 - w[0] - w[1]);
      best = std::min(best, scm_objective(treated, controls, w));
    }
  }
  return best;
}

std::vector<ControlUnit> random_controls(std::mt19937_64& rng, std::size_t count, std::size_t p) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<ControlUnit> c(count);
  for (std::size_t j = 0; j < count; ++j) {
    c[j].id = j;
    c[j].predictors.resize(p);
    for (auto& v : c[j].predictors) v = g(rng);
  }
  return c;
}

}  // namespace

TEST_CASE("tree on a single point is constant") {
  const std::vector<LabeledPoint> one{{{0.3, 0.7}, 0.42}};
  const auto tree = tree_fit(one, 50);
  CHECK(tree.leaf_count() == 1);
  CHECK(tree.predict(std::vector<double>{0.9, 0.1}) == 0.42);
  CHECK_THROWS(tree_fit(std::vector<LabeledPoint>{}, 5));
}

TEST_CASE("tree separates two points with one split") {
  const std::vector<LabeledPoint> two{{{0.2, 0.5}, 0.0}, {{0.8, 0.5}, 1.0}};
  const auto tree = tree_fit(two, 50);
  CHECK(tree.depth() == 1);
  CHECK(tree.nodes()[0].feature == 0);
  CHECK(tree.nodes()[0].threshold == doctest::Approx(0.5));
  CHECK(training_mse(tree, two) == 0.0);
}

TEST_CASE("tie between features goes to the lowest feature") {
  const std::vector<LabeledPoint> pts{{{0.1, 0.1}, 0.0}, {{0.9, 0.9}, 1.0}};
  CHECK(tree_fit(pts, 3).nodes()[0].feature == 0);
}

TEST_CASE("deeper trees fit the training data at least as well") {
  const auto data = gen_experiment1(100, 5, 3);
  const double deep = training_mse(tree_fit(data, 50), data);
  const double stump = training_mse(tree_fit(data, 1), data);
  CHECK(deep <= stump);
  CHECK(tree_fit(data, 4).depth() <= 4);
}

TEST_CASE("tree fit is invariant to row permutations") {
  const auto data = gen_experiment1(60, 4, 8);
  const auto sites = EvaluationSites::halton(256, 4, 1);
  const auto reference = tree_to_grid(tree_fit(data, 50), sites);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    auto shuffled = data;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    REQUIRE(tree_to_grid(tree_fit(shuffled, 50), sites).values() == reference.values());
  }
  for (double v : reference.values()) CHECK((v >= 0.0 && v <= 1.0));
}

TEST_CASE("scm recovers an exact control") {
  std::mt19937_64 rng(1);
  const auto controls = random_controls(rng, 6, 4);
  const auto w = scm_fit(controls[3].predictors, controls, 6);
  CHECK(w.weights()[3] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("scm midpoint of two controls") {
  std::mt19937_64 rng(2);
  const auto controls = random_controls(rng, 3, 4);
  std::vector<double> treated(4);
  for (std::size_t k = 0; k < 4; ++k) treated[k] = 0.5 * (controls[0].predictors[k] + controls[1].predictors[k]);
  const auto sol = scm_solve(treated, controls);
  CHECK(sol.weights[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(sol.weights[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(sol.weights[2] == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(sol.duality_gap <= 1e-10);
  CHECK(std::abs(sol.objective - grid_oracle(treated, controls, 1e-3)) <= 1e-6);
}

TEST_CASE("scm objective matches the grid oracle for up to three controls") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    const std::size_t count = 2 + t % 2;
    const auto controls = random_controls(rng, count, 3);
    std::vector<double> treated(3);
    for (auto& v : treated) v = g(rng);
    const auto sol = scm_solve(treated, controls);
    double sum = 0.0;
    for (double v : sol.weights) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    const double oracle = grid_oracle(treated, controls, 1e-3);
    CHECK(sol.objective <= oracle + 1e-9);
    // Grid resolution 1e-3 puts the oracle within O(1e-6) of the optimum.
    CHECK(oracle - sol.objective <= 1e-4);
  }
}

TEST_CASE("scm handles symmetric controls with the treated unit orthogonal") {
  std::vector<ControlUnit> controls{{0, {1.0, 0.0}}, {1, {-1.0, 0.0}}, {2, {0.0, 1.0}}, {3, {0.0, -1.0}}};
  const std::vector<double> treated{0.0, 0.0};
  const auto sol = scm_solve(treated, controls);
  CHECK(sol.objective <= 1e-10);
  const auto sol3 = scm_solve(std::vector<double>{0.0, 0.0, 5.0},
                              std::vector<ControlUnit>{{0, {1.0, 0.0, 0.0}}, {1, {-1.0, 0.0, 0.0}}, {2, {0.0, 1.0, 0.0}}});
  CHECK(std::abs(sol3.objective - 25.0) <= 1e-6);
  std::vector<ControlUnit> sub(controls.begin(), controls.begin() + 3);
  CHECK(std::abs(scm_solve(std::vector<double>{0.0, 0.0}, sub).objective - grid_oracle(std::vector<double>{0.0, 0.0}, sub, 1e-3)) <= 1e-6);
}

TEST_CASE("scm assigns zero weight to omitted units") {
  std::mt19937_64 rng(4);
  auto controls = random_controls(rng, 6, 3);
  std::vector<ControlUnit> subset{controls[1], controls[4], controls[5]};
  const auto w = scm_fit(controls[4].predictors, subset, 6);
  REQUIRE(w.size() == 6);
  CHECK(w.weights()[0] == 0.0);
  CHECK(w.weights()[2] == 0.0);
  CHECK(w.weights()[4] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(scm_fit(controls[0].predictors, controls, 3), ShapeError);
}

TEST_CASE("scm recovers synthetic generating weights without noise") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto synth = gen_experiment2_synthetic(3, 6, seed, 0.0);
    const auto w = scm_fit(synth.panel);
    double err = 0.0;
    for (std::size_t j = 0; j < 3; ++j) err += std::pow(w.weights()[j] - synth.true_weights[j], 2);
    CHECK(std::sqrt(err) <= 1e-4);
  }
  const auto big = gen_experiment2_synthetic(16, 6, 1, 0.0);
  const auto w = scm_fit(big.panel);
  CHECK(scm_objective(big.panel.treated, big.panel.controls, w.weights()) <= 1e-9);
}

TEST_CASE("lssa zero data gives zero coefficients") {
  std::vector<LssaSample> s;
  for (int i = 0; i < 20; ++i) s.push_back({-1.0 + 0.1 * i, 0.0});
  const auto f = lssa_fit(s, 10.0);
  for (double a : f.coeffs()) CHECK(a == 0.0);
  CHECK(f.kmax() == 10);
}

TEST_CASE("lssa with a huge radius is ordinary least squares") {
  // 15 samples spread over [0, pi] give kmax 8 and a well-conditioned
  // nine-column cosine design.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.14159);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<LssaSample> s;
  for (int i = 0; i < 15; ++i) s.push_back({u(rng), g(rng)});
  const auto f = lssa_fit(s, 1e12);
  REQUIRE(f.kmax() == 8);
  const std::size_t K = 9;
  Eigen::MatrixXd X(15, K);
  Eigen::VectorXd y(15);
  for (int i = 0; i < 15; ++i) {
    y(i) = s[i].y;
    X(i, 0) = 1.0;
    for (std::size_t k = 1; k < K; ++k) X(i, k) = 2.0 * std::cos(static_cast<double>(k) * s[i].x);
  }
  const Eigen::VectorXd ols = X.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd fitted = X * ols;
  for (int i = 0; i < 15; ++i) CHECK(f.evaluate(s[i].x) == doctest::Approx(fitted(i)).epsilon(1e-6).scale(1.0));
  CHECK(lssa_objective(f, s) <= (y - fitted).squaredNorm() + 1e-8);
}

TEST_CASE("lssa with a clean design matches normal equations closely") {
  std::vector<LssaSample> s;
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 3.14159);
  for (int i = 0; i < 11; ++i) {
    const double x = u(rng);
    s.push_back({x, 0.3 + 0.1 * std::cos(x) - 0.05 * std::cos(2 * x)});
  }
  // n = 11 gives kmax 6, seven columns; the truth lies in the span.
  const auto f = lssa_fit(s, 1e6);
  CHECK(f.coeffs()[0] == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(f.coeffs()[1] == doctest::Approx(0.05).epsilon(1e-6));
  CHECK(f.coeffs()[2] == doctest::Approx(-0.025).epsilon(1e-6));
}

TEST_CASE("lssa active constraint lands on the boundary and beats scaled least squares") {
  const auto data = gen_experiment3(60, 2);
  for (double R : {0.05, 0.3, 1.0}) {
    const auto f = lssa_fit(data.samples, R);
    CHECK(std::abs(f.squared_norm() - R * R) <= 1e-10 * R * R);
    const auto free_fit = lssa_fit(data.samples, 1e12);
    const double scale = R / std::sqrt(free_fit.squared_norm());
    std::vector<double> scaled = free_fit.coeffs();
    for (auto& a : scaled) a *= scale;
    CHECK(lssa_objective(f, data.samples) <= lssa_objective(FourierEvenFunction(scaled, 2.0), data.samples) + 1e-9);
  }
}

TEST_CASE("lssa output stays in the Sobolev ball") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto data = gen_experiment3(20 + seed * 7, seed);
    const auto f = lssa_fit(data);
    CHECK(f.squared_norm() <= 100.0 * (1.0 + 1e-9));
  }
}

TEST_CASE("softmax of column sums") {
  std::vector<BinaryRow> zeros(3, BinaryRow{{0, 0, 0, 0}});
  const auto uniform = softmax_columns(zeros, 4);
  for (double v : uniform.weights()) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
  const std::vector<BinaryRow> one{BinaryRow{{1, 0}}};
  const auto w = softmax_columns(one, 2).weights();
  CHECK(w[0] == doctest::Approx(0.73106).epsilon(1e-5));
  CHECK(w[1] == doctest::Approx(0.26894).epsilon(1e-5));
  CHECK(w[0] == doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 1.0)).epsilon(1e-15));
}

TEST_CASE("softmax is shift invariant and row-sensitive") {
  auto rows = gen_experiment4(50, 8, 3);
  const auto base = softmax_columns(rows, 8).weights();
  double s = 0.0;
  for (double v : base) s += v;
  CHECK(std::abs(s - 1.0) <= 1e-12);
  // A row of ones adds 1 to every column sum.
  auto shifted = rows;
  shifted.push_back(BinaryRow{std::vector<std::uint8_t>(8, 1)});
  const auto w = softmax_columns(shifted, 8).weights();
  CHECK(std::max_element(w.begin(), w.end()) - w.begin() == std::max_element(base.begin(), base.end()) - base.begin());
  for (std::size_t j = 0; j < 8; ++j) CHECK(w[j] == doctest::Approx(base[j]).epsilon(1e-14));
  // Removing a mixed row changes the output.
  std::size_t mixed = 0;
  while (std::all_of(rows[mixed].bits.begin(), rows[mixed].bits.end(), [&](auto b) { return b == rows[mixed].bits[0]; }))
    ++mixed;
  auto dropped = rows;
  dropped.erase(dropped.begin() + static_cast<std::ptrdiff_t>(mixed));
  CHECK(softmax_columns(dropped, 8).weights() != base);
  CHECK_THROWS_AS(softmax_columns(std::vector<BinaryRow>{BinaryRow{{1, 0, 1}}}, 2), ShapeError);
}

TEST_CASE("counterexample algorithm keys distinct values") {
  const std::vector<std::uint64_t> d{3, 1, 3};
  CHECK(counterexample_alg(d).mass() == std::map<std::string, double>{{"1,3", 1.0}});
  const std::vector<std::uint64_t> seq{1, 2, 3, 4, 5};
  CHECK(counterexample_alg(seq).at("1,2,3,4,5") == 1.0);
  CHECK_THROWS(counterexample_alg(std::vector<std::uint64_t>{}));
}

namespace {
BaseAlgorithm<std::uint64_t> counterexample_base() {
  BaseAlgorithm<std::uint64_t> alg;
  alg.fit = [](std::span<const std::uint64_t> x, std::uint64_t) -> OutputPoint { return counterexample_alg(x); };
  alg.order_invariant = true;
  alg.deterministic = true;
  alg.space = SpaceDescriptor(SpaceKind::sparse_tv, 1.0);
  return alg;
}
}  // namespace

TEST_CASE("derandomized counterexample spreads mass over all subsets") {
  std::vector<std::uint64_t> data{1, 2, 3, 4, 5, 6};
  const auto out = std::get<SparseDistribution>(
      derandomized_fit(counterexample_base(), std::span<const std::uint64_t>(data), BagScheme(SchemeKind::subbag, 6, 3)));
  CHECK(out.mass().size() == 20);
  for (const auto& [key, mass] : out.mass()) CHECK(mass == doctest::Approx(1.0 / 20.0).epsilon(1e-14));
  CHECK(out.at("1,2,3") > 0.0);
}

TEST_CASE("counterexample leave-one-out distances equal m/n") {
  for (std::size_t n = 4; n <= 16; ++n) {
    std::vector<std::uint64_t> data(n);
    for (std::size_t i = 0; i < n; ++i) data[i] = i + 1;
    for (std::size_t m : {std::size_t{1}, std::size_t{2}, n / 2, n - 1}) {
      const BagScheme scheme(SchemeKind::subbag, n, m);
      if (collapsed_support_size(scheme) > 20'000) continue;
      const auto prof = loo_profile(derandomized(counterexample_base(), scheme), std::span<const std::uint64_t>(data),
                                    SpaceDescriptor(SpaceKind::sparse_tv));
      for (double d : prof.distances) REQUIRE(std::abs(d - static_cast<double>(m) / static_cast<double>(n)) <= 1e-12);
    }
  }
}
