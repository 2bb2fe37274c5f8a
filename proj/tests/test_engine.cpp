#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include "bagstab/engine.hpp"
#include "bagstab/error.hpp"

using namespace bagstab;

namespace {

BaseAlgorithm<double> mean_algorithm() {
  BaseAlgorithm<double> alg;
  alg.fit = [](std::span<const double> d, std::uint64_t) -> OutputPoint {
    double s = 0.0;
    for (double v : d) s += v;
    return VectorPoint({s / static_cast<double>(d.size())});
  };
  alg.order_invariant = true;
  alg.deterministic = true;
  alg.space = SpaceDescriptor(SpaceKind::euclidean);
  return alg;
}

BaseAlgorithm<double> constant_algorithm() {
  BaseAlgorithm<double> alg;
  alg.fit = [](std::span<const double>, std::uint64_t) -> OutputPoint { return VectorPoint({0.25, -3.0}); };
  alg.order_invariant = true;
  alg.deterministic = true;
  alg.space = SpaceDescriptor(SpaceKind::euclidean);
  return alg;
}

// Output carries the seed, so distinct streams are visible.
BaseAlgorithm<double> seed_algorithm() {
  BaseAlgorithm<double> alg;
  alg.fit = [](std::span<const double>, std::uint64_t seed) -> OutputPoint {
    return VectorPoint({static_cast<double>(seed >> 11)});
  };
  alg.order_invariant = true;
  alg.deterministic = false;
  alg.space = SpaceDescriptor(SpaceKind::euclidean);
  return alg;
}

double value(const OutputPoint& p) { return std::get<VectorPoint>(p).coords()[0]; }

}  // namespace

TEST_CASE("constant algorithm is unchanged by bagging") {
  const std::vector<double> data{1, 2, 3, 4, 5};
  const BagConfig cfg{BagScheme(SchemeKind::subbag, 5, 2), 37, 9};
  CHECK(std::get<VectorPoint>(bag_fit(constant_algorithm(), std::span<const double>(data), cfg)).coords() ==
        std::vector<double>{0.25, -3.0});
}

TEST_CASE("derandomized mean equals the full-data mean") {
  const auto alg = mean_algorithm();
  const std::vector<double> two{3.0, 7.0};
  CHECK(value(derandomized_fit(alg, std::span<const double>(two), BagScheme(SchemeKind::subbag, 2, 1))) ==
        doctest::Approx(5.0).epsilon(1e-15));
  CHECK(value(derandomized_fit(alg, std::span<const double>(two), BagScheme(SchemeKind::bootstrap, 2, 2))) ==
        doctest::Approx(5.0).epsilon(1e-15));
  const std::vector<double> four{1.0, 2.0, 4.0, 9.0};
  CHECK(value(derandomized_fit(alg, std::span<const double>(four), BagScheme(SchemeKind::subbag, 4, 2))) ==
        doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("derandomized_fit preconditions") {
  const std::vector<double> data(40, 1.0);
  auto alg = mean_algorithm();
  CHECK_THROWS_AS(derandomized_fit(alg, std::span<const double>(data), BagScheme(SchemeKind::subbag, 40, 20)),
                  BudgetError);
  alg.order_invariant = false;
  const std::vector<double> small{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(derandomized_fit(alg, std::span<const double>(small), BagScheme(SchemeKind::subbag, 3, 1)),
                  ArgumentError);
  CHECK_THROWS_AS(derandomized_fit(seed_algorithm(), std::span<const double>(small), BagScheme(SchemeKind::subbag, 3, 1)),
                  ArgumentError);
}

TEST_CASE("bag_fit checks its configuration") {
  const std::vector<double> data{1.0, 2.0, 3.0};
  const auto alg = mean_algorithm();
  CHECK_THROWS(bag_fit(alg, std::span<const double>(data), BagConfig{BagScheme(SchemeKind::subbag, 4, 2), 10, 0}));
  CHECK_THROWS(bag_fit(alg, std::span<const double>(data), BagConfig{BagScheme(SchemeKind::subbag, 3, 2), 0, 0}));
}

TEST_CASE("base algorithm failures carry the bag index") {
  BaseAlgorithm<double> alg = mean_algorithm();
  alg.fit = [](std::span<const double>, std::uint64_t) -> OutputPoint { throw std::runtime_error("boom"); };
  const std::vector<double> data{1.0, 2.0, 3.0};
  try {
    bag_fit(alg, std::span<const double>(data), BagConfig{BagScheme(SchemeKind::subbag, 3, 2), 5, 0});
    FAIL("expected a failure");
  } catch (const FitError& e) {
    CHECK(std::string(e.what()).find("bag 0") != std::string::npos);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("bag_fit with many bags approaches the exact average") {
  const std::vector<double> data{0.3, 1.7, -2.0, 4.1, 0.0, 2.2, 5.5, -1.1};
  const BagScheme scheme(SchemeKind::subbag, 8, 4);
  const auto alg = mean_algorithm();
  const double exact = value(derandomized_fit(alg, std::span<const double>(data), scheme));
  const std::size_t B = 100'000;
  const double approx = value(bag_fit(alg, std::span<const double>(data), BagConfig{scheme, B, 123}));
  // Standard error from the per-bag output spread.
  double s = 0.0, s2 = 0.0;
  for (std::size_t b = 0; b < 2000; ++b) {
    const Bag bag = sample_bag(scheme, 1000 + b);
    double v = 0.0;
    for (auto i : bag) v += data[i];
    v /= 4.0;
    s += v;
    s2 += v * v;
  }
  const double var = s2 / 2000.0 - (s / 2000.0) * (s / 2000.0);
  CHECK(std::abs(approx - exact) <= 5.0 * std::sqrt(var / static_cast<double>(B)));
}

TEST_CASE("loo profiles") {
  const std::vector<double> data{0.0, 1.0};
  const SpaceDescriptor euc(SpaceKind::euclidean);
  const auto constant = loo_profile(base_fit(constant_algorithm(), 0), std::span<const double>(data), euc);
  CHECK(constant.distances == std::vector<double>{0.0, 0.0});
  const auto mean = loo_profile(base_fit(mean_algorithm(), 0), std::span<const double>(data), euc);
  CHECK(value(mean.full) == 0.5);
  CHECK(value(mean.dropped[0]) == 1.0);
  CHECK(value(mean.dropped[1]) == 0.0);
  CHECK(mean.distances == std::vector<double>{0.5, 0.5});
  CHECK_THROWS(loo_profile(base_fit(mean_algorithm(), 0), std::span<const double>(data.data(), 1), euc));
}

TEST_CASE("leave-one-out fits use disjoint seed streams") {
  std::vector<double> data(12);
  const SpaceDescriptor euc(SpaceKind::euclidean);
  const auto prof = loo_profile(base_fit(seed_algorithm(), 77), std::span<const double>(data), euc);
  std::set<double> seeds{value(prof.full)};
  for (const auto& p : prof.dropped) seeds.insert(value(p));
  CHECK(seeds.size() == data.size() + 1);

  // A single-bag bagged fit exposes the bag seed stream of each run.
  const BagConfig cfg{BagScheme(SchemeKind::subbag, 12, 6), 1, 5};
  const auto bagged = loo_profile(bagged_fit(seed_algorithm(), cfg), std::span<const double>(data), euc);
  std::set<double> bag_seeds{value(bagged.full)};
  for (const auto& p : bagged.dropped) bag_seeds.insert(value(p));
  CHECK(bag_seeds.size() == data.size() + 1);
}

TEST_CASE("bagged leave-one-out runs use the leave-one-out scheme") {
  std::vector<double> data{1, 2, 3, 4, 5, 6};
  const SpaceDescriptor euc(SpaceKind::euclidean);
  const auto exact = derandomized(mean_algorithm(), BagScheme(SchemeKind::subbag, 6, 3));
  const auto prof = loo_profile(exact, std::span<const double>(data), euc);
  // Exact subbagged mean of D^{\i} is the mean of D^{\i}.
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(value(prof.dropped[i]) == doctest::Approx((21.0 - data[i]) / 5.0).epsilon(1e-14));
  }
  CHECK_THROWS(exact(std::span<const double>(data.data(), 3), 0));
}

TEST_CASE("results do not depend on the thread count") {
  std::vector<double> data(30);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = std::sin(static_cast<double>(i));
  const BagConfig cfg{BagScheme(SchemeKind::bootstrap, 30, 15), 500, 11};
  const SpaceDescriptor euc(SpaceKind::euclidean);
  std::vector<std::vector<double>> runs;
  for (const char* threads : {"1", "3", "8"}) {
    setenv("STAB_THREADS", threads, 1);
    const auto prof = loo_profile(bagged_fit(mean_algorithm(), cfg), std::span<const double>(data), euc);
    std::vector<double> out{value(prof.full)};
    out.insert(out.end(), prof.distances.begin(), prof.distances.end());
    runs.push_back(out);
  }
  unsetenv("STAB_THREADS");
  CHECK(runs[0] == runs[1]);
  CHECK(runs[0] == runs[2]);
}

TEST_CASE("monte carlo convergence probe") {
  const std::vector<double> data{0.3, 1.7, -2.0, 4.1, 0.0, 2.2, 5.5, -1.1, 3.3, 0.9};
  const BagScheme scheme(SchemeKind::subbag, 10, 5);
  const std::vector<std::size_t> bags{100, 1600};
  const auto zero = mc_convergence_probe(constant_algorithm(), std::span<const double>(data), scheme,
                                         std::span<const std::size_t>(bags), 3, 1);
  for (const auto& row : zero) CHECK(row.mean_distance == 0.0);
  CHECK_THROWS_AS(mc_convergence_probe(mean_algorithm(), std::span<const double>(data), scheme,
                                       std::span<const std::size_t>(bags), 0, 1),
                  ArgumentError);
  const auto rows = mc_convergence_probe(mean_algorithm(), std::span<const double>(data), scheme,
                                         std::span<const std::size_t>(bags), 400, 2);
  REQUIRE(rows.size() == 2);
  const double ratio = rows[0].median_distance / rows[1].median_distance;
  CHECK(ratio >= 2.8);
  CHECK(ratio <= 5.7);
}
