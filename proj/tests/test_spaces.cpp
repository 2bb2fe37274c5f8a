#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bagstab/error.hpp"
#include "bagstab/spaces.hpp"

using namespace bagstab;

namespace {

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t K) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(K);
  double s = 0.0;
  for (auto& v : w) s += (v = e(rng));
  for (auto& v : w) v /= s;
  return w;
}

OutputPoint random_point(std::mt19937_64& rng, SpaceKind kind, const std::shared_ptr<const EvaluationSites>& sites) {
  std::normal_distribution<double> g(0.0, 1.0);
  switch (kind) {
    case SpaceKind::euclidean: {
      std::vector<double> v(5);
      for (auto& x : v) x = g(rng);
      return VectorPoint(v);
    }
    case SpaceKind::simplex_tv:
    case SpaceKind::simplex_euclidean:
      return SimplexWeights(random_simplex(rng, 6));
    case SpaceKind::sobolev: {
      std::vector<double> v(1 + rng() % 6);
      for (auto& x : v) x = g(rng);
      return FourierEvenFunction(v, 2.0);
    }
    case SpaceKind::grid_l2: {
      std::vector<double> v(sites->count());
      for (auto& x : v) x = g(rng);
      return GridFunction(sites, v);
    }
    case SpaceKind::sparse_tv: {
      std::map<std::string, double> m;
      const auto w = random_simplex(rng, 4);
      for (std::size_t k = 0; k < w.size(); ++k) m["k" + std::to_string(rng() % 8)] += w[k];
      return SparseDistribution(m);
    }
  }
  return {};
}

}  // namespace

TEST_CASE("distance examples") {
  const SpaceDescriptor tv(SpaceKind::simplex_tv);
  CHECK(distance(tv, SimplexWeights::vertex(2, 0), SimplexWeights::vertex(2, 1)) == 1.0);

  const SpaceDescriptor sob(SpaceKind::sobolev);
  CHECK(distance(sob, FourierEvenFunction({1.0}, 2.0), FourierEvenFunction({0.0}, 2.0)) == 1.0);

  const SpaceDescriptor euc(SpaceKind::simplex_euclidean);
  CHECK(distance(euc, SimplexWeights::uniform(4), SimplexWeights::vertex(4, 0)) ==
        doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("distance rejects mismatched shapes") {
  const SpaceDescriptor euc(SpaceKind::euclidean);
  CHECK_THROWS_AS(distance(euc, VectorPoint({1.0, 2.0}), VectorPoint({1.0})), ShapeError);
  const auto s1 = EvaluationSites::halton(8, 2, 1);
  const auto s2 = EvaluationSites::halton(8, 2, 2);
  const SpaceDescriptor grid(SpaceKind::grid_l2);
  CHECK_THROWS_AS(distance(grid, GridFunction(s1, std::vector<double>(8, 0.0)), GridFunction(s2, std::vector<double>(8, 0.0))),
                  ShapeError);
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(7);
  const auto sites = EvaluationSites::halton(32, 3, 11);
  for (SpaceKind kind : {SpaceKind::euclidean, SpaceKind::simplex_tv, SpaceKind::simplex_euclidean, SpaceKind::sobolev,
                         SpaceKind::grid_l2, SpaceKind::sparse_tv}) {
    CAPTURE(to_string(kind));
    const SpaceDescriptor space(kind);
    for (int t = 0; t < 1000; ++t) {
      const auto a = random_point(rng, kind, sites);
      const auto b = random_point(rng, kind, sites);
      const auto c = random_point(rng, kind, sites);
      const double ab = distance(space, a, b);
      const double ba = distance(space, b, a);
      const double bc = distance(space, b, c);
      const double ac = distance(space, a, c);
      REQUIRE(ab >= 0.0);
      REQUIRE(ab == ba);
      REQUIRE(ac <= ab + bc + 1e-10);
      REQUIRE(distance(space, a, a) == 0.0);
    }
  }
}

TEST_CASE("sobolev distance at s = 0 is the l2 distance of the doubled-pair coefficients") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  const SpaceDescriptor sob(SpaceKind::sobolev);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(5), b(5);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    // Coefficient vector over k in {-4..4} with a_{-k} = a_k.
    double s = (a[0] - b[0]) * (a[0] - b[0]);
    for (std::size_t k = 1; k < 5; ++k) s += 2.0 * (a[k] - b[k]) * (a[k] - b[k]);
    CHECK(distance(sob, FourierEvenFunction(a, 0.0), FourierEvenFunction(b, 0.0)) ==
          doctest::Approx(std::sqrt(s)).epsilon(1e-13));
  }
}

TEST_CASE("sparse TV matches a dense oracle") {
  std::mt19937_64 rng(5);
  const SpaceDescriptor tv(SpaceKind::sparse_tv);
  for (int t = 0; t < 500; ++t) {
    const std::size_t support = 1 + rng() % 32;
    std::vector<double> a = random_simplex(rng, support);
    std::vector<double> b = random_simplex(rng, support);
    // Knock out some keys so the supports differ.
    std::map<std::string, double> ma, mb;
    for (std::size_t k = 0; k < support; ++k) {
      if (rng() % 3 == 0) {
        a[k] = 0.0;
      }
    }
    double sa = 0.0;
    for (double v : a) sa += v;
    if (sa == 0.0) {
      a[0] = 1.0;
      sa = 1.0;
    }
    double dense = 0.0;
    for (std::size_t k = 0; k < support; ++k) {
      a[k] /= sa;
      if (a[k] > 0.0) ma[std::to_string(k)] = a[k];
      mb[std::to_string(k)] = b[k];
      dense += std::abs(a[k] - b[k]);
    }
    CHECK(distance(tv, SparseDistribution(ma), SparseDistribution(mb)) == doctest::Approx(0.5 * dense).epsilon(1e-13));
  }
}

TEST_CASE("affine_combine examples") {
  const std::vector<OutputPoint> vertices{SimplexWeights::vertex(2, 0), SimplexWeights::vertex(2, 1)};
  const std::vector<double> half{0.5, 0.5};
  CHECK(std::get<SimplexWeights>(affine_combine(vertices, half)).weights() == std::vector<double>{0.5, 0.5});

  const std::vector<OutputPoint> single{VectorPoint({3.0, -1.0})};
  const std::vector<double> one{1.0};
  CHECK(std::get<VectorPoint>(affine_combine(single, one)).coords() == std::vector<double>{3.0, -1.0});

  const std::vector<OutputPoint> tri{VectorPoint({0.0, 0.0}), VectorPoint({2.0, 4.0}), VectorPoint({4.0, 2.0})};
  const std::vector<double> third{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  const auto c = std::get<VectorPoint>(affine_combine(tri, third)).coords();
  CHECK(c[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(c[1] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("affine_combine errors") {
  const std::vector<OutputPoint> none;
  const std::vector<double> no_weights;
  CHECK_THROWS(affine_combine(none, no_weights));
  const std::vector<OutputPoint> mixed{VectorPoint({1.0}), VectorPoint({1.0, 2.0})};
  const std::vector<double> half{0.5, 0.5};
  CHECK_THROWS_AS(affine_combine(mixed, half), ShapeError);
  const std::vector<OutputPoint> two{VectorPoint({1.0}), VectorPoint({2.0})};
  const std::vector<double> bad{0.5, 0.6};
  CHECK_THROWS(affine_combine(two, bad));
}

TEST_CASE("affine combinations of simplex points stay in the simplex") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 200; ++t) {
    std::vector<OutputPoint> pts;
    for (int k = 0; k < 5; ++k) pts.emplace_back(SimplexWeights(random_simplex(rng, 7)));
    const auto w = random_simplex(rng, 5);
    const auto out = std::get<SimplexWeights>(affine_combine(pts, w));
    double s = 0.0;
    for (double v : out.weights()) {
      CHECK(v >= 0.0);
      s += v;
    }
    CHECK(std::abs(s - 1.0) <= 1e-9);
  }
}

TEST_CASE("simplex weights clamp round-off and reject real violations") {
  const SimplexWeights w({0.5 + 5e-13, 0.5, -5e-13});
  CHECK(w.weights()[2] == 0.0);
  CHECK_THROWS(SimplexWeights({0.5, 0.6, -0.1}));
  CHECK_THROWS(SimplexWeights({0.5, 0.4}));
}

TEST_CASE("simplex euclidean radius matches a vertex brute force") {
  for (std::size_t K = 2; K <= 12; ++K) {
    // Distance from the uniform centre to the farthest vertex.
    double best = 0.0;
    for (std::size_t j = 0; j < K; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < K; ++i) {
        const double d = (i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(K);
        s += d * d;
      }
      best = std::max(best, std::sqrt(s));
    }
    CHECK(simplex_euclidean_radius(K) == doctest::Approx(best).epsilon(1e-15));
    CHECK(simplex_euclidean_radius(K) < 1.0);
  }
  CHECK(simplex_euclidean_radius(2) == doctest::Approx(0.70711).epsilon(1e-5));
  CHECK(simplex_euclidean_radius(3) == doctest::Approx(0.81650).epsilon(1e-5));
  CHECK_THROWS(simplex_euclidean_radius(1));
}

TEST_CASE("space descriptor validates its radius") {
  CHECK_THROWS(SpaceDescriptor(SpaceKind::euclidean, 0.0));
  CHECK_NOTHROW(SpaceDescriptor(SpaceKind::euclidean, 1.0));
  CHECK(parse_space_kind("simplex-tv") == SpaceKind::simplex_tv);
  CHECK(to_string(SpaceKind::grid_l2) == "grid-l2");
}

TEST_CASE("points round-trip through JSON") {
  std::mt19937_64 rng(1);
  const auto sites = EvaluationSites::halton(16, 2, 4);
  for (SpaceKind kind : {SpaceKind::euclidean, SpaceKind::simplex_tv, SpaceKind::sobolev, SpaceKind::grid_l2,
                         SpaceKind::sparse_tv}) {
    const auto p = random_point(rng, kind, sites);
    const auto back = point_from_json(nlohmann::json::parse(to_json(p).dump()), kind, 2.0, sites);
    CHECK(back == p);
  }
  CHECK(to_json(SparseDistribution::point_mass("1,3")).is_object());
  CHECK(to_json(VectorPoint({1.0, 2.0})).is_array());
}

TEST_CASE("halton sites lie in the unit cube and depend on the seed") {
  const auto a = EvaluationSites::halton(4096, 10, 1);
  const auto b = EvaluationSites::halton(4096, 10, 2);
  CHECK(a->count() == 4096);
  for (std::size_t i = 0; i < a->count(); ++i) {
    for (double v : a->site(i)) REQUIRE((v >= 0.0 && v < 1.0));
  }
  CHECK(a->site(0)[0] != b->site(0)[0]);
  const auto a2 = EvaluationSites::halton(4096, 10, 1);
  CHECK(std::equal(a->site(17).begin(), a->site(17).end(), a2->site(17).begin()));
}
