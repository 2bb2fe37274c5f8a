#include "bagstab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bagstab/error.hpp"
#include "bagstab/seeding.hpp"

namespace bagstab {

namespace {

constexpr std::uint64_t kExp1Domain = 0x657870312d646174ULL;
constexpr std::uint64_t kExp2Domain = 0x657870322d646174ULL;
constexpr std::uint64_t kExp3Domain = 0x657870332d646174ULL;
constexpr std::uint64_t kExp4Domain = 0x657870342d646174ULL;

double uniform(SplitMix64& gen, double lo, double hi) { return lo + (hi - lo) * uniform_unit(gen); }

// Box-Muller; both uniforms are always consumed so the stream is aligned.
double standard_normal(SplitMix64& gen) {
  const double u1 = 1.0 - uniform_unit(gen);
  const double u2 = uniform_unit(gen);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

std::vector<LabeledPoint> gen_experiment1(std::size_t n, std::size_t d, std::uint64_t seed, bool include_latent) {
  require(n >= 2, "gen_experiment1: n must be >= 2");
  require(d >= 1, "gen_experiment1: d must be >= 1");
  SplitMix64 gen(derive_seed(seed, kExp1Domain, 0));
  std::vector<LabeledPoint> data(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& pt = data[i];
    pt.x.resize(d);
    double y = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      pt.x[j] = uniform_unit(gen);
      y += std::sin(pt.x[j] / static_cast<double>(j + 1));
    }
    const double alpha = uniform(gen, -0.25, 0.25);
    const double gamma = uniform_unit(gen);
    const std::size_t index = i + 1;
    if (include_latent && index % 3 == 1) y += alpha;
    if (include_latent && index % 4 == 1) y += gamma;
    pt.y = y;
  }
  const auto [lo, hi] = std::minmax_element(data.begin(), data.end(),
                                            [](const auto& a, const auto& b) { return a.y < b.y; });
  const double ymin = lo->y;
  const double span = hi->y - ymin;
  for (auto& pt : data) pt.y = span > 0.0 ? (pt.y - ymin) / span : 0.0;
  return data;
}

double experiment3_truth(double x) { return std::sin(2.0 / (1.0 - x) + 2.0 / (1.0 + x)); }

LssaData gen_experiment3(std::size_t n, std::uint64_t seed, double radius) {
  require(n >= 2, "gen_experiment3: n must be >= 2");
  SplitMix64 gen(derive_seed(seed, kExp3Domain, 0));
  LssaData data;
  data.radius = radius;
  data.samples.resize(n);
  for (auto& s : data.samples) {
    const bool negative = uniform_below(gen, 2) == 1;
    const double magnitude = uniform_unit(gen) * uniform_unit(gen);
    s.x = negative ? -magnitude : magnitude;
    s.y = experiment3_truth(s.x) + 0.1 * standard_normal(gen);
  }
  return data;
}

std::vector<BinaryRow> gen_experiment4(std::size_t n, std::size_t d, std::uint64_t seed) {
  require(n >= 1 && d >= 1, "gen_experiment4: n and d must be >= 1");
  SplitMix64 gen(derive_seed(seed, kExp4Domain, 0));
  std::vector<BinaryRow> rows(n);
  for (auto& row : rows) {
    row.bits.resize(d);
    for (auto& b : row.bits) b = uniform_unit(gen) < 0.2 ? 1 : 0;
  }
  return rows;
}

SyntheticPanel gen_experiment2_synthetic(std::size_t n_controls, std::size_t p, std::uint64_t seed,
                                         double noise_sd) {
  require(n_controls >= 2, "gen_experiment2_synthetic: need at least two controls");
  require(p >= 1, "gen_experiment2_synthetic: p must be >= 1");
  require(noise_sd >= 0.0, "gen_experiment2_synthetic: noise_sd must be >= 0");
  SplitMix64 gen(derive_seed(seed, kExp2Domain, 0));
  SyntheticPanel out;
  auto& panel = out.panel;
  panel.treated_name = "treated";
  for (std::size_t j = 0; j < n_controls; ++j) {
    ControlUnit c{j, std::vector<double>(p)};
    for (auto& v : c.predictors) v = standard_normal(gen);
    panel.controls.push_back(std::move(c));
    panel.control_names.push_back("control" + std::to_string(j));
  }
  std::vector<std::size_t> order(n_controls);
  for (std::size_t j = 0; j < n_controls; ++j) order[j] = j;
  const std::size_t active = std::min<std::size_t>(3, n_controls);
  for (std::size_t k = 0; k < active; ++k) {
    const std::size_t pick = k + static_cast<std::size_t>(uniform_below(gen, n_controls - k));
    std::swap(order[k], order[pick]);
  }
  // Flat Dirichlet weights from normalized exponentials.
  std::vector<double> w(active);
  double total = 0.0;
  for (auto& v : w) {
    v = -std::log(1.0 - uniform_unit(gen));
    total += v;
  }
  out.true_weights.assign(n_controls, 0.0);
  for (std::size_t k = 0; k < active; ++k) out.true_weights[order[k]] = w[k] / total;
  panel.treated.assign(p, 0.0);
  for (std::size_t j = 0; j < n_controls; ++j) {
    for (std::size_t k = 0; k < p; ++k) panel.treated[k] += out.true_weights[j] * panel.controls[j].predictors[k];
  }
  for (auto& v : panel.treated) v += noise_sd * standard_normal(gen);
  return out;
}

}  // namespace bagstab
