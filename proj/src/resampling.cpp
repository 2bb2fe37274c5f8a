#include "bagstab/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bagstab/error.hpp"
#include "bagstab/seeding.hpp"

namespace bagstab {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// Ordered bags encoded as base-n integers, listed in increasing code order.
struct SequenceLaw {
  std::vector<std::uint64_t> codes;
  std::vector<double> probs;

  double lookup(std::uint64_t code) const {
    auto it = std::lower_bound(codes.begin(), codes.end(), code);
    if (it == codes.end() || *it != code) return 0.0;
    return probs[static_cast<std::size_t>(it - codes.begin())];
  }
};

std::uint64_t encode(const Bag& bag, std::size_t base) {
  std::uint64_t code = 0;
  for (std::size_t i : bag) code = code * base + i;
  return code;
}

SequenceLaw sequence_law(const BagScheme& scheme) {
  SequenceLaw law;
  for_each_sequence(scheme, [&](const Bag& bag, double p) {
    law.codes.push_back(encode(bag, scheme.n()));
    law.probs.push_back(p);
  });
  return law;
}

}  // namespace

std::string_view to_string(SchemeKind kind) {
  return kind == SchemeKind::bootstrap ? "bootstrap" : "subbag";
}

SchemeKind parse_scheme_kind(std::string_view name) {
  if (name == "bootstrap") return SchemeKind::bootstrap;
  if (name == "subbag") return SchemeKind::subbag;
  throw ArgumentError("unknown scheme: " + std::string(name));
}

BagScheme::BagScheme(SchemeKind kind, std::size_t n, std::size_t m, Unchecked)
    : kind_(kind), n_(n), m_(m) {
  require(n_ >= 1, "BagScheme: n must be >= 1");
  require(m_ >= 1, "BagScheme: bag size m must be >= 1");
  if (kind_ == SchemeKind::subbag) require(m_ <= n_, "BagScheme: subbag needs m <= n");
}

BagScheme::BagScheme(SchemeKind kind, std::size_t n, std::size_t m)
    : BagScheme(kind, n, m, Unchecked{}) {
  if (kind_ == SchemeKind::subbag) {
    require(m_ <= n_ - 1, "BagScheme: subbag needs m <= n-1 so that inclusion probability < 1 (n=" +
                              std::to_string(n_) + ", m=" + std::to_string(m_) + ")");
  } else {
    require(n_ >= 2, "BagScheme: bootstrap on a single point includes it with probability 1");
  }
}

BagScheme BagScheme::leave_one_out() const {
  require(n_ >= 2, "BagScheme::leave_one_out: needs n >= 2");
  return BagScheme(kind_, n_ - 1, m_, Unchecked{});
}

double BagScheme::inclusion_probability() const {
  const double n = static_cast<double>(n_);
  const double m = static_cast<double>(m_);
  if (kind_ == SchemeKind::subbag) return m / n;
  // 1 - (1 - 1/n)^m, computed without cancellation.
  return -std::expm1(m * std::log1p(-1.0 / n));
}

double inclusion_probability(const BagScheme& scheme) { return scheme.inclusion_probability(); }

Bag sample_bag(const BagScheme& scheme, std::uint64_t seed) {
  SplitMix64 gen(seed);
  Bag bag(scheme.m());
  if (scheme.kind() == SchemeKind::bootstrap) {
    for (auto& i : bag) i = uniform_below(gen, scheme.n());
    return bag;
  }
  std::vector<std::size_t> pool(scheme.n());
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t k = 0; k < scheme.m(); ++k) {
    const std::size_t j = k + uniform_below(gen, scheme.n() - k);
    std::swap(pool[k], pool[j]);
    bag[k] = pool[k];
  }
  return bag;
}

std::uint64_t sequence_support_size(const BagScheme& scheme) {
  std::uint64_t count = 1;
  for (std::size_t k = 0; k < scheme.m(); ++k) {
    const std::size_t choices = scheme.kind() == SchemeKind::bootstrap ? scheme.n() : scheme.n() - k;
    count = saturating_mul(count, choices);
  }
  return count;
}

std::uint64_t collapsed_support_size(const BagScheme& scheme) {
  // C(top, m) with top = n or n+m-1, accumulated as exact integers.
  const std::uint64_t top =
      scheme.kind() == SchemeKind::subbag ? scheme.n() : scheme.n() + scheme.m() - 1;
  const std::uint64_t k = std::min<std::uint64_t>(scheme.m(), top - scheme.m());
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (top - k + i) / i;
    if (c > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(c);
}

void for_each_sequence(const BagScheme& scheme,
                       const std::function<void(const Bag&, double)>& visit) {
  const std::size_t n = scheme.n();
  const std::size_t m = scheme.m();
  const bool with_replacement = scheme.kind() == SchemeKind::bootstrap;
  Bag bag(m);
  std::vector<double> prob(m + 1, 1.0);
  std::vector<char> used(n, 0);

  std::function<void(std::size_t)> descend = [&](std::size_t depth) {
    if (depth == m) {
      visit(bag, prob[m]);
      return;
    }
    const double step = 1.0 / static_cast<double>(with_replacement ? n : n - depth);
    for (std::size_t i = 0; i < n; ++i) {
      if (!with_replacement && used[i]) continue;
      bag[depth] = i;
      prob[depth + 1] = prob[depth] * step;
      used[i] = 1;
      descend(depth + 1);
      used[i] = 0;
    }
  };
  descend(0);
}

CollapsedBagEnumerator::CollapsedBagEnumerator(const BagScheme& scheme)
    : scheme_(scheme), current_(scheme.m()) {
  if (scheme_.kind() == SchemeKind::subbag) {
    double c = 1.0;
    const std::size_t n = scheme_.n();
    const std::size_t m = scheme_.m();
    for (std::size_t i = 1; i <= m; ++i) c = c * static_cast<double>(n - m + i) / static_cast<double>(i);
    subset_probability_ = 1.0 / c;
  } else {
    log_factorial_.resize(scheme_.m() + 1, 0.0);
    for (std::size_t i = 1; i <= scheme_.m(); ++i) {
      log_factorial_[i] = log_factorial_[i - 1] + std::log(static_cast<double>(i));
    }
  }
}

bool CollapsedBagEnumerator::next(Bag& bag, double& probability) {
  if (done_) return false;
  const std::size_t n = scheme_.n();
  const std::size_t m = scheme_.m();
  const bool subsets = scheme_.kind() == SchemeKind::subbag;
  if (!started_) {
    started_ = true;
    for (std::size_t k = 0; k < m; ++k) current_[k] = subsets ? k : 0;
  } else {
    // Advance to the lexicographic successor.
    std::size_t k = m;
    while (k > 0) {
      --k;
      const std::size_t limit = subsets ? n - m + k : n - 1;
      if (current_[k] < limit) {
        ++current_[k];
        for (std::size_t j = k + 1; j < m; ++j) current_[j] = subsets ? current_[j - 1] + 1 : current_[k];
        break;
      }
      if (k == 0) {
        done_ = true;
        return false;
      }
    }
  }
  bag = current_;
  if (subsets) {
    probability = subset_probability_;
  } else {
    double log_weight = log_factorial_[m] - static_cast<double>(m) * std::log(static_cast<double>(n));
    std::size_t run = 1;
    for (std::size_t k = 1; k <= m; ++k) {
      if (k < m && current_[k] == current_[k - 1]) {
        ++run;
      } else {
        log_weight -= log_factorial_[run];
        run = 1;
      }
    }
    probability = std::exp(log_weight);
  }
  return true;
}

nlohmann::json to_json(const AssumptionReport& r) {
  return {{"symmetry_ok", r.symmetry_ok},
          {"nontrivial_ok", r.nontrivial_ok},
          {"covariance_ok", r.covariance_ok},
          {"loo_compat_ok", r.loo_compat_ok},
          {"inclusion_probability", r.inclusion_probability},
          {"max_covariance", r.max_covariance},
          {"min_covariance", r.min_covariance},
          {"symmetry_gap", r.symmetry_gap},
          {"loo_tv_gap", r.loo_tv_gap},
          {"support_size", r.support_size}};
}

AssumptionReport verify_assumption1(const BagScheme& scheme, std::uint64_t permutation_seed,
                                    std::uint64_t budget) {
  const std::uint64_t support = sequence_support_size(scheme);
  if (support > budget) {
    throw BudgetError("verify_assumption1: support of " + std::to_string(support) +
                      " bags exceeds budget " + std::to_string(budget));
  }
  const std::size_t n = scheme.n();
  const SequenceLaw law = sequence_law(scheme);

  AssumptionReport report;
  report.support_size = law.codes.size();

  // Inclusion moments.
  std::vector<long double> single(n, 0.0L);
  std::vector<long double> pair(n * n, 0.0L);
  std::vector<char> present(n);
  Bag bag(scheme.m());
  for (std::size_t s = 0; s < law.codes.size(); ++s) {
    std::uint64_t code = law.codes[s];
    std::fill(present.begin(), present.end(), 0);
    for (std::size_t k = scheme.m(); k-- > 0;) {
      bag[k] = code % n;
      code /= n;
      present[bag[k]] = 1;
    }
    const double p = law.probs[s];
    for (std::size_t i = 0; i < n; ++i) {
      if (!present[i]) continue;
      single[i] += p;
      for (std::size_t j = 0; j < n; ++j) {
        if (present[j]) pair[i * n + j] += p;
      }
    }
  }
  report.inclusion_probability =
      static_cast<double>(std::accumulate(single.begin(), single.end(), 0.0L) / static_cast<long double>(n));
  report.nontrivial_ok = report.inclusion_probability < 1.0 - AssumptionReport::kTolerance;

  report.max_covariance = -std::numeric_limits<double>::infinity();
  report.min_covariance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double cov = static_cast<double>(pair[i * n + j] - single[i] * single[j]);
      report.max_covariance = std::max(report.max_covariance, cov);
      report.min_covariance = std::min(report.min_covariance, cov);
    }
  }
  if (n < 2) report.max_covariance = report.min_covariance = 0.0;
  report.covariance_ok = report.max_covariance <= AssumptionReport::kTolerance;

  // Symmetry: Q(sigma(r)) = Q(r) over the whole support.
  SplitMix64 gen(permutation_seed);
  std::vector<std::size_t> sigma(n);
  Bag permuted(scheme.m());
  for (int trial = 0; trial < 20; ++trial) {
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    for (std::size_t k = n; k > 1; --k) std::swap(sigma[k - 1], sigma[uniform_below(gen, k)]);
    for (std::size_t s = 0; s < law.codes.size(); ++s) {
      std::uint64_t code = law.codes[s];
      for (std::size_t k = scheme.m(); k-- > 0;) {
        permuted[k] = sigma[code % n];
        code /= n;
      }
      report.symmetry_gap = std::max(report.symmetry_gap, std::abs(law.probs[s] - law.lookup(encode(permuted, n))));
    }
  }
  report.symmetry_ok = report.symmetry_gap <= AssumptionReport::kTolerance;

  // Leave-one-out compatibility: law of r | (n-1) not in r, re-encoded over
  // n-1 symbols, against the leave-one-out scheme.
  if (n >= 2) {
    const std::size_t last = n - 1;
    SequenceLaw conditional;
    long double absent_mass = 0.0L;
    for (std::size_t s = 0; s < law.codes.size(); ++s) {
      std::uint64_t code = law.codes[s];
      bool contains_last = false;
      for (std::size_t k = scheme.m(); k-- > 0;) {
        bag[k] = code % n;
        code /= n;
        contains_last = contains_last || bag[k] == last;
      }
      if (contains_last) continue;
      conditional.codes.push_back(encode(bag, n - 1));
      conditional.probs.push_back(law.probs[s]);
      absent_mass += law.probs[s];
    }
    for (double& p : conditional.probs) p = static_cast<double>(p / absent_mass);

    const SequenceLaw reference = sequence_law(scheme.leave_one_out());
    long double tv = 0.0L;
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < conditional.codes.size() || b < reference.codes.size()) {
      if (b == reference.codes.size() || (a < conditional.codes.size() && conditional.codes[a] < reference.codes[b])) {
        tv += conditional.probs[a++];
      } else if (a == conditional.codes.size() || reference.codes[b] < conditional.codes[a]) {
        tv += reference.probs[b++];
      } else {
        tv += std::abs(conditional.probs[a++] - reference.probs[b++]);
      }
    }
    report.loo_tv_gap = static_cast<double>(0.5L * tv);
  }
  report.loo_compat_ok = report.loo_tv_gap <= AssumptionReport::kTolerance;
  return report;
}

}  // namespace bagstab
