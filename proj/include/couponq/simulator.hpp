#pragma once

// Direct Monte Carlo of test generation. Independent of every closed-form
// path: it only draws questions and tracks which have been seen.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "couponq/bank_spec.hpp"
#include "couponq/rng.hpp"

namespace couponq {

using Histogram = std::map<std::int64_t, std::uint64_t>;

struct SimulationConfig {
  BankSpec spec;
  std::int64_t reps = 1;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct SimulationResult {
  BankSpec spec{1, 1};
  std::int64_t reps = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double variance = 0.0;
  double std_error_mean = 0.0;
  double std_error_variance = 0.0;
  std::int64_t min = 0;
  std::int64_t max = 0;
  Histogram histogram;
  std::string generator_id;

  /// Fraction of replications with N_q <= n.
  double empirical_cdf(std::int64_t n) const {
    std::uint64_t below = 0;
    for (const auto& [value, count] : histogram) {
      if (value > n) break;
      below += count;
    }
    return static_cast<double>(below) / static_cast<double>(reps);
  }

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Generates tests until every question in every bank has appeared; returns
/// the index of the completing test.
template <typename Rng>
std::int64_t simulate_one(const BankSpec& spec, Rng& rng) {
  const int a = spec.a();
  if (a == 1) return 1;
  const auto q = static_cast<std::size_t>(spec.q());
  const std::uint64_t full = a == 64 ? ~0ULL : ((1ULL << a) - 1);
  std::vector<std::uint64_t> seen(q, 0);
  std::size_t remaining = q;
  std::int64_t tests = 0;
  while (remaining > 0) {
    ++tests;
    for (auto& bank : seen) {
      if (bank == full) continue;
      bank |= 1ULL << rng.below(static_cast<std::uint64_t>(a));
      if (bank == full) --remaining;
    }
  }
  return tests;
}

/// Summary statistics are computed from the merged integer histogram only, so
/// they cannot depend on how replications were split among workers.
inline SimulationResult summarize(const BankSpec& spec, std::uint64_t seed, const Histogram& hist) {
  SimulationResult r;
  r.spec = spec;
  r.seed = seed;
  r.histogram = hist;
  r.generator_id = Xoshiro256StarStar::kGeneratorId;
  std::uint64_t n = 0;
  long double sum = 0.0L;
  for (const auto& [value, count] : hist) {
    n += count;
    sum += static_cast<long double>(value) * static_cast<long double>(count);
  }
  r.reps = static_cast<std::int64_t>(n);
  if (n == 0) return r;
  r.min = hist.begin()->first;
  r.max = hist.rbegin()->first;
  const long double mean = sum / static_cast<long double>(n);
  long double m2 = 0.0L;
  long double m4 = 0.0L;
  for (const auto& [value, count] : hist) {
    const long double d = static_cast<long double>(value) - mean;
    m2 += d * d * static_cast<long double>(count);
    m4 += d * d * d * d * static_cast<long double>(count);
  }
  const auto nd = static_cast<long double>(n);
  r.mean = static_cast<double>(mean);
  r.variance = n > 1 ? static_cast<double>(m2 / (nd - 1.0L)) : 0.0;
  r.std_error_mean = std::sqrt(r.variance / static_cast<double>(nd));
  // Large-sample standard error of the sample variance: sqrt((mu4 - sigma^4) / n).
  const long double mu2 = m2 / nd;
  const long double mu4 = m4 / nd;
  r.std_error_variance = static_cast<double>(std::sqrt(std::max(0.0L, mu4 - mu2 * mu2) / nd));
  return r;
}

/// Replication i always uses stream (seed, i); workers take contiguous blocks.
inline SimulationResult run_experiment(const SimulationConfig& config) {
  if (config.reps < 1) throw Error(ErrorKind::invalid_spec, "reps must be >= 1");
  if (config.workers < 1) throw Error(ErrorKind::invalid_spec, "workers must be >= 1");

  const auto workers = static_cast<std::int64_t>(
      std::min<std::int64_t>(config.workers, config.reps));
  std::vector<Histogram> partial(static_cast<std::size_t>(workers));
  auto run_block = [&](std::int64_t w) {
    const std::int64_t begin = config.reps * w / workers;
    const std::int64_t end = config.reps * (w + 1) / workers;
    Histogram& h = partial[static_cast<std::size_t>(w)];
    for (std::int64_t i = begin; i < end; ++i) {
      auto rng = Xoshiro256StarStar::for_stream(config.seed, static_cast<std::uint64_t>(i));
      ++h[simulate_one(config.spec, rng)];
    }
  };

  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
  }

  Histogram merged;
  for (const auto& h : partial)
    for (const auto& [value, count] : h) merged[value] += count;
  return summarize(config.spec, config.seed, merged);
}

}  // namespace couponq
