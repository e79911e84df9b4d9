#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "novelty/partition.hpp"
#include "novelty/rules.hpp"

namespace novelty {

struct SimulationConfig {
  PredictionRule rule;
  int T = 1;
  std::uint64_t replications = 1;
  std::uint64_t base_seed = 0;
  bool compare_exact = true;  // empirical-only mode has no enumeration cap
  int cap = kDefaultEnumerationCap;
};

struct SimulationRow {
  std::vector<int> rgs;
  double exact_prob = 0.0;  // meaningful when the report has_exact
  std::uint64_t count = 0;
};

struct SimulationReport {
  int T = 0;
  std::uint64_t replications = 0;
  bool has_exact = false;
  std::vector<SimulationRow> rows;  // lexicographic RGS order
  double max_abs_deviation = 0.0;   // NaN without exact comparison
  double chi_square = 0.0;          // NaN without exact comparison
  double novelty_count_mean = 0.0;
  std::map<int, std::uint64_t> novelty_count_histogram;
};

/// One sequential draw of T steps: at each step the next-draw distribution
/// of the rule picks among extensions of the current partition.
/// Deterministic given the seed.
Partition sample_partition(const PredictionRule& rule, int T, std::uint64_t seed);
Partition sample_partition(const PredictiveFn& rule, int T, std::uint64_t seed);

/// Runs config.replications independent samples with per-replication seeds
/// mix_seed(base_seed, i). Aggregation is exact integer counting, so the
/// report is identical however the replications are scheduled.
SimulationReport simulate(const SimulationConfig& config);

/// CSV: one row per partition (rgs, exact_prob, empirical_freq, abs_dev)
/// plus a summary row.
std::string report_to_csv(const SimulationReport& report);

}  // namespace novelty
