#include "novelty/urn.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "novelty/format.hpp"
#include "novelty/measures.hpp"
#include "novelty/rng.hpp"

namespace novelty {

namespace {

int draw_category(const PredictiveDistribution& dist, double u) {
  // Cumulative walk over known blocks then novelty; any residual mass
  // from rounding goes to the last category (novelty).
  double cum = 0.0;
  for (std::size_t j = 0; j < dist.known.size(); ++j) {
    cum += dist.known[j];
    if (u < cum) return static_cast<int>(j) + 1;
  }
  return static_cast<int>(dist.known.size()) + 1;
}

Partition sample_with(const PredictiveFn& rule, int T, Xoshiro256StarStar& rng) {
  Partition p;
  for (int t = 1; t <= T; ++t) {
    const PredictiveDistribution dist = rule(p);
    p = p.extended(draw_category(dist, rng.uniform01()));
  }
  return p;
}

}  // namespace

Partition sample_partition(const PredictiveFn& rule, int T, std::uint64_t seed) {
  if (T < 0) throw std::invalid_argument("sample_partition: T must be nonnegative");
  Xoshiro256StarStar rng(seed);
  return sample_with(rule, T, rng);
}

Partition sample_partition(const PredictionRule& rule, int T, std::uint64_t seed) {
  return sample_partition(as_predictive_fn(rule), T, seed);
}

SimulationReport simulate(const SimulationConfig& config) {
  if (config.replications < 1) {
    throw std::invalid_argument("simulate: replications must be at least 1");
  }
  if (config.T < 1) throw std::invalid_argument("simulate: T must be positive");
  if (config.compare_exact && config.T > config.cap) {
    throw CapError(config.T, config.cap);
  }
  const PredictiveFn fn = as_predictive_fn(config.rule);

  std::map<std::vector<int>, std::uint64_t> counts;
  std::map<int, std::uint64_t> histogram;
  std::uint64_t block_total = 0;
  for (std::uint64_t i = 0; i < config.replications; ++i) {
    Xoshiro256StarStar rng(mix_seed(config.base_seed, i));
    const Partition p = sample_with(fn, config.T, rng);
    ++counts[p.rgs()];
    ++histogram[p.num_blocks()];
    block_total += static_cast<std::uint64_t>(p.num_blocks());
  }

  SimulationReport report;
  report.T = config.T;
  report.replications = config.replications;
  report.has_exact = config.compare_exact;
  report.novelty_count_histogram = std::move(histogram);
  report.novelty_count_mean =
      static_cast<double>(block_total) / static_cast<double>(config.replications);

  const double reps = static_cast<double>(config.replications);
  if (config.compare_exact) {
    const PartitionMeasure exact = induced_measure(fn, config.T, config.cap);
    double max_dev = 0.0;
    double chi_square = 0.0;
    report.rows.reserve(exact.size());
    for (std::size_t i = 0; i < exact.size(); ++i) {
      SimulationRow row;
      row.rgs = exact.rgs_at(i);
      row.exact_prob = exact.weight_at(i);
      auto it = counts.find(row.rgs);
      row.count = it == counts.end() ? 0 : it->second;
      const double freq = static_cast<double>(row.count) / reps;
      max_dev = std::max(max_dev, std::abs(freq - row.exact_prob));
      const double expected = reps * row.exact_prob;
      if (expected > 0.0) {
        const double diff = static_cast<double>(row.count) - expected;
        chi_square += diff * diff / expected;
      }
      report.rows.push_back(std::move(row));
    }
    report.max_abs_deviation = max_dev;
    report.chi_square = chi_square;
  } else {
    // counts is already lex-ordered; emit observed partitions only.
    for (const auto& [rgs, count] : counts) {
      report.rows.push_back(SimulationRow{rgs, 0.0, count});
    }
    report.max_abs_deviation = std::numeric_limits<double>::quiet_NaN();
    report.chi_square = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::string report_to_csv(const SimulationReport& report) {
  std::ostringstream os;
  os << "rgs,exact_prob,empirical_freq,abs_dev\n";
  const double reps = static_cast<double>(report.replications);
  for (const SimulationRow& row : report.rows) {
    os << '"';
    for (std::size_t i = 0; i < row.rgs.size(); ++i) {
      if (i) os << ',';
      os << row.rgs[i];
    }
    os << "\",";
    const double freq = static_cast<double>(row.count) / reps;
    if (report.has_exact) {
      os << format_g12(row.exact_prob) << ',' << format_g12(freq) << ','
         << format_g12(std::abs(freq - row.exact_prob)) << '\n';
    } else {
      os << ',' << format_g12(freq) << ",\n";
    }
  }
  os << "\"summary\",";
  if (report.has_exact) {
    os << format_g12(report.max_abs_deviation);
  }
  os << ',' << format_g12(report.novelty_count_mean) << ',';
  if (report.has_exact) {
    os << format_g12(report.chi_square);
  }
  os << '\n';
  return os.str();
}

}  // namespace novelty
