#include <doctest.h>

#include <cmath>

#include "novelty/measures.hpp"
#include "novelty/rng.hpp"
#include "novelty/urn.hpp"

using namespace novelty;

TEST_CASE("splitmix and xoshiro are deterministic and platform independent") {
  // Published SplitMix64 reference vectors.
  SplitMix64 zero{0};
  CHECK(zero.next() == 0xe220a8397b1dcdafULL);
  CHECK(zero.next() == 0x6e789e6aa1b965f4ULL);
  SplitMix64 sm{1234567};
  CHECK(sm.next() == 6457827717110365317ULL);
  CHECK(sm.next() == 3203168211198807973ULL);

  CHECK(mix_seed(42, 0) == mix_seed(42, 0));
  CHECK(mix_seed(42, 0) != mix_seed(42, 1));
  CHECK(mix_seed(42, 7) != mix_seed(43, 7));

  Xoshiro256StarStar a(99);
  Xoshiro256StarStar b(99);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform01();
    CHECK(u == b.uniform01());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("the first draw is always novel") {
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
    const Partition p = sample_partition(PredictionRule(DeMorgan{}), 1, seed);
    CHECK(p == Partition::parse("1"));
  }
}

TEST_CASE("sampling is deterministic for a fixed seed") {
  const PredictionRule rule = TwoParameter{0.5, 1.0};
  const Partition first = sample_partition(rule, 5, 314159);
  for (int run = 0; run < 3; ++run) {
    CHECK(sample_partition(rule, 5, 314159) == first);
  }
  CHECK(sample_partition(rule, 5, 314160).T() == 5);
}

TEST_CASE("De Morgan at T=2 splits evenly in the limit") {
  SimulationConfig config;
  config.rule = DeMorgan{};
  config.T = 2;
  config.replications = 100000;
  config.base_seed = 7;
  const SimulationReport report = simulate(config);
  REQUIRE(report.rows.size() == 2);
  // Exact probabilities are 1/2 each; binomial 3 sigma is about 0.0047.
  CHECK(report.max_abs_deviation < 0.01);
}

TEST_CASE("simulate compares against the exact measure") {
  SimulationConfig config;
  config.rule = DeMorgan{};
  config.T = 4;
  config.replications = 200000;
  config.base_seed = 20240301;
  const SimulationReport report = simulate(config);
  REQUIRE(report.has_exact);
  REQUIRE(report.rows.size() == 15);

  std::uint64_t total = 0;
  double exact_total = 0.0;
  for (const SimulationRow& row : report.rows) {
    total += row.count;
    exact_total += row.exact_prob;
  }
  CHECK(total == config.replications);
  CHECK(exact_total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(report.max_abs_deviation < 0.01);
  // 14 degrees of freedom; anything far above ~50 would flag a broken
  // sampler or generator.
  CHECK(report.chi_square < 60.0);

  std::uint64_t histogram_total = 0;
  for (const auto& [k, count] : report.novelty_count_histogram) {
    histogram_total += count;
  }
  CHECK(histogram_total == config.replications);
}

TEST_CASE("identical configs give bitwise-identical reports") {
  SimulationConfig config;
  config.rule = Kuipers{2.0, 2.0};
  config.T = 3;
  config.replications = 5000;
  config.base_seed = 5150;
  const SimulationReport a = simulate(config);
  const SimulationReport b = simulate(config);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].count == b.rows[i].count);
  }
  CHECK(a.novelty_count_mean == b.novelty_count_mean);
  CHECK(a.chi_square == b.chi_square);
  CHECK(report_to_csv(a) == report_to_csv(b));
}

TEST_CASE("a single replication is a point mass") {
  SimulationConfig config;
  config.rule = Ewens{2.0};
  config.T = 5;
  config.replications = 1;
  config.base_seed = 11;
  const SimulationReport report = simulate(config);
  std::uint64_t nonzero_rows = 0;
  for (const SimulationRow& row : report.rows) {
    if (row.count > 0) {
      ++nonzero_rows;
      CHECK(row.count == 1);
    }
  }
  CHECK(nonzero_rows == 1);
}

TEST_CASE("novelty count mean approaches the expected block count") {
  SimulationConfig config;
  config.rule = Ewens{1.0};
  config.T = 3;
  config.replications = 100000;
  config.base_seed = 77;
  const SimulationReport report = simulate(config);
  // E = 11/6; the count's standard error at 1e5 replications is ~0.002.
  CHECK(std::abs(report.novelty_count_mean - 11.0 / 6.0) < 0.02);
}

TEST_CASE("empirical novelty counts track prob_k_novelties within 3 sigma") {
  SimulationConfig config;
  config.rule = TwoParameter{0.5, 1.0};
  config.T = 5;
  config.replications = 100000;
  config.base_seed = 123;
  const SimulationReport report = simulate(config);
  const double reps = static_cast<double>(config.replications);
  for (int k = 1; k <= config.T; ++k) {
    const double p = prob_k_novelties(config.rule, config.T, k);
    const double sigma = std::sqrt(p * (1 - p) / reps);
    auto it = report.novelty_count_histogram.find(k);
    const double freq =
        it == report.novelty_count_histogram.end() ? 0.0 : it->second / reps;
    CHECK(std::abs(freq - p) <= 3.5 * sigma + 1e-9);
  }
}

TEST_CASE("exact mode respects the cap, empirical-only mode lifts it") {
  SimulationConfig config;
  config.rule = DeMorgan{};
  config.T = 13;
  config.replications = 10;
  config.base_seed = 3;
  CHECK_THROWS_AS(simulate(config), CapError);
  config.compare_exact = false;
  const SimulationReport report = simulate(config);
  CHECK_FALSE(report.has_exact);
  CHECK(std::isnan(report.max_abs_deviation));
  std::uint64_t total = 0;
  for (const SimulationRow& row : report.rows) total += row.count;
  CHECK(total == 10);
}

TEST_CASE("CSV output has one row per partition plus a summary") {
  SimulationConfig config;
  config.rule = DeMorgan{};
  config.T = 2;
  config.replications = 4;
  config.base_seed = 5;
  const std::string csv = report_to_csv(simulate(config));
  CHECK(csv.find("rgs,exact_prob,empirical_freq,abs_dev\n") == 0);
  CHECK(csv.find("\"1,1\",0.5,") != std::string::npos);
  CHECK(csv.find("\"summary\",") != std::string::npos);
}
