#include <doctest.h>

#include <cmath>
#include <map>

#include "novelty/rational.hpp"
#include "novelty/rules.hpp"
#include "oracles.hpp"

using namespace novelty;

namespace {

// Grid shared by the exhaustive property checks below.
std::vector<PredictionRule> rule_grid() {
  std::vector<PredictionRule> rules;
  for (double alpha : {0.0, 0.3, 0.7}) {
    for (double theta : {0.5, 1.0, 3.0}) {
      rules.push_back(TwoParameter{alpha, theta});
    }
  }
  for (double theta : {0.5, 1.0, 3.0}) rules.push_back(Ewens{theta});
  rules.push_back(DeMorgan{});
  rules.push_back(Kuipers{2.0, 2.0});
  rules.push_back(Kuipers{3.0, 1.0});
  return rules;
}

}  // namespace

TEST_CASE("validate enforces the parameter ranges") {
  CHECK_NOTHROW(validate(TwoParameter{0.5, 1.0}));
  CHECK_NOTHROW(validate(TwoParameter{0.0, 0.5}));
  CHECK_NOTHROW(validate(TwoParameter{0.5, -0.4}));  // theta > -alpha
  CHECK_THROWS_WITH_AS(validate(TwoParameter{1.0, 1.0}),
                       doctest::Contains("[0, 1)"), RuleError);
  CHECK_THROWS_WITH_AS(validate(TwoParameter{0.5, -0.5}),
                       doctest::Contains("-alpha"), RuleError);
  CHECK_THROWS_AS(validate(TwoParameter{-0.1, 1.0}), RuleError);
  CHECK_THROWS_AS(validate(Ewens{0.0}), RuleError);
  CHECK_THROWS_AS(validate(Ewens{-1.0}), RuleError);
  CHECK_NOTHROW(validate(DeMorgan{}));
  CHECK_THROWS_AS(validate(Kuipers{0.0, 2.0}), RuleError);
  CHECK_THROWS_AS(validate(Kuipers{2.0, 0.0}), RuleError);
  const double nan = std::nan("");
  CHECK_THROWS_AS(validate(TwoParameter{nan, 1.0}), RuleError);
  CHECK_THROWS_AS(validate(Ewens{nan}), RuleError);
}

TEST_CASE("rule literals parse and round-trip") {
  CHECK(std::get<TwoParameter>(parse_rule("two-param:alpha=0.5,theta=1")).alpha ==
        0.5);
  CHECK(std::get<Ewens>(parse_rule("ewens:theta=2")).theta == 2.0);
  CHECK(std::holds_alternative<DeMorgan>(parse_rule("demorgan")));
  const auto kuipers = std::get<Kuipers>(parse_rule("kuipers:lambda=2,delta=2"));
  CHECK(kuipers.lambda == 2.0);
  CHECK(kuipers.delta == 2.0);
  for (const PredictionRule& rule : rule_grid()) {
    const PredictionRule reparsed = parse_rule(to_literal(rule));
    CHECK(to_literal(reparsed) == to_literal(rule));
  }
  CHECK_THROWS_AS(parse_rule("zipf:s=1"), RuleError);
  CHECK_THROWS_AS(parse_rule("ewens"), RuleError);
  CHECK_THROWS_AS(parse_rule("ewens:theta=zzz"), RuleError);
  CHECK_THROWS_AS(parse_rule("ewens:theta=1,theta=2"), RuleError);
  CHECK_THROWS_AS(parse_rule("ewens:theta=1,gamma=2"), RuleError);
  CHECK_THROWS_AS(parse_rule("demorgan:x=1"), RuleError);
  CHECK_THROWS_AS(parse_rule("two-param:alpha=1.5,theta=1"), RuleError);
}

TEST_CASE("predictive values match the closed forms") {
  // De Morgan at {{1}}: both the repeat and the novelty get 1/(T+1) = 1/2.
  const PredictiveDistribution dm = predictive(DeMorgan{}, Partition::parse("1"));
  CHECK(dm.known.size() == 1);
  CHECK(dm.known[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(dm.novelty == doctest::Approx(0.5).epsilon(1e-15));

  // Two-parameter at {{1},{2,3}}: ((1-a)/(3+t), (2-a)/(3+t)), novelty
  // (2a+t)/(3+t).
  const Partition p = Partition::parse("{1}{2,3}");
  for (double alpha : {0.0, 0.25, 0.5, 0.9}) {
    for (double theta : {-0.1, 0.5, 1.0, 4.0}) {
      if (!(theta > -alpha)) continue;
      const PredictiveDistribution d = predictive(TwoParameter{alpha, theta}, p);
      CHECK(d.known[0] == doctest::Approx((1 - alpha) / (3 + theta)).epsilon(1e-14));
      CHECK(d.known[1] == doctest::Approx((2 - alpha) / (3 + theta)).epsilon(1e-14));
      CHECK(d.novelty ==
            doctest::Approx((2 * alpha + theta) / (3 + theta)).epsilon(1e-14));
    }
  }

  // Kuipers(2,2) at {{1},{2}}: novelty 3/4 and 1/8 per known object.
  const PredictiveDistribution kp =
      predictive(Kuipers{2.0, 2.0}, Partition::parse("1,2"));
  CHECK(kp.novelty == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(kp.known[0] == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(kp.known[1] == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("every rule returns novelty = 1 on the empty history") {
  const Partition empty;
  for (const PredictionRule& rule : rule_grid()) {
    const PredictiveDistribution d = predictive(rule, empty);
    CHECK(d.known.empty());
    CHECK(d.novelty == 1.0);
  }
  // Including theta = 0, where the raw formula would be 0/0.
  const PredictiveDistribution d = predictive(TwoParameter{0.5, 0.0}, empty);
  CHECK(d.novelty == 1.0);
}

TEST_CASE("predictive entries are nonnegative and sum to 1, exhaustive T<=8") {
  for (const PredictionRule& rule : rule_grid()) {
    for (int T = 0; T <= 8; ++T) {
      for (const Partition& p : enumerate_partitions(T)) {
        const PredictiveDistribution d = predictive(rule, p);
        double total = d.novelty;
        CHECK(d.novelty >= 0.0);
        for (double prob : d.known) {
          CHECK(prob >= 0.0);
          total += prob;
        }
        CHECK(std::abs(total - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("two-parameter masses depend only on the paper's statistics") {
  // Known mass is a function of (block size, T); novelty of (block count, T).
  const PredictionRule rule = TwoParameter{0.5, 1.0};
  const PredictiveFn fn = as_predictive_fn(rule);
  for (int T = 1; T <= 8; ++T) {
    std::map<int, double> known_by_size;
    std::map<int, double> novelty_by_blocks;
    for (const Partition& p : enumerate_partitions(T)) {
      const PredictiveDistribution d = fn(p);
      for (int j = 1; j <= p.num_blocks(); ++j) {
        auto [it, inserted] = known_by_size.emplace(p.block_size(j), d.known[j - 1]);
        if (!inserted) CHECK(d.known[j - 1] == doctest::Approx(it->second).epsilon(1e-15));
      }
      auto [it, inserted] = novelty_by_blocks.emplace(p.num_blocks(), d.novelty);
      if (!inserted) CHECK(d.novelty == doctest::Approx(it->second).epsilon(1e-15));
    }
  }
}

TEST_CASE("Ewens novelty mass depends on sampling time alone") {
  for (double theta : {0.5, 2.0}) {
    for (int T = 1; T <= 8; ++T) {
      double first = -1.0;
      for (const Partition& p : enumerate_partitions(T)) {
        const double novelty = predictive(Ewens{theta}, p).novelty;
        if (first < 0) {
          first = novelty;
          CHECK(first == doctest::Approx(theta / (T + theta)).epsilon(1e-15));
        } else {
          CHECK(novelty == first);
        }
      }
    }
  }
}

TEST_CASE("De Morgan is bitwise Ewens(1); two-param degenerates to Ewens") {
  for (int T = 0; T <= 6; ++T) {
    for (const Partition& p : enumerate_partitions(T)) {
      const PredictiveDistribution dm = predictive(DeMorgan{}, p);
      const PredictiveDistribution ew = predictive(Ewens{1.0}, p);
      CHECK(dm.novelty == ew.novelty);
      CHECK(dm.known == ew.known);

      for (double theta : {0.5, 1.0, 3.0}) {
        const PredictiveDistribution tp = predictive(TwoParameter{0.0, theta}, p);
        const PredictiveDistribution ref = predictive(Ewens{theta}, p);
        CHECK(std::abs(tp.novelty - ref.novelty) <= 1e-15);
        for (std::size_t j = 0; j < ref.known.size(); ++j) {
          CHECK(std::abs(tp.known[j] - ref.known[j]) <= 1e-15);
        }
      }
    }
  }
}

TEST_CASE("Kuipers ties known mass to the block count, not just block size") {
  // Same T, same block size, different block counts: the lambda/k tilt
  // shifts the mass.
  const PredictionRule rule = Kuipers{2.0, 2.0};
  const double two_blocks =
      predictive(rule, Partition::parse("{1,2}{3,4}")).known[0];
  const double three_blocks =
      predictive(rule, Partition::parse("{1,2}{3}{4}")).known[0];
  CHECK(two_blocks == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(three_blocks == doctest::Approx(4.0 / 27.0).epsilon(1e-15));
  CHECK(std::abs(two_blocks - three_blocks) > 1e-3);
}

TEST_CASE("rational evaluation is exact") {
  const Partition p = Partition::parse("{1}{2,3}");
  const auto d = predictive_as<Rational>(PredictionRule(TwoParameter{0.5, 1.0}), p);
  CHECK(d.known[0] == Rational(1) / 8);
  CHECK(d.known[1] == Rational(3) / 8);
  CHECK(d.novelty == Rational(1) / 2);
  Rational total = d.novelty;
  for (const Rational& prob : d.known) total += prob;
  CHECK(total == Rational(1));

  // Dyadic conversion is exact even for values that are not "nice".
  CHECK(to_rational(0.1) != Rational(1) / 10);
  CHECK(to_rational(0.25) == Rational(1) / 4);
}

TEST_CASE("tabulated rules answer from the table and reject bad tables") {
  const std::string table = R"({
    "": [1.0],
    "1": [0.5, 0.5],
    "1,1": [0.7, 0.3],
    "1,2": [0.2, 0.3, 0.5]
  })";
  const PredictiveFn fn = tabulated_rule_from_json(table);
  CHECK(fn(Partition()).novelty == 1.0);
  CHECK(fn(Partition::parse("1")).known[0] == 0.5);
  CHECK(fn(Partition::parse("1,2")).known[1] == 0.3);
  CHECK_THROWS_AS(fn(Partition::parse("1,1,1")), RuleError);
  CHECK_THROWS_AS(tabulated_rule_from_json("[1,2]"), RuleError);
  CHECK_THROWS_AS(tabulated_rule_from_json("{\"1\": [0.5]}"), RuleError);
  CHECK_THROWS_AS(tabulated_rule_from_json("{\"1\": [0.5, 0.6]}"), RuleError);
  CHECK_THROWS_AS(tabulated_rule_from_json("not json"), RuleError);
}
