#include <doctest.h>

#include <cmath>
#include <sstream>

#include "novelty/elicitation.hpp"
#include "novelty/measures.hpp"
#include "novelty/rational.hpp"
#include "novelty/urn.hpp"

using namespace novelty;

namespace {

ElicitationObservation two_param_obs(double z, double k) {
  ElicitationObservation obs;
  obs.protocol = Protocol::TwoParameter;
  obs.z = z;
  obs.k = k;
  return obs;
}

ElicitationObservation ewens_obs(double z) {
  ElicitationObservation obs;
  obs.protocol = Protocol::Ewens;
  obs.z = z;
  return obs;
}

}  // namespace

TEST_CASE("two-parameter identification from certainty equivalents") {
  const UtilitySpec u = UtilitySpec::linear();

  // z = k = 1/4 is De Morgan: alpha = 0, theta = 1, exactly.
  const ElicitedTwoParameter demorgan =
      elicit_two_parameter(u, two_param_obs(0.25, 0.25));
  CHECK(demorgan.alpha == 0.0);
  CHECK(demorgan.theta == 1.0);
  CHECK_FALSE(demorgan.warning.has_value());

  // (z, k) = (0.5, 0.125) identifies (0.5, 1), exactly.
  const ElicitedTwoParameter half = elicit_two_parameter(u, two_param_obs(0.5, 0.125));
  CHECK(half.alpha == 0.5);
  CHECK(half.theta == 1.0);
  CHECK_FALSE(half.warning.has_value());

  // z = k = 1/3 collapses the denominator 2u(k)+u(z)-u(1).
  CHECK_THROWS_AS(elicit_two_parameter(u, two_param_obs(1.0 / 3, 1.0 / 3)),
                  std::invalid_argument);

  // Missing k or the wrong protocol are usage errors.
  ElicitationObservation no_k;
  no_k.protocol = Protocol::TwoParameter;
  no_k.z = 0.3;
  CHECK_THROWS_AS(elicit_two_parameter(u, no_k), std::invalid_argument);
  CHECK_THROWS_AS(elicit_two_parameter(u, ewens_obs(0.3)), std::invalid_argument);

  // Inconsistent observations come back with a warning, not a rejection.
  const ElicitedTwoParameter weird = elicit_two_parameter(u, two_param_obs(0.9, 0.4));
  CHECK(weird.warning.has_value());
}

TEST_CASE("Ewens identification from the single novelty bet") {
  const UtilitySpec u = UtilitySpec::linear();
  CHECK(elicit_ewens(u, ewens_obs(2.0 / 3)).theta == doctest::Approx(2.0).epsilon(1e-12));
  const ElicitedTheta demorgan = elicit_ewens(u, ewens_obs(0.5));
  CHECK(demorgan.theta == 1.0);
  CHECK_FALSE(demorgan.warning.has_value());
  CHECK_THROWS_AS(elicit_ewens(u, ewens_obs(1.0)), std::invalid_argument);
  CHECK(elicit_ewens(u, ewens_obs(1.5)).warning.has_value());
  CHECK_THROWS_AS(elicit_ewens(u, two_param_obs(0.25, 0.25)), std::invalid_argument);
}

TEST_CASE("certainty equivalents round-trip with elicitation, linear utility") {
  const UtilitySpec u = UtilitySpec::linear();
  for (double alpha : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double theta : {-alpha + 0.1, 0.5, 1.0, 2.0, 10.0}) {
      if (!(theta > -alpha)) continue;
      const ElicitationObservation obs =
          certainty_equivalents(PredictionRule(TwoParameter{alpha, theta}), u);
      const ElicitedTwoParameter fitted = elicit_two_parameter(u, obs);
      CHECK(std::abs(fitted.alpha - alpha) <= 1e-9);
      CHECK(std::abs(fitted.theta - theta) <= 1e-9);
      CHECK_FALSE(fitted.warning.has_value());
    }
  }
  for (double theta : {0.1, 1.0, 2.0, 10.0}) {
    const ElicitationObservation obs =
        certainty_equivalents(PredictionRule(Ewens{theta}), u);
    CHECK(obs.protocol == Protocol::Ewens);
    CHECK_FALSE(obs.k.has_value());
    CHECK(std::abs(elicit_ewens(u, obs).theta - theta) <= 1e-9);
  }
  // De Morgan prices the T=1 novelty bet at u(z)/u(1) = 1/2.
  const ElicitationObservation dm =
      certainty_equivalents(PredictionRule(DeMorgan{}), u);
  CHECK(dm.z == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(certainty_equivalents(PredictionRule(Kuipers{2.0, 2.0}), u),
                  RuleError);
}

TEST_CASE("nonlinear tabulated utility still round-trips") {
  // A concave-ish piecewise utility, deliberately not passing through 0 at
  // x = 0 before normalization.
  const UtilitySpec u = UtilitySpec::table({{-1.0, -1.3},
                                            {0.0, 0.2},
                                            {0.2, 0.55},
                                            {0.5, 0.95},
                                            {0.8, 1.25},
                                            {1.0, 1.4},
                                            {2.0, 1.8}});
  CHECK(u.value(0.0) == 0.0);
  CHECK(u.value(1.0) == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(u.inverse(u.value(0.35)) == doctest::Approx(0.35).epsilon(1e-12));

  for (double alpha : {0.0, 0.4}) {
    for (double theta : {0.5, 1.5}) {
      const PredictionRule rule = TwoParameter{alpha, theta};
      const ElicitationObservation obs = certainty_equivalents(rule, u);
      const ElicitedTwoParameter fitted = elicit_two_parameter(u, obs);
      CHECK(std::abs(fitted.alpha - alpha) <= 1e-9);
      CHECK(std::abs(fitted.theta - theta) <= 1e-9);
    }
  }
  const ElicitationObservation obs = certainty_equivalents(PredictionRule(Ewens{2.0}), u);
  CHECK(std::abs(elicit_ewens(u, obs).theta - 2.0) <= 1e-9);

  CHECK_THROWS_AS(u.value(3.0), std::out_of_range);
  CHECK_THROWS_AS(u.inverse(99.0), std::out_of_range);
  CHECK_THROWS_AS(UtilitySpec::table({{0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(UtilitySpec::table({{0.0, 0.0}, {1.0, -1.0}}),
                  std::invalid_argument);
}

TEST_CASE("utility tables load from CSV") {
  std::istringstream csv("x,u\n0,0\n0.5,0.7\n1,1\n");
  const UtilitySpec u = utility_from_csv(csv);
  CHECK(u.value(0.25) == doctest::Approx(0.35).epsilon(1e-12));
  std::istringstream bad("x,u\n0,0\nnope,1\n");
  CHECK_THROWS_AS(utility_from_csv(bad), std::invalid_argument);
}

TEST_CASE("risk-neutral indifference pairs") {
  const Partition p = Partition::parse("{1}{2,3}");
  const auto demorgan = risk_neutral_bets(PredictionRule(DeMorgan{}), p);
  REQUIRE(demorgan.size() == 3);
  CHECK(demorgan[0].object == 0);
  CHECK(demorgan[0].stake == 4.0);
  CHECK(demorgan[0].amount == 1.0);
  CHECK(demorgan[2].object == 2);
  CHECK(demorgan[2].stake == 4.0);
  CHECK(demorgan[2].amount == 2.0);

  const auto ewens = risk_neutral_bets(PredictionRule(Ewens{2.0}), Partition::parse("1"));
  CHECK(ewens[0].stake == 3.0);
  CHECK(ewens[0].amount == 2.0);

  const auto two_param =
      risk_neutral_bets(PredictionRule(TwoParameter{0.5, 1.0}), p);
  CHECK(two_param[0].stake == 4.0);
  CHECK(two_param[0].amount == 2.0);  // alpha*k + theta = 0.5*2 + 1
  CHECK(two_param[1].amount == 0.5);  // n_1 - alpha
  CHECK(two_param[2].amount == 1.5);  // n_2 - alpha

  CHECK_THROWS_AS(risk_neutral_bets(PredictionRule(Kuipers{2.0, 2.0}), p), RuleError);
}

TEST_CASE("stake times predictive probability is the amount, exactly") {
  // The identity behind the indifference pairs holds with equality in
  // exact rational arithmetic for every rule and partition.
  std::vector<PredictionRule> rules = {DeMorgan{}, Ewens{0.5}, Ewens{3.0},
                                       TwoParameter{0.3, 0.7},
                                       TwoParameter{0.5, 1.0}};
  for (const PredictionRule& rule : rules) {
    for (int T = 1; T <= 5; ++T) {
      for (const Partition& p : enumerate_partitions(T)) {
        const auto bets = risk_neutral_bets(rule, p);
        const auto dist = predictive_as<Rational>(rule, p);
        for (const IndifferenceBet& bet : bets) {
          const Rational stake = to_rational(bet.stake);
          const Rational amount = to_rational(bet.amount);
          const Rational prob =
              bet.object == 0 ? dist.novelty : dist.known[bet.object - 1];
          CHECK(stake * prob == amount);
        }
      }
    }
  }
}

TEST_CASE("MLE degenerate inputs") {
  CHECK_THROWS_AS(fit_mle({}, RuleFamily::TwoParameter), std::invalid_argument);

  // A single first draw carries no information: flat likelihood.
  const FitResult flat = fit_mle({Partition::parse("1")}, RuleFamily::TwoParameter);
  CHECK(flat.log_likelihood == 0.0);
  CHECK_FALSE(flat.converged);
  CHECK(flat.diagnostic.find("flat") != std::string::npos);

  // All-singleton data pushes theta to the boundary.
  std::vector<Partition> singletons(20, Partition::parse("1,2,3,4,5"));
  const FitResult boundary = fit_mle(singletons, RuleFamily::Ewens);
  CHECK(boundary.at_boundary);
  CHECK_FALSE(boundary.converged);
  CHECK(boundary.theta > 9000.0);
}

TEST_CASE("MLE recovers generating parameters from sampled partitions") {
  // Unit-scale version of the acceptance run: modest sample, loose bands.
  const PredictionRule truth = TwoParameter{0.5, 1.0};
  std::vector<Partition> data;
  for (int i = 0; i < 200; ++i) {
    data.push_back(sample_partition(truth, 60, mix_seed(777, i)));
  }
  const FitResult fit = fit_mle(data, RuleFamily::TwoParameter);
  CHECK(fit.converged);
  CHECK(fit.alpha > 0.3);
  CHECK(fit.alpha < 0.7);
  CHECK(fit.theta > 0.2);
  CHECK(fit.theta < 2.5);

  // The fitted point cannot be worse than the truth.
  double truth_ll = 0.0;
  for (const Partition& p : data) truth_ll += std::log(eppf_two_parameter(0.5, 1.0, p));
  CHECK(fit.log_likelihood >= truth_ll - 1e-9);

  double fit_ll = 0.0;
  for (const Partition& p : data) {
    fit_ll += std::log(eppf_two_parameter(fit.alpha, fit.theta, p));
  }
  CHECK(fit.log_likelihood == doctest::Approx(fit_ll).epsilon(1e-9));

  std::vector<Partition> ewens_data;
  for (int i = 0; i < 200; ++i) {
    ewens_data.push_back(sample_partition(PredictionRule(Ewens{1.0}), 60, mix_seed(888, i)));
  }
  const FitResult ewens_fit = fit_mle(ewens_data, RuleFamily::Ewens);
  CHECK(ewens_fit.converged);
  CHECK(ewens_fit.alpha == 0.0);
  CHECK(ewens_fit.theta > 0.5);
  CHECK(ewens_fit.theta < 2.0);
}

TEST_CASE("observation files parse with comments") {
  std::istringstream in(
      "# sampled partitions\n"
      "1,1,2\n"
      "\n"
      "1,2,2   # trailing comment\n");
  const auto observations = read_observations(in);
  REQUIRE(observations.size() == 2);
  CHECK(observations[0] == Partition::parse("1,1,2"));
  CHECK(observations[1] == Partition::parse("1,2,2"));

  std::istringstream bad("1,1\n2,1\n");
  CHECK_THROWS_WITH_AS(read_observations(bad), doctest::Contains("line 2"),
                       PartitionError);
}
