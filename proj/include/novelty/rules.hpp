#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "novelty/partition.hpp"

namespace novelty {

/// Raised on invalid rule parameters or malformed rule literals.
class RuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-parameter rule: discount alpha in [0,1), concentration theta > -alpha.
struct TwoParameter {
  double alpha;
  double theta;
};

/// One-parameter rule, theta > 0. Novelty probability depends on the
/// sampling time only.
struct Ewens {
  double theta;
};

/// The oldest prediction rule for novelty; identical to Ewens(1).
struct DeMorgan {};

/// Non-exchangeable rule with parameters lambda, delta > 0. The novelty
/// probability grows with the number of known objects.
struct Kuipers {
  double lambda;
  double delta;
};

using PredictionRule = std::variant<TwoParameter, Ewens, DeMorgan, Kuipers>;

/// Throws RuleError naming the violated bound.
void validate(const PredictionRule& rule);

/// Parses "two-param:alpha=0.5,theta=1", "ewens:theta=2", "demorgan",
/// "kuipers:lambda=2,delta=2". The result is validated.
PredictionRule parse_rule(const std::string& literal);

std::string to_literal(const PredictionRule& rule);

/**
 * Distribution over the next draw given a partition: one entry per known
 * block (in order of appearance) plus the probability of a never-seen
 * object. Entries are nonnegative and sum to one.
 */
template <class S>
struct NextDrawDistribution {
  std::vector<S> known;  // known[j-1] repeats the j-th known object
  S novelty;
};

using PredictiveDistribution = NextDrawDistribution<double>;

/// Predictive probabilities of the rule at partition p. T = 0 (the empty
/// history) returns novelty = 1 for every rule. Instantiated for double
/// and for exact Rational evaluation.
template <class S>
NextDrawDistribution<S> predictive_as(const PredictionRule& rule, const Partition& p);

PredictiveDistribution predictive(const PredictionRule& rule, const Partition& p);

/// Anything that maps a partition to a next-draw distribution. The chain
/// rule, the checkers and the samplers run on this interface so that
/// user-supplied rules (e.g. tabulated ones) can be analyzed alongside the
/// built-in families.
using PredictiveFn = std::function<PredictiveDistribution(const Partition&)>;

PredictiveFn as_predictive_fn(const PredictionRule& rule);

/// Builds a rule from JSON text mapping RGS strings to probability arrays
/// [p_1..p_k, novelty]; "" keys the empty history. Queries outside the
/// table throw RuleError.
PredictiveFn tabulated_rule_from_json(const std::string& json_text);

}  // namespace novelty
