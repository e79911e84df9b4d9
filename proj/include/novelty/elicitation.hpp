#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "novelty/partition.hpp"
#include "novelty/rules.hpp"

namespace novelty {

/**
 * Utility function for evaluating certainty equivalents: either linear
 * (risk neutral) or a piecewise-linear table. Normalized so that u(0) = 0;
 * table queries between knots interpolate linearly.
 */
class UtilitySpec {
 public:
  static UtilitySpec linear();

  /// Knots must be strictly increasing in both coordinates and bracket the
  /// points the caller will query (0 and 1 included).
  static UtilitySpec table(std::vector<std::pair<double, double>> knots);

  double value(double x) const;
  double inverse(double u) const;  // throws when u is outside the table range
  bool is_linear() const { return knots_.empty(); }

 private:
  UtilitySpec() = default;
  std::vector<std::pair<double, double>> knots_;  // empty means linear
};

/// Reads a utility table from CSV with columns x,u (header optional).
UtilitySpec utility_from_csv(std::istream& in);

enum class Protocol { TwoParameter, Ewens };

/// Certainty equivalents observed from choices: z prices the novelty bet,
/// k (two-parameter protocol only) prices the repeat-of-object-1 bet.
struct ElicitationObservation {
  Protocol protocol = Protocol::TwoParameter;
  double z = 0.0;
  std::optional<double> k;
};

struct ElicitedTwoParameter {
  double alpha = 0.0;
  double theta = 0.0;
  std::optional<std::string> warning;  // set when outside the theorem's ranges
};

struct ElicitedTheta {
  double theta = 0.0;
  std::optional<std::string> warning;
};

/// Identifies (alpha, theta) from the two certainty equivalents observed at
/// partition {{1},{2,3}}:
///   alpha = (3u(k) + u(z) - u(1)) / (2u(k) + u(z) - u(1))
///   theta = (2u(1) - 6u(k) - 3u(z)) / (2u(k) + u(z) - u(1)).
/// Out-of-range results carry a warning instead of being rejected; a zero
/// denominator is an error.
ElicitedTwoParameter elicit_two_parameter(const UtilitySpec& u,
                                          const ElicitationObservation& obs);

/// Identifies theta = u(z) / (u(1) - u(z)) from the novelty bet at {{1}}.
ElicitedTheta elicit_ewens(const UtilitySpec& u, const ElicitationObservation& obs);

/// Forward map: the certainty equivalents a decision maker following the
/// rule would state; round-trips with the elicit operations.
ElicitationObservation certainty_equivalents(const PredictionRule& rule,
                                             const UtilitySpec& u);

/// Risk-neutral indifference pair: a bet staking `stake` on the event pays
/// the same as receiving `amount` for sure. object = 0 marks the novelty
/// bet, otherwise the 1-based known-object index.
struct IndifferenceBet {
  int object = 0;
  double stake = 0.0;
  double amount = 0.0;
};

/// The indifference pairs implied by the rule at partition p under linear
/// utility: stake T+theta against alpha*k+theta (novelty) and against
/// n_j-alpha (known object j); Ewens and De Morgan specialize accordingly.
/// Unsupported for Kuipers.
std::vector<IndifferenceBet> risk_neutral_bets(const PredictionRule& rule,
                                               const Partition& p);

enum class RuleFamily { TwoParameter, Ewens };

struct FitResult {
  double alpha = 0.0;
  double theta = 0.0;
  double log_likelihood = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
  bool at_boundary = false;
  std::string diagnostic;
};

/// Maximum-likelihood fit over the family's valid parameter region using
/// the partition probabilities as likelihood. Two stages: a coarse grid
/// (alpha step 0.01 in [0, 0.99], theta log-spaced up to 1e4 above the
/// lower bound) then per-coordinate golden-section refinement until the
/// parameter movement drops below 1e-6.
FitResult fit_mle(const std::vector<Partition>& observations, RuleFamily family);

/// One partition per line in RGS form; '#' starts a comment.
std::vector<Partition> read_observations(std::istream& in);

}  // namespace novelty
