#pragma once

#include <optional>
#include <string>
#include <vector>

#include "novelty/partition.hpp"
#include "novelty/rules.hpp"

namespace novelty {

enum class Property {
  PartitionExchangeability,
  MarginalConsistency,
  FreqDependenceKnown,
  FreqDependenceNovelty,
  SamplingTimeDependenceNovelty,
  ReverseBayes,
  PlainBayes,
  ExtendedBayes,
};

/// Stable kebab-case name used by the CLI and in serialized reports.
std::string property_name(Property p);
std::optional<Property> property_from_name(const std::string& name);
std::vector<Property> all_properties();

/// Counterexample carrying enough to re-evaluate both quoted quantities
/// from scratch: the partitions involved (RGS text grammar), the block
/// indices (1-based) where relevant, and the two values that should agree.
struct CheckWitness {
  std::vector<std::string> partitions;
  std::vector<int> indices;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

struct CheckReport {
  Property property;
  int t_max = 0;
  bool holds = true;
  double tolerance = 0.0;
  std::optional<CheckWitness> witness;
};

/// Absolute tolerance on the compared probabilities / cross-products; all
/// compared masses are bounded away from zero at checkable T.
inline constexpr double kCheckerTolerance = 1e-9;

/// Equal partition vectors must receive equal induced weight, and
/// same-size blocks must receive equal predictive mass (the conditional
/// analogue). Search order is lexicographic over (T, partition, index);
/// the first counterexample found is reported.
CheckReport check_exchangeability(const PredictiveFn& rule, int t_max,
                                  double tol = kCheckerTolerance,
                                  int cap = kDefaultEnumerationCap);

/// Induced weights of the one-step extensions must sum to the parent's
/// weight; holds for any rule whose predictive entries sum to one.
CheckReport check_marginal_consistency(const PredictiveFn& rule, int t_max,
                                       double tol = kCheckerTolerance,
                                       int cap = kDefaultEnumerationCap);

/// Known-object mass may depend only on (block size, T).
CheckReport check_freq_dependence_known(const PredictiveFn& rule, int t_max,
                                        double tol = kCheckerTolerance,
                                        int cap = kDefaultEnumerationCap);

/// Novelty mass may depend only on (number of blocks, T).
CheckReport check_freq_dependence_novelty(const PredictiveFn& rule, int t_max,
                                          double tol = kCheckerTolerance,
                                          int cap = kDefaultEnumerationCap);

/// Novelty mass may depend on T only.
CheckReport check_sampling_time_dependence(const PredictiveFn& rule, int t_max,
                                           double tol = kCheckerTolerance,
                                           int cap = kDefaultEnumerationCap);

struct FrequencyDependenceReports {
  CheckReport known;
  CheckReport novelty;
  CheckReport sampling_time;
};
FrequencyDependenceReports check_frequency_dependence(
    const PredictiveFn& rule, int t_max, double tol = kCheckerTolerance,
    int cap = kDefaultEnumerationCap);

/// Ratios of known-object probabilities must be unchanged by appending the
/// novelty extension. Comparisons are cross-multiplied to avoid dividing
/// by small masses.
CheckReport check_reverse_bayes(const PredictiveFn& rule, int t_max,
                                double tol = kCheckerTolerance,
                                int cap = kDefaultEnumerationCap);

/// Same ratio invariance upon sampling a third known object instead.
CheckReport check_plain_bayes(const PredictiveFn& rule, int t_max,
                              double tol = kCheckerTolerance,
                              int cap = kDefaultEnumerationCap);

/// Novelty-to-known ratio invariance upon sampling a different known object.
CheckReport check_extended_bayes(const PredictiveFn& rule, int t_max,
                                 double tol = kCheckerTolerance,
                                 int cap = kDefaultEnumerationCap);

CheckReport run_check(Property property, const PredictiveFn& rule, int t_max,
                      double tol = kCheckerTolerance,
                      int cap = kDefaultEnumerationCap);

}  // namespace novelty
