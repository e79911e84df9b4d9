#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "novelty/partition.hpp"
#include "novelty/rational.hpp"
#include "novelty/rules.hpp"

namespace novelty {

/// Factorial power of x with increment y: prod_{i=0}^{t-1} (x + i*y).
/// The empty product (t = 0) is 1.
double rising_factorial(double x, int t, double y);

template <class S>
S rising_factorial_as(const S& x, int t, const S& y) {
  S result(1);
  S term = x;
  for (int i = 0; i < t; ++i) {
    result *= term;
    term += y;
  }
  return result;
}

/// Exchangeable partition probability function of the two-parameter family:
/// (theta+alpha)_{k-1^alpha} / (theta+1)_{T-1^1} * prod_j (1-alpha)_{n_j-1^1}.
template <class S>
S eppf_two_parameter_as(double alpha, double theta, const Partition& p);
double eppf_two_parameter(double alpha, double theta, const Partition& p);

/// Ewens sampling formula: theta^k / (theta)_{T^1} * prod_j (n_j - 1)!.
template <class S>
S eppf_ewens_as(double theta, const Partition& p);
double eppf_ewens(double theta, const Partition& p);

/// Probability of reaching p by multiplying one-step predictive
/// probabilities from the empty history; defined for any rule.
double chain_weight(const PredictiveFn& rule, const Partition& p);
template <class S>
S chain_weight_as(const PredictionRule& rule, const Partition& p);

/**
 * Exact probability assignment over all partitions of {1..T}, stored in
 * lexicographic RGS order. Rows are kept flat so that T near the
 * enumeration cap stays affordable.
 */
class PartitionMeasure {
 public:
  explicit PartitionMeasure(int T) : T_(T) {}

  int T() const { return T_; }
  std::size_t size() const { return weights_.size(); }
  double weight_at(std::size_t i) const { return weights_[i]; }
  std::vector<int> rgs_at(std::size_t i) const;
  Partition partition_at(std::size_t i) const;

  /// Index of the entry with the given assignment, or -1 when absent.
  std::ptrdiff_t index_of(const std::vector<int>& rgs) const;
  double weight_of(const Partition& p) const;

  /// Sum of all weights, accumulated in lexicographic order.
  double total() const;

  void append(const std::vector<int>& rgs, double weight);

 private:
  int T_;
  std::vector<std::uint8_t> flat_;  // size() * T_ labels
  std::vector<double> weights_;
};

/// Distribution over partitions of {1..T} induced by the rule via the
/// chain rule over the extension tree.
PartitionMeasure induced_measure(const PredictiveFn& rule, int T,
                                 int cap = kDefaultEnumerationCap);
PartitionMeasure induced_measure(const PredictionRule& rule, int T,
                                 int cap = kDefaultEnumerationCap);

/// Generalized Stirling number S_alpha(T, k) by the triangular recurrence
/// S_alpha(T+1, k) = S_alpha(T, k-1) + (T - k*alpha) * S_alpha(T, k),
/// S_alpha(1, 1) = 1. Equals the sum over k-block partitions of {1..T} of
/// prod_j (1-alpha)_{n_j-1^1}.
double gen_stirling(double alpha, int T, int k);
template <class S>
S gen_stirling_as(double alpha, int T, int k);

/// Unsigned Stirling number of the first kind, exact integer arithmetic
/// (values overflow 64 bits past T of about 20).
BigInt stirling_first_kind(int T, int k);

/// Probability that exactly k novelties occur by sampling time T.
/// Supported for the exchangeable families only.
double prob_k_novelties(const PredictionRule& rule, int T, int k);

/// Expected number of novelties by sampling time T, closed form.
/// Supported for the exchangeable families only.
double expected_novelties(const PredictionRule& rule, int T);

/// CSV with columns rgs, num_blocks, partition_vector, prob.
std::string measure_to_csv(const PartitionMeasure& m);

}  // namespace novelty
