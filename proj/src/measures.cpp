#include "novelty/measures.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "novelty/format.hpp"

namespace novelty {

double rising_factorial(double x, int t, double y) {
  if (t < 0) throw std::invalid_argument("rising_factorial: negative length");
  return rising_factorial_as<double>(x, t, y);
}

namespace {

void check_two_parameter(double alpha, double theta) {
  validate(PredictionRule(TwoParameter{alpha, theta}));
}

template <class S>
S factorial_as(int n) {
  S result(1);
  for (int i = 2; i <= n; ++i) result *= S(i);
  return result;
}

}  // namespace

template <class S>
S eppf_two_parameter_as(double alpha, double theta, const Partition& p) {
  check_two_parameter(alpha, theta);
  const S a = scalar_from_double<S>(alpha);
  const S th = scalar_from_double<S>(theta);
  const int k = p.num_blocks();
  const int T = p.T();
  S result = rising_factorial_as<S>(th + a, k - 1, a);
  result /= rising_factorial_as<S>(th + S(1), T - 1, S(1));
  for (int size : p.block_sizes()) {
    result *= rising_factorial_as<S>(S(1) - a, size - 1, S(1));
  }
  return result;
}

template double eppf_two_parameter_as<double>(double, double, const Partition&);
template Rational eppf_two_parameter_as<Rational>(double, double, const Partition&);

double eppf_two_parameter(double alpha, double theta, const Partition& p) {
  return eppf_two_parameter_as<double>(alpha, theta, p);
}

template <class S>
S eppf_ewens_as(double theta, const Partition& p) {
  validate(PredictionRule(Ewens{theta}));
  const S th = scalar_from_double<S>(theta);
  S result(1);
  for (int j = 0; j < p.num_blocks(); ++j) result *= th;
  result /= rising_factorial_as<S>(th, p.T(), S(1));
  for (int size : p.block_sizes()) result *= factorial_as<S>(size - 1);
  return result;
}

template double eppf_ewens_as<double>(double, const Partition&);
template Rational eppf_ewens_as<Rational>(double, const Partition&);

double eppf_ewens(double theta, const Partition& p) {
  return eppf_ewens_as<double>(theta, p);
}

double chain_weight(const PredictiveFn& rule, const Partition& p) {
  double weight = 1.0;
  Partition prefix;
  for (int t = 1; t <= p.T(); ++t) {
    const PredictiveDistribution dist = rule(prefix);
    const int label = p.rgs()[t - 1];
    weight *= label <= prefix.num_blocks() ? dist.known[label - 1] : dist.novelty;
    prefix = prefix.extended(label);
  }
  return weight;
}

template <class S>
S chain_weight_as(const PredictionRule& rule, const Partition& p) {
  S weight(1);
  Partition prefix;
  for (int t = 1; t <= p.T(); ++t) {
    const NextDrawDistribution<S> dist = predictive_as<S>(rule, prefix);
    const int label = p.rgs()[t - 1];
    weight *= label <= prefix.num_blocks() ? dist.known[label - 1] : dist.novelty;
    prefix = prefix.extended(label);
  }
  return weight;
}

template double chain_weight_as<double>(const PredictionRule&, const Partition&);
template Rational chain_weight_as<Rational>(const PredictionRule&, const Partition&);

std::vector<int> PartitionMeasure::rgs_at(std::size_t i) const {
  std::vector<int> rgs(T_);
  const std::uint8_t* row = flat_.data() + i * T_;
  for (int t = 0; t < T_; ++t) rgs[t] = row[t];
  return rgs;
}

Partition PartitionMeasure::partition_at(std::size_t i) const {
  return Partition::from_rgs(rgs_at(i));
}

std::ptrdiff_t PartitionMeasure::index_of(const std::vector<int>& rgs) const {
  if (static_cast<int>(rgs.size()) != T_) return -1;
  // Rows are lex-sorted by construction.
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    const std::uint8_t* row = flat_.data() + mid * T_;
    int cmp = 0;
    for (int t = 0; t < T_; ++t) {
      if (row[t] != rgs[t]) {
        cmp = row[t] < rgs[t] ? -1 : 1;
        break;
      }
    }
    if (cmp < 0) {
      lo = mid + 1;
    } else if (cmp > 0) {
      hi = mid;
    } else {
      return static_cast<std::ptrdiff_t>(mid);
    }
  }
  return -1;
}

double PartitionMeasure::weight_of(const Partition& p) const {
  const std::ptrdiff_t i = index_of(p.rgs());
  if (i < 0) {
    throw std::out_of_range("partition " + p.to_rgs_string() +
                            " is not in the measure's support");
  }
  return weights_[i];
}

double PartitionMeasure::total() const {
  double sum = 0.0;
  for (double w : weights_) sum += w;
  return sum;
}

void PartitionMeasure::append(const std::vector<int>& rgs, double weight) {
  for (int label : rgs) flat_.push_back(static_cast<std::uint8_t>(label));
  weights_.push_back(weight);
}

namespace {

void chain_rule_walk(const PredictiveFn& rule, const Partition& prefix,
                     double weight, int T, PartitionMeasure& out) {
  if (prefix.T() == T) {
    out.append(prefix.rgs(), weight);
    return;
  }
  const PredictiveDistribution dist = rule(prefix);
  for (int label = 1; label <= prefix.num_blocks(); ++label) {
    chain_rule_walk(rule, prefix.extended(label), weight * dist.known[label - 1],
                    T, out);
  }
  chain_rule_walk(rule, prefix.extended(prefix.num_blocks() + 1),
                  weight * dist.novelty, T, out);
}

}  // namespace

PartitionMeasure induced_measure(const PredictiveFn& rule, int T, int cap) {
  if (T < 1) throw std::invalid_argument("induced_measure: T must be positive");
  if (T > cap) throw CapError(T, cap);
  PartitionMeasure out(T);
  chain_rule_walk(rule, Partition(), 1.0, T, out);
  return out;
}

PartitionMeasure induced_measure(const PredictionRule& rule, int T, int cap) {
  return induced_measure(as_predictive_fn(rule), T, cap);
}

namespace {

void check_stirling_range(int T, int k) {
  if (T < 1 || k < 1 || k > T) {
    throw std::out_of_range("stirling: need 1 <= k <= T, got T=" +
                            std::to_string(T) + " k=" + std::to_string(k));
  }
}

}  // namespace

template <class S>
S gen_stirling_as(double alpha, int T, int k) {
  check_stirling_range(T, k);
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("gen_stirling: alpha must lie in [0, 1)");
  }
  const S a = scalar_from_double<S>(alpha);
  // row[j] = S_alpha(t, j), grown from t = 1 upward.
  std::vector<S> row(T + 1, S(0));
  row[1] = S(1);
  for (int t = 1; t < T; ++t) {
    std::vector<S> next(T + 1, S(0));
    for (int j = 1; j <= t + 1; ++j) {
      next[j] = (S(t) - S(j) * a) * row[j] + row[j - 1];
    }
    row = std::move(next);
  }
  return row[k];
}

template double gen_stirling_as<double>(double, int, int);
template Rational gen_stirling_as<Rational>(double, int, int);

double gen_stirling(double alpha, int T, int k) {
  return gen_stirling_as<double>(alpha, T, k);
}

BigInt stirling_first_kind(int T, int k) {
  check_stirling_range(T, k);
  std::vector<BigInt> row(T + 1, BigInt(0));
  row[1] = 1;
  for (int t = 1; t < T; ++t) {
    std::vector<BigInt> next(T + 1, BigInt(0));
    for (int j = 1; j <= t + 1; ++j) {
      next[j] = BigInt(t) * row[j] + row[j - 1];
    }
    row = std::move(next);
  }
  return row[k];
}

double prob_k_novelties(const PredictionRule& rule, int T, int k) {
  check_stirling_range(T, k);
  validate(rule);
  if (std::holds_alternative<Kuipers>(rule)) {
    throw RuleError("prob_k_novelties: unsupported for the Kuipers rule");
  }
  if (const auto* tp = std::get_if<TwoParameter>(&rule)) {
    return rising_factorial(tp->theta + tp->alpha, k - 1, tp->alpha) /
           rising_factorial(tp->theta + 1.0, T - 1, 1.0) *
           gen_stirling(tp->alpha, T, k);
  }
  const double theta = std::holds_alternative<DeMorgan>(rule)
                           ? 1.0
                           : std::get<Ewens>(rule).theta;
  double result = 1.0;
  for (int j = 0; j < k; ++j) result *= theta;
  result /= rising_factorial(theta, T, 1.0);
  return result * stirling_first_kind(T, k).convert_to<double>();
}

double expected_novelties(const PredictionRule& rule, int T) {
  if (T < 1) throw std::invalid_argument("expected_novelties: T must be positive");
  validate(rule);
  if (std::holds_alternative<Kuipers>(rule)) {
    throw RuleError("expected_novelties: unsupported for the Kuipers rule");
  }
  if (const auto* tp = std::get_if<TwoParameter>(&rule)) {
    // term_i = (theta+alpha)_{i-1^1} / (theta+1)_{i-1^1}, built incrementally.
    double sum = 0.0;
    double term = 1.0;
    for (int i = 1; i <= T; ++i) {
      sum += term;
      term *= (tp->theta + tp->alpha + i - 1) / (tp->theta + i);
    }
    return sum;
  }
  const double theta = std::holds_alternative<DeMorgan>(rule)
                           ? 1.0
                           : std::get<Ewens>(rule).theta;
  double sum = 0.0;
  for (int i = 1; i <= T; ++i) sum += theta / (theta + i - 1);
  return sum;
}

std::string measure_to_csv(const PartitionMeasure& m) {
  std::ostringstream os;
  os << "rgs,num_blocks,partition_vector,prob\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Partition p = m.partition_at(i);
    os << '"' << p.to_rgs_string() << '"' << ',' << p.num_blocks() << ',';
    os << '"';
    const std::vector<int> a = p.partition_vector();
    for (std::size_t j = 0; j < a.size(); ++j) {
      if (j) os << ',';
      os << a[j];
    }
    os << '"' << ',' << format_g12(m.weight_at(i)) << '\n';
  }
  return os.str();
}

}  // namespace novelty
