#include "novelty/checkers.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "novelty/format.hpp"
#include "novelty/measures.hpp"

namespace novelty {

std::string property_name(Property p) {
  switch (p) {
    case Property::PartitionExchangeability: return "exchangeability";
    case Property::MarginalConsistency: return "marginal-consistency";
    case Property::FreqDependenceKnown: return "freq-known";
    case Property::FreqDependenceNovelty: return "freq-novelty";
    case Property::SamplingTimeDependenceNovelty: return "sampling-time-novelty";
    case Property::ReverseBayes: return "reverse-bayes";
    case Property::PlainBayes: return "plain-bayes";
    case Property::ExtendedBayes: return "extended-bayes";
  }
  throw std::logic_error("unreachable property");
}

std::optional<Property> property_from_name(const std::string& name) {
  for (Property p : all_properties()) {
    if (property_name(p) == name) return p;
  }
  return std::nullopt;
}

std::vector<Property> all_properties() {
  return {Property::PartitionExchangeability,
          Property::MarginalConsistency,
          Property::FreqDependenceKnown,
          Property::FreqDependenceNovelty,
          Property::SamplingTimeDependenceNovelty,
          Property::ReverseBayes,
          Property::PlainBayes,
          Property::ExtendedBayes};
}

namespace {

CheckReport pass(Property property, int t_max, double tol) {
  return CheckReport{property, t_max, true, tol, std::nullopt};
}

CheckReport fail(Property property, int t_max, double tol, CheckWitness witness) {
  return CheckReport{property, t_max, false, tol, std::move(witness)};
}

std::vector<int> vector_of_sizes(const std::vector<int>& rgs) {
  std::vector<int> sizes;
  for (int label : rgs) {
    if (label > static_cast<int>(sizes.size())) {
      sizes.push_back(1);
    } else {
      ++sizes[label - 1];
    }
  }
  std::vector<int> a(rgs.size(), 0);
  for (int s : sizes) ++a[s - 1];
  return a;
}

std::string rgs_text(const std::vector<int>& rgs) {
  std::string out;
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(rgs[i]);
  }
  return out;
}

}  // namespace

CheckReport check_exchangeability(const PredictiveFn& rule, int t_max, double tol,
                                  int cap) {
  const Property prop = Property::PartitionExchangeability;
  if (t_max > cap) throw CapError(t_max, cap);
  for (int T = 1; T <= t_max; ++T) {
    // Unconditional: equal partition vectors, equal induced weight.
    const PartitionMeasure measure = induced_measure(rule, T, cap);
    std::map<std::vector<int>, std::size_t> first_of_group;
    for (std::size_t i = 0; i < measure.size(); ++i) {
      const std::vector<int> rgs = measure.rgs_at(i);
      const std::vector<int> key = vector_of_sizes(rgs);
      auto [it, inserted] = first_of_group.emplace(key, i);
      if (inserted) continue;
      const double w_first = measure.weight_at(it->second);
      const double w_here = measure.weight_at(i);
      if (std::abs(w_first - w_here) > tol) {
        CheckWitness w;
        w.partitions = {rgs_text(measure.rgs_at(it->second)), rgs_text(rgs)};
        w.lhs = w_first;
        w.rhs = w_here;
        w.detail = "equal partition vectors receive unequal induced weight";
        return fail(prop, t_max, tol, std::move(w));
      }
    }
    // Conditional analogue: extensions with equal resulting partition
    // vector (same appended-block size) must get equal predictive mass.
    if (T >= t_max) continue;
    for (const Partition& p : enumerate_partitions(T, cap)) {
      const PredictiveDistribution dist = rule(p);
      for (int i = 1; i <= p.num_blocks(); ++i) {
        for (int j = i + 1; j <= p.num_blocks(); ++j) {
          if (p.block_size(i) != p.block_size(j)) continue;
          if (std::abs(dist.known[i - 1] - dist.known[j - 1]) > tol) {
            CheckWitness w;
            w.partitions = {p.to_rgs_string()};
            w.indices = {i, j};
            w.lhs = dist.known[i - 1];
            w.rhs = dist.known[j - 1];
            w.detail = "same-size blocks receive unequal predictive mass";
            return fail(prop, t_max, tol, std::move(w));
          }
        }
      }
    }
  }
  return pass(prop, t_max, tol);
}

CheckReport check_marginal_consistency(const PredictiveFn& rule, int t_max,
                                       double tol, int cap) {
  const Property prop = Property::MarginalConsistency;
  if (t_max > cap) throw CapError(t_max, cap);
  for (int T = 2; T <= t_max; ++T) {
    const PartitionMeasure parent = induced_measure(rule, T - 1, cap);
    const PartitionMeasure child = induced_measure(rule, T, cap);
    for (std::size_t i = 0; i < parent.size(); ++i) {
      const Partition p = parent.partition_at(i);
      double sum = 0.0;
      for (const Partition& q : p.extensions()) sum += child.weight_of(q);
      if (std::abs(sum - parent.weight_at(i)) > tol) {
        CheckWitness w;
        w.partitions = {p.to_rgs_string()};
        w.lhs = sum;
        w.rhs = parent.weight_at(i);
        w.detail = "extension weights do not sum to the parent weight";
        return fail(prop, t_max, tol, std::move(w));
      }
    }
  }
  return pass(prop, t_max, tol);
}

CheckReport check_freq_dependence_known(const PredictiveFn& rule, int t_max,
                                        double tol, int cap) {
  const Property prop = Property::FreqDependenceKnown;
  if (t_max > cap) throw CapError(t_max, cap);
  for (int T = 1; T <= t_max; ++T) {
    // key: block size; the witness of first occurrence pins f(size, T).
    struct First {
      double value;
      std::string partition;
      int index;
    };
    std::map<int, First> seen;
    for (const Partition& p : enumerate_partitions(T, cap)) {
      const PredictiveDistribution dist = rule(p);
      for (int j = 1; j <= p.num_blocks(); ++j) {
        const int size = p.block_size(j);
        auto it = seen.find(size);
        if (it == seen.end()) {
          seen.emplace(size, First{dist.known[j - 1], p.to_rgs_string(), j});
          continue;
        }
        if (std::abs(it->second.value - dist.known[j - 1]) > tol) {
          CheckWitness w;
          w.partitions = {it->second.partition, p.to_rgs_string()};
          w.indices = {it->second.index, j};
          w.lhs = it->second.value;
          w.rhs = dist.known[j - 1];
          w.detail = "known-object mass differs across blocks of size " +
                     std::to_string(size) + " at T=" + std::to_string(T);
          return fail(prop, t_max, tol, std::move(w));
        }
      }
    }
  }
  return pass(prop, t_max, tol);
}

CheckReport check_freq_dependence_novelty(const PredictiveFn& rule, int t_max,
                                          double tol, int cap) {
  const Property prop = Property::FreqDependenceNovelty;
  if (t_max > cap) throw CapError(t_max, cap);
  for (int T = 1; T <= t_max; ++T) {
    std::map<int, std::pair<double, std::string>> seen;  // key: block count
    for (const Partition& p : enumerate_partitions(T, cap)) {
      const PredictiveDistribution dist = rule(p);
      auto [it, inserted] =
          seen.emplace(p.num_blocks(), std::make_pair(dist.novelty, p.to_rgs_string()));
      if (inserted) continue;
      if (std::abs(it->second.first - dist.novelty) > tol) {
        CheckWitness w;
        w.partitions = {it->second.second, p.to_rgs_string()};
        w.lhs = it->second.first;
        w.rhs = dist.novelty;
        w.detail = "novelty mass differs across partitions with " +
                   std::to_string(p.num_blocks()) + " blocks at T=" +
                   std::to_string(T);
        return fail(prop, t_max, tol, std::move(w));
      }
    }
  }
  return pass(prop, t_max, tol);
}

CheckReport check_sampling_time_dependence(const PredictiveFn& rule, int t_max,
                                           double tol, int cap) {
  const Property prop = Property::SamplingTimeDependenceNovelty;
  if (t_max > cap) throw CapError(t_max, cap);
  for (int T = 1; T <= t_max; ++T) {
    bool have_first = false;
    double first_value = 0.0;
    std::string first_partition;
    for (const Partition& p : enumerate_partitions(T, cap)) {
      const PredictiveDistribution dist = rule(p);
      if (!have_first) {
        have_first = true;
        first_value = dist.novelty;
        first_partition = p.to_rgs_string();
        continue;
      }
      if (std::abs(first_value - dist.novelty) > tol) {
        CheckWitness w;
        w.partitions = {first_partition, p.to_rgs_string()};
        w.lhs = first_value;
        w.rhs = dist.novelty;
        w.detail = "novelty mass varies across partitions of T=" +
                   std::to_string(T);
        return fail(prop, t_max, tol, std::move(w));
      }
    }
  }
  return pass(prop, t_max, tol);
}

FrequencyDependenceReports check_frequency_dependence(const PredictiveFn& rule,
                                                      int t_max, double tol,
                                                      int cap) {
  return FrequencyDependenceReports{
      check_freq_dependence_known(rule, t_max, tol, cap),
      check_freq_dependence_novelty(rule, t_max, tol, cap),
      check_sampling_time_dependence(rule, t_max, tol, cap)};
}

namespace {

// Ratio invariance across one sampling step, compared by cross-multiplying.
// lhs/rhs quantities quoted in the witness are the two ratios themselves
// whenever the denominators are positive.
struct RatioPair {
  double before_num, before_den;
  double after_num, after_den;
};

bool ratios_differ(const RatioPair& r, double tol) {
  return std::abs(r.before_num * r.after_den - r.before_den * r.after_num) > tol;
}

void fill_ratio_witness(const RatioPair& r, CheckWitness& w) {
  if (r.before_den > 0.0 && r.after_den > 0.0) {
    w.lhs = r.before_num / r.before_den;
    w.rhs = r.after_num / r.after_den;
  } else {
    w.lhs = r.before_num * r.after_den;
    w.rhs = r.before_den * r.after_num;
  }
}

}  // namespace

CheckReport check_reverse_bayes(const PredictiveFn& rule, int t_max, double tol,
                                int cap) {
  const Property prop = Property::ReverseBayes;
  if (t_max > cap) throw CapError(t_max, cap);
  for (int T = 1; T < t_max; ++T) {
    for (const Partition& p : enumerate_partitions(T, cap)) {
      const int k = p.num_blocks();
      if (k < 2) continue;
      const PredictiveDistribution before = rule(p);
      const Partition extended = p.extended(k + 1);  // novelty sampled
      const PredictiveDistribution after = rule(extended);
      for (int i = 1; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) {
          RatioPair r{before.known[i - 1], before.known[j - 1],
                      after.known[i - 1], after.known[j - 1]};
          if (ratios_differ(r, tol)) {
            CheckWitness w;
            w.partitions = {p.to_rgs_string(), extended.to_rgs_string()};
            w.indices = {i, j};
            fill_ratio_witness(r, w);
            w.detail = "known-object ratio changes when novelty is sampled";
            return fail(prop, t_max, tol, std::move(w));
          }
        }
      }
    }
  }
  return pass(prop, t_max, tol);
}

CheckReport check_plain_bayes(const PredictiveFn& rule, int t_max, double tol,
                              int cap) {
  const Property prop = Property::PlainBayes;
  if (t_max > cap) throw CapError(t_max, cap);
  for (int T = 1; T < t_max; ++T) {
    for (const Partition& p : enumerate_partitions(T, cap)) {
      const int k = p.num_blocks();
      if (k < 3) continue;
      const PredictiveDistribution before = rule(p);
      for (int i = 1; i <= k; ++i) {
        for (int j = i + 1; j <= k; ++j) {
          for (int m = 1; m <= k; ++m) {
            if (m == i || m == j) continue;
            const Partition extended = p.extended(m);  // known object m sampled
            const PredictiveDistribution after = rule(extended);
            RatioPair r{before.known[i - 1], before.known[j - 1],
                        after.known[i - 1], after.known[j - 1]};
            if (ratios_differ(r, tol)) {
              CheckWitness w;
              w.partitions = {p.to_rgs_string(), extended.to_rgs_string()};
              w.indices = {i, j, m};
              fill_ratio_witness(r, w);
              w.detail =
                  "known-object ratio changes when a third known object is sampled";
              return fail(prop, t_max, tol, std::move(w));
            }
          }
        }
      }
    }
  }
  return pass(prop, t_max, tol);
}

CheckReport check_extended_bayes(const PredictiveFn& rule, int t_max, double tol,
                                 int cap) {
  const Property prop = Property::ExtendedBayes;
  if (t_max > cap) throw CapError(t_max, cap);
  for (int T = 1; T < t_max; ++T) {
    for (const Partition& p : enumerate_partitions(T, cap)) {
      const int k = p.num_blocks();
      if (k < 2) continue;
      const PredictiveDistribution before = rule(p);
      for (int i = 1; i <= k; ++i) {
        for (int j = 1; j <= k; ++j) {
          if (j == i) continue;
          const Partition extended = p.extended(j);  // different known sampled
          const PredictiveDistribution after = rule(extended);
          RatioPair r{before.novelty, before.known[i - 1], after.novelty,
                      after.known[i - 1]};
          if (ratios_differ(r, tol)) {
            CheckWitness w;
            w.partitions = {p.to_rgs_string(), extended.to_rgs_string()};
            w.indices = {i, j};
            fill_ratio_witness(r, w);
            w.detail =
                "novelty-to-known ratio changes when another known object is sampled";
            return fail(prop, t_max, tol, std::move(w));
          }
        }
      }
    }
  }
  return pass(prop, t_max, tol);
}

CheckReport run_check(Property property, const PredictiveFn& rule, int t_max,
                      double tol, int cap) {
  switch (property) {
    case Property::PartitionExchangeability:
      return check_exchangeability(rule, t_max, tol, cap);
    case Property::MarginalConsistency:
      return check_marginal_consistency(rule, t_max, tol, cap);
    case Property::FreqDependenceKnown:
      return check_freq_dependence_known(rule, t_max, tol, cap);
    case Property::FreqDependenceNovelty:
      return check_freq_dependence_novelty(rule, t_max, tol, cap);
    case Property::SamplingTimeDependenceNovelty:
      return check_sampling_time_dependence(rule, t_max, tol, cap);
    case Property::ReverseBayes:
      return check_reverse_bayes(rule, t_max, tol, cap);
    case Property::PlainBayes:
      return check_plain_bayes(rule, t_max, tol, cap);
    case Property::ExtendedBayes:
      return check_extended_bayes(rule, t_max, tol, cap);
  }
  throw std::logic_error("unreachable property");
}

}  // namespace novelty
