#include "novelty/rules.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <utility>

#include <json.hpp>

#include "novelty/format.hpp"
#include "novelty/rational.hpp"

namespace novelty {

void validate(const PredictionRule& rule) {
  std::visit(
      [](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, TwoParameter>) {
          if (!(r.alpha >= 0.0 && r.alpha < 1.0)) {
            throw RuleError("two-param: alpha must lie in [0, 1), got " +
                            format_g12(r.alpha));
          }
          if (!(r.theta > -r.alpha)) {
            throw RuleError("two-param: theta must exceed -alpha (theta > " +
                            format_g12(-r.alpha) + "), got " +
                            format_g12(r.theta));
          }
        } else if constexpr (std::is_same_v<R, Ewens>) {
          if (!(r.theta > 0.0)) {
            throw RuleError("ewens: theta must be positive, got " +
                            format_g12(r.theta));
          }
        } else if constexpr (std::is_same_v<R, Kuipers>) {
          if (!(r.lambda > 0.0)) {
            throw RuleError("kuipers: lambda must be positive, got " +
                            format_g12(r.lambda));
          }
          if (!(r.delta > 0.0)) {
            throw RuleError("kuipers: delta must be positive, got " +
                            format_g12(r.delta));
          }
        }
      },
      rule);
}

namespace {

template <class S>
NextDrawDistribution<S> ewens_predictive(double theta_value, const Partition& p) {
  const S theta = scalar_from_double<S>(theta_value);
  const S denom = S(p.T()) + theta;
  NextDrawDistribution<S> dist;
  dist.known.reserve(p.num_blocks());
  for (int size : p.block_sizes()) dist.known.push_back(S(size) / denom);
  dist.novelty = theta / denom;
  return dist;
}

template <class S>
NextDrawDistribution<S> two_parameter_predictive(const TwoParameter& r,
                                                 const Partition& p) {
  const S alpha = scalar_from_double<S>(r.alpha);
  const S theta = scalar_from_double<S>(r.theta);
  const S denom = S(p.T()) + theta;
  NextDrawDistribution<S> dist;
  dist.known.reserve(p.num_blocks());
  for (int size : p.block_sizes()) {
    dist.known.push_back((S(size) - alpha) / denom);
  }
  dist.novelty = (alpha * S(p.num_blocks()) + theta) / denom;
  return dist;
}

template <class S>
NextDrawDistribution<S> kuipers_predictive(const Kuipers& r, const Partition& p) {
  // Novelty mass: (k + delta/2) / (T + delta). The remaining mass
  // (T - k + delta/2) / (T + delta) is split across known objects in
  // proportion to (n_j + lambda/k) / (T + lambda); the proportions sum to
  // one exactly since sum_j n_j = T.
  const S lambda = scalar_from_double<S>(r.lambda);
  const S delta = scalar_from_double<S>(r.delta);
  const S T = S(p.T());
  const S k = S(p.num_blocks());
  const S half_delta = delta / S(2);
  const S denom = T + delta;
  NextDrawDistribution<S> dist;
  dist.novelty = (k + half_delta) / denom;
  const S known_mass = (T - k + half_delta) / denom;
  const S tilt = lambda / k;
  dist.known.reserve(p.num_blocks());
  for (int size : p.block_sizes()) {
    dist.known.push_back(known_mass * (S(size) + tilt) / (T + lambda));
  }
  return dist;
}

}  // namespace

template <class S>
NextDrawDistribution<S> predictive_as(const PredictionRule& rule, const Partition& p) {
  validate(rule);
  if (p.T() == 0) {
    // The first draw is necessarily novel.
    NextDrawDistribution<S> dist;
    dist.novelty = S(1);
    return dist;
  }
  return std::visit(
      [&](const auto& r) -> NextDrawDistribution<S> {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, TwoParameter>) {
          return two_parameter_predictive<S>(r, p);
        } else if constexpr (std::is_same_v<R, Ewens>) {
          return ewens_predictive<S>(r.theta, p);
        } else if constexpr (std::is_same_v<R, DeMorgan>) {
          return ewens_predictive<S>(1.0, p);
        } else {
          return kuipers_predictive<S>(r, p);
        }
      },
      rule);
}

template NextDrawDistribution<double> predictive_as<double>(const PredictionRule&,
                                                            const Partition&);
template NextDrawDistribution<Rational> predictive_as<Rational>(const PredictionRule&,
                                                                const Partition&);

PredictiveDistribution predictive(const PredictionRule& rule, const Partition& p) {
  return predictive_as<double>(rule, p);
}

PredictiveFn as_predictive_fn(const PredictionRule& rule) {
  validate(rule);
  return [rule](const Partition& p) { return predictive(rule, p); };
}

namespace {

double parse_number(const std::string& text, const std::string& key) {
  char* end = nullptr;
  double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty()) {
    throw RuleError("rule literal: '" + text + "' is not a number for " + key);
  }
  return value;
}

std::map<std::string, double> parse_kv(const std::string& body) {
  std::map<std::string, double> kv;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t comma = body.find(',', start);
    std::string item = body.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw RuleError("rule literal: expected key=value, got '" + item + "'");
    }
    std::string key = item.substr(0, eq);
    if (kv.count(key)) throw RuleError("rule literal: duplicate key '" + key + "'");
    kv[key] = parse_number(item.substr(eq + 1), key);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return kv;
}

double take(std::map<std::string, double>& kv, const std::string& key,
            const std::string& rule_name) {
  auto it = kv.find(key);
  if (it == kv.end()) {
    throw RuleError("rule literal: " + rule_name + " requires " + key);
  }
  double value = it->second;
  kv.erase(it);
  return value;
}

}  // namespace

PredictionRule parse_rule(const std::string& literal) {
  std::size_t colon = literal.find(':');
  std::string name = literal.substr(0, colon);
  std::string body = colon == std::string::npos ? "" : literal.substr(colon + 1);

  PredictionRule rule;
  if (name == "demorgan") {
    if (!body.empty()) throw RuleError("rule literal: demorgan takes no parameters");
    rule = DeMorgan{};
  } else if (name == "ewens") {
    auto kv = parse_kv(body);
    rule = Ewens{take(kv, "theta", name)};
    if (!kv.empty()) {
      throw RuleError("rule literal: unknown key '" + kv.begin()->first + "'");
    }
  } else if (name == "two-param") {
    auto kv = parse_kv(body);
    double alpha = take(kv, "alpha", name);
    double theta = take(kv, "theta", name);
    if (!kv.empty()) {
      throw RuleError("rule literal: unknown key '" + kv.begin()->first + "'");
    }
    rule = TwoParameter{alpha, theta};
  } else if (name == "kuipers") {
    auto kv = parse_kv(body);
    double lambda = take(kv, "lambda", name);
    double delta = take(kv, "delta", name);
    if (!kv.empty()) {
      throw RuleError("rule literal: unknown key '" + kv.begin()->first + "'");
    }
    rule = Kuipers{lambda, delta};
  } else {
    throw RuleError("rule literal: unknown rule '" + name +
                    "' (expected two-param, ewens, demorgan, or kuipers)");
  }
  validate(rule);
  return rule;
}

std::string to_literal(const PredictionRule& rule) {
  return std::visit(
      [](const auto& r) -> std::string {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, TwoParameter>) {
          return "two-param:alpha=" + format_g12(r.alpha) +
                 ",theta=" + format_g12(r.theta);
        } else if constexpr (std::is_same_v<R, Ewens>) {
          return "ewens:theta=" + format_g12(r.theta);
        } else if constexpr (std::is_same_v<R, DeMorgan>) {
          return "demorgan";
        } else {
          return "kuipers:lambda=" + format_g12(r.lambda) +
                 ",delta=" + format_g12(r.delta);
        }
      },
      rule);
}

PredictiveFn tabulated_rule_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw RuleError(std::string("tabulated rule: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw RuleError("tabulated rule: expected an object of rgs -> probabilities");
  }
  auto table = std::make_shared<std::map<std::string, PredictiveDistribution>>();
  for (const auto& [key, value] : doc.items()) {
    Partition p = Partition::parse(key);
    if (!value.is_array() ||
        value.size() != static_cast<std::size_t>(p.num_blocks()) + 1) {
      throw RuleError("tabulated rule: entry '" + key + "' must list " +
                      std::to_string(p.num_blocks()) +
                      " known probabilities plus novelty");
    }
    PredictiveDistribution dist;
    double total = 0.0;
    for (std::size_t i = 0; i < value.size(); ++i) {
      double prob = value[i].get<double>();
      if (prob < 0.0) {
        throw RuleError("tabulated rule: entry '" + key + "' has a negative probability");
      }
      total += prob;
      if (i + 1 < value.size()) {
        dist.known.push_back(prob);
      } else {
        dist.novelty = prob;
      }
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw RuleError("tabulated rule: entry '" + key + "' sums to " +
                      format_g12(total) + ", expected 1");
    }
    (*table)[p.to_rgs_string()] = std::move(dist);
  }
  return [table](const Partition& p) {
    auto it = table->find(p.to_rgs_string());
    if (it == table->end()) {
      throw RuleError("tabulated rule: no entry for partition '" +
                      p.to_rgs_string() + "'");
    }
    return it->second;
  };
}

}  // namespace novelty
