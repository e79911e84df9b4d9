#include "novelty/elicitation.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "novelty/format.hpp"

namespace novelty {

UtilitySpec UtilitySpec::linear() { return UtilitySpec(); }

UtilitySpec UtilitySpec::table(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) {
    throw std::invalid_argument("utility table needs at least two knots");
  }
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first) ||
        !(knots[i].second > knots[i - 1].second)) {
      throw std::invalid_argument(
          "utility table must be strictly increasing in both coordinates");
    }
  }
  UtilitySpec u;
  u.knots_ = std::move(knots);
  // Normalize so that u(0) = 0.
  const double at_zero = u.value(0.0);
  for (auto& [x, ux] : u.knots_) ux -= at_zero;
  return u;
}

double UtilitySpec::value(double x) const {
  if (knots_.empty()) return x;
  if (x < knots_.front().first || x > knots_.back().first) {
    throw std::out_of_range("utility query x=" + format_g12(x) +
                            " outside the table range [" +
                            format_g12(knots_.front().first) + ", " +
                            format_g12(knots_.back().first) + "]");
  }
  auto hi = std::lower_bound(
      knots_.begin(), knots_.end(), x,
      [](const std::pair<double, double>& knot, double v) { return knot.first < v; });
  if (hi == knots_.begin()) return hi->second;
  auto lo = hi - 1;
  if (hi == knots_.end()) return lo->second;
  const double t = (x - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

double UtilitySpec::inverse(double u) const {
  if (knots_.empty()) return u;
  if (u < knots_.front().second || u > knots_.back().second) {
    throw std::out_of_range("utility inverse query u=" + format_g12(u) +
                            " outside the table range");
  }
  auto hi = std::lower_bound(knots_.begin(), knots_.end(), u,
                             [](const std::pair<double, double>& knot, double v) {
                               return knot.second < v;
                             });
  if (hi == knots_.begin()) return hi->first;
  auto lo = hi - 1;
  if (hi == knots_.end()) return lo->first;
  const double t = (u - lo->second) / (hi->second - lo->second);
  return lo->first + t * (hi->first - lo->first);
}

UtilitySpec utility_from_csv(std::istream& in) {
  std::vector<std::pair<double, double>> knots;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    std::size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::invalid_argument("utility CSV: expected x,u per line, got '" +
                                  line + "'");
    }
    char* end = nullptr;
    const std::string xs = line.substr(begin, comma - begin);
    const std::string us = line.substr(comma + 1);
    double x = std::strtod(xs.c_str(), &end);
    if (end == xs.c_str()) {
      if (knots.empty()) continue;  // header row
      throw std::invalid_argument("utility CSV: bad x value '" + xs + "'");
    }
    double u = std::strtod(us.c_str(), &end);
    if (end == us.c_str()) {
      throw std::invalid_argument("utility CSV: bad u value '" + us + "'");
    }
    knots.emplace_back(x, u);
  }
  return UtilitySpec::table(std::move(knots));
}

namespace {

std::optional<std::string> range_check(double value, double u1,
                                       const std::string& name) {
  if (!(value > 0.0) || !(value < u1)) {
    return "u(" + name + ")=" + format_g12(value) +
           " lies outside (0, u(1)); the observation is inconsistent with a "
           "probability statement";
  }
  return std::nullopt;
}

}  // namespace

ElicitedTwoParameter elicit_two_parameter(const UtilitySpec& u,
                                          const ElicitationObservation& obs) {
  if (obs.protocol != Protocol::TwoParameter) {
    throw std::invalid_argument("elicit_two_parameter: observation uses the "
                                "Ewens protocol");
  }
  if (!obs.k.has_value()) {
    throw std::invalid_argument(
        "elicit_two_parameter: certainty equivalent k is required");
  }
  const double u1 = u.value(1.0);
  const double uz = u.value(obs.z);
  const double uk = u.value(*obs.k);
  const double denom = 2.0 * uk + uz - u1;
  // The identification is singular on the surface 2u(k)+u(z) = u(1);
  // anything within rounding distance of it is unusable.
  if (std::abs(denom) <= 1e-9 * std::max(std::abs(u1), 1.0)) {
    throw std::invalid_argument(
        "elicit_two_parameter: degenerate observation, 2u(k)+u(z)-u(1) = 0");
  }
  ElicitedTwoParameter result;
  result.alpha = (3.0 * uk + uz - u1) / denom;
  result.theta = (2.0 * u1 - 6.0 * uk - 3.0 * uz) / denom;
  // alpha = 0 may arrive as -0.0 from a signed zero numerator.
  if (result.alpha == 0.0) result.alpha = 0.0;

  std::string warnings;
  for (const auto& issue : {range_check(uz, u1, "z"), range_check(uk, u1, "k")}) {
    if (issue) warnings += (warnings.empty() ? "" : "; ") + *issue;
  }
  if (!(result.alpha >= 0.0 && result.alpha < 1.0)) {
    warnings += (warnings.empty() ? "" : "; ");
    warnings += "alpha=" + format_g12(result.alpha) + " outside [0, 1)";
  }
  if (!(result.theta > -result.alpha)) {
    warnings += (warnings.empty() ? "" : "; ");
    warnings += "theta=" + format_g12(result.theta) + " not above -alpha";
  }
  if (!warnings.empty()) result.warning = warnings;
  return result;
}

ElicitedTheta elicit_ewens(const UtilitySpec& u, const ElicitationObservation& obs) {
  if (obs.protocol != Protocol::Ewens) {
    throw std::invalid_argument("elicit_ewens: observation uses the two-parameter "
                                "protocol");
  }
  const double u1 = u.value(1.0);
  const double uz = u.value(obs.z);
  if (uz == u1) {
    throw std::invalid_argument("elicit_ewens: u(z) = u(1), theta is undefined");
  }
  ElicitedTheta result;
  result.theta = uz / (u1 - uz);
  std::string warnings;
  if (auto issue = range_check(uz, u1, "z")) warnings = *issue;
  if (!(result.theta > 0.0)) {
    warnings += (warnings.empty() ? "" : "; ");
    warnings += "theta=" + format_g12(result.theta) + " is not positive";
  }
  if (!warnings.empty()) result.warning = warnings;
  return result;
}

ElicitationObservation certainty_equivalents(const PredictionRule& rule,
                                             const UtilitySpec& u) {
  validate(rule);
  const double u1 = u.value(1.0);
  ElicitationObservation obs;
  if (const auto* tp = std::get_if<TwoParameter>(&rule)) {
    obs.protocol = Protocol::TwoParameter;
    obs.z = u.inverse(u1 * (2.0 * tp->alpha + tp->theta) / (3.0 + tp->theta));
    obs.k = u.inverse(u1 * (1.0 - tp->alpha) / (3.0 + tp->theta));
    return obs;
  }
  double theta = 0.0;
  if (std::holds_alternative<DeMorgan>(rule)) {
    theta = 1.0;
  } else if (const auto* ew = std::get_if<Ewens>(&rule)) {
    theta = ew->theta;
  } else {
    throw RuleError("certainty_equivalents: unsupported for the Kuipers rule");
  }
  obs.protocol = Protocol::Ewens;
  obs.z = u.inverse(u1 * theta / (1.0 + theta));
  return obs;
}

std::vector<IndifferenceBet> risk_neutral_bets(const PredictionRule& rule,
                                               const Partition& p) {
  validate(rule);
  double theta = 0.0;
  double alpha = 0.0;
  if (const auto* tp = std::get_if<TwoParameter>(&rule)) {
    alpha = tp->alpha;
    theta = tp->theta;
  } else if (const auto* ew = std::get_if<Ewens>(&rule)) {
    theta = ew->theta;
  } else if (std::holds_alternative<DeMorgan>(rule)) {
    theta = 1.0;
  } else {
    throw RuleError("risk_neutral_bets: unsupported for the Kuipers rule");
  }
  const double stake = p.T() + theta;
  std::vector<IndifferenceBet> bets;
  bets.reserve(p.num_blocks() + 1);
  bets.push_back(IndifferenceBet{0, stake, alpha * p.num_blocks() + theta});
  for (int j = 1; j <= p.num_blocks(); ++j) {
    bets.push_back(IndifferenceBet{j, stake, p.block_size(j) - alpha});
  }
  return bets;
}

namespace {

// Sufficient statistics for the two-parameter log-likelihood:
//   LL(a, t) = sum_i d[i] log(t + i a) - sum_i e[i] log(t + i)
//            + sum_m b[m] log(m - a)
// where d[i] counts observations with more than i blocks, e[i] counts
// observations with more than i sampling periods, and b[m] counts blocks
// with more than m elements.
struct LikelihoodStats {
  std::vector<std::int64_t> d, e, b;  // index 0 unused
};

LikelihoodStats gather_stats(const std::vector<Partition>& observations) {
  LikelihoodStats stats;
  int max_k = 0;
  int max_t = 0;
  int max_size = 0;
  for (const Partition& p : observations) {
    max_k = std::max(max_k, p.num_blocks());
    max_t = std::max(max_t, p.T());
    for (int size : p.block_sizes()) max_size = std::max(max_size, size);
  }
  stats.d.assign(std::max(max_k, 1), 0);
  stats.e.assign(std::max(max_t, 1), 0);
  stats.b.assign(std::max(max_size, 1), 0);
  for (const Partition& p : observations) {
    for (int i = 1; i < p.num_blocks(); ++i) ++stats.d[i];
    for (int i = 1; i < p.T(); ++i) ++stats.e[i];
    for (int size : p.block_sizes()) {
      for (int m = 1; m < size; ++m) ++stats.b[m];
    }
  }
  return stats;
}

double log_likelihood(const LikelihoodStats& stats, double alpha, double theta) {
  double ll = 0.0;
  for (std::size_t i = 1; i < stats.d.size(); ++i) {
    if (stats.d[i]) ll += stats.d[i] * std::log(theta + i * alpha);
  }
  for (std::size_t i = 1; i < stats.e.size(); ++i) {
    if (stats.e[i]) ll -= stats.e[i] * std::log(theta + i);
  }
  for (std::size_t m = 1; m < stats.b.size(); ++m) {
    if (stats.b[m]) ll += stats.b[m] * std::log(m - alpha);
  }
  return ll;
}

constexpr double kThetaCeiling = 1e4;
constexpr double kThetaOffset = 0.01;  // distance kept above the lower bound
constexpr int kThetaGridPoints = 61;
constexpr double kMoveTolerance = 1e-6;

template <class F>
double golden_max(const F& f, double lo, double hi, double xtol,
                  std::int64_t& evaluations) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  evaluations += 2;
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
    ++evaluations;
  }
  return f1 > f2 ? x1 : x2;
}

}  // namespace

FitResult fit_mle(const std::vector<Partition>& observations, RuleFamily family) {
  if (observations.empty()) {
    throw std::invalid_argument("fit_mle: no observations");
  }
  const LikelihoodStats stats = gather_stats(observations);
  FitResult result;

  const bool two_param = family == RuleFamily::TwoParameter;
  const auto theta_lower = [&](double alpha) {
    return two_param ? std::max(-alpha, -0.99) : 0.0;
  };

  // Coarse grid. theta is log-spaced in its distance above the lower bound.
  double best_ll = -std::numeric_limits<double>::infinity();
  double worst_ll = std::numeric_limits<double>::infinity();
  double best_alpha = 0.0, best_theta = 1.0;
  const int alpha_points = two_param ? 100 : 1;
  for (int ai = 0; ai < alpha_points; ++ai) {
    const double alpha = ai * 0.01;
    const double lower = theta_lower(alpha);
    const double span = kThetaCeiling - lower;
    for (int ti = 0; ti < kThetaGridPoints; ++ti) {
      const double phi =
          kThetaOffset * std::pow(span / kThetaOffset,
                                  static_cast<double>(ti) / (kThetaGridPoints - 1));
      const double theta = lower + phi;
      const double ll = log_likelihood(stats, alpha, theta);
      ++result.evaluations;
      if (ll > best_ll) {
        best_ll = ll;
        best_alpha = alpha;
        best_theta = theta;
      }
      worst_ll = std::min(worst_ll, ll);
    }
  }

  if (best_ll - worst_ll < 1e-12 * std::max(1.0, std::abs(best_ll))) {
    result.alpha = two_param ? best_alpha : 0.0;
    result.theta = best_theta;
    result.log_likelihood = best_ll;
    result.converged = false;
    result.diagnostic = "flat likelihood: the data do not identify the parameters";
    return result;
  }

  // Golden-section refinement, one coordinate at a time.
  double alpha = best_alpha;
  double theta = best_theta;
  bool hit_tolerance = false;
  for (int pass = 0; pass < 60; ++pass) {
    const double prev_alpha = alpha;
    const double prev_theta = theta;
    if (two_param) {
      const double lo = std::max(0.0, alpha - 0.02);
      const double hi = std::min(0.99, alpha + 0.02);
      alpha = golden_max(
          [&](double a) { return log_likelihood(stats, a, theta); }, lo, hi,
          1e-8, result.evaluations);
    }
    {
      // Refine in the log of the distance above the lower bound, bracketing
      // one coarse-grid step to each side.
      const double lower = theta_lower(alpha);
      const double span = kThetaCeiling - lower;
      const double step = std::log(span / kThetaOffset) / (kThetaGridPoints - 1);
      const double phi = std::max(theta - lower, kThetaOffset * 1e-6);
      const double log_lo = std::max(std::log(kThetaOffset) - step, std::log(phi) - step);
      const double log_hi = std::min(std::log(span), std::log(phi) + step);
      const double picked = golden_max(
          [&](double lp) { return log_likelihood(stats, alpha, lower + std::exp(lp)); },
          log_lo, log_hi, 1e-12, result.evaluations);
      theta = lower + std::exp(picked);
    }
    if (std::abs(alpha - prev_alpha) < kMoveTolerance &&
        std::abs(theta - prev_theta) < kMoveTolerance) {
      hit_tolerance = true;
      break;
    }
  }

  result.alpha = two_param ? alpha : 0.0;
  result.theta = theta;
  result.log_likelihood = log_likelihood(stats, result.alpha, result.theta);
  ++result.evaluations;
  if (theta > 0.999 * kThetaCeiling) {
    result.at_boundary = true;
    result.converged = false;
    result.diagnostic =
        "theta reached the upper search bound (all-singleton degenerate data)";
  } else {
    result.converged = hit_tolerance;
    if (!hit_tolerance) result.diagnostic = "refinement pass limit reached";
  }
  return result;
}

std::vector<Partition> read_observations(std::istream& in) {
  std::vector<Partition> observations;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      observations.push_back(Partition::parse(line));
    } catch (const PartitionError& e) {
      throw PartitionError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return observations;
}

}  // namespace novelty
