#include "novelty/json_io.hpp"

#include <cmath>

namespace novelty {

using nlohmann::json;

json json_of(const Partition& p) {
  return json{{"T", p.T()}, {"rgs", p.rgs()}};
}

json json_of(const PredictiveDistribution& dist) {
  return json{{"known", dist.known}, {"novelty", dist.novelty}};
}

json json_of(const PartitionMeasure& m) {
  json entries = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    entries.push_back(json{{"rgs", m.rgs_at(i)}, {"prob", m.weight_at(i)}});
  }
  return json{{"T", m.T()}, {"entries", std::move(entries)}};
}

json json_of(const CheckReport& report) {
  json out{{"property", property_name(report.property)},
           {"T_max", report.t_max},
           {"verdict", report.holds ? "holds" : "fails"},
           {"tolerance", report.tolerance}};
  if (report.witness) {
    const CheckWitness& w = *report.witness;
    out["witness"] = json{{"partitions", w.partitions},
                          {"indices", w.indices},
                          {"values", json::array({w.lhs, w.rhs})},
                          {"detail", w.detail}};
  }
  return out;
}

json json_of(const SimulationReport& report) {
  json rows = json::array();
  const double reps = static_cast<double>(report.replications);
  for (const SimulationRow& row : report.rows) {
    const double freq = static_cast<double>(row.count) / reps;
    json entry{{"rgs", row.rgs}, {"count", row.count}, {"empirical_freq", freq}};
    if (report.has_exact) {
      entry["exact_prob"] = row.exact_prob;
      entry["abs_dev"] = std::abs(freq - row.exact_prob);
    }
    rows.push_back(std::move(entry));
  }
  json histogram = json::object();
  for (const auto& [k, count] : report.novelty_count_histogram) {
    histogram[std::to_string(k)] = count;
  }
  json out{{"T", report.T},
           {"replications", report.replications},
           {"rows", std::move(rows)},
           {"novelty_count_mean", report.novelty_count_mean},
           {"novelty_count_histogram", std::move(histogram)}};
  if (report.has_exact) {
    out["max_abs_deviation"] = report.max_abs_deviation;
    out["chi_square"] = report.chi_square;
  }
  return out;
}

json json_of(const FitResult& result) {
  json out{{"alpha", result.alpha},
           {"theta", result.theta},
           {"log_likelihood", result.log_likelihood},
           {"evaluations", result.evaluations},
           {"converged", result.converged},
           {"at_boundary", result.at_boundary}};
  if (!result.diagnostic.empty()) out["diagnostic"] = result.diagnostic;
  return out;
}

json json_of(const AwarenessLattice& lattice) {
  json spaces = json::array();
  for (const AwarenessSpace& space : lattice.spaces()) {
    json entry{{"objects", space.objects},
               {"name", space.name()},
               {"realized", space.realized}};
    if (space.annotated) {
      json predictive = json::object();
      for (std::size_t i = 0; i < space.objects.size(); ++i) {
        predictive[space.objects[i]] = space.object_prob[i];
      }
      predictive[kNoveltyMark] = space.novelty_prob;
      entry["predictive"] = std::move(predictive);
    }
    spaces.push_back(std::move(entry));
  }
  json edges = json::array();
  json projections = json::array();
  for (const auto& [sub, super] : lattice.covering_edges()) {
    edges.push_back(json::array({sub, super}));
    json mapping = json::object();
    for (const std::string& object : lattice.spaces()[super].objects) {
      mapping[object] = lattice.project(super, sub, object);
    }
    mapping[kNoveltyMark] = kNoveltyMark;
    projections.push_back(json{{"from", super}, {"to", sub}, {"map", mapping}});
  }
  return json{{"spaces", std::move(spaces)},
              {"edges", std::move(edges)},
              {"projections", std::move(projections)}};
}

}  // namespace novelty
