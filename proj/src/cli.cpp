#include "novelty/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "novelty/checkers.hpp"
#include "novelty/elicitation.hpp"
#include "novelty/format.hpp"
#include "novelty/json_io.hpp"
#include "novelty/lattice.hpp"
#include "novelty/measures.hpp"
#include "novelty/partition.hpp"
#include "novelty/rules.hpp"
#include "novelty/urn.hpp"

namespace novelty {

namespace {

constexpr const char* kCapEnvVar = "NOVELTY_ORACLE_MAX_T";

int enumeration_cap() {
  const char* env = std::getenv(kCapEnvVar);
  if (env == nullptr || *env == '\0') return kDefaultEnumerationCap;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (*end != '\0' || value < 1) {
    throw std::invalid_argument(std::string(kCapEnvVar) + "='" + env +
                                "' is not a positive integer");
  }
  return static_cast<int>(value);
}

/// "--rule" accepts the built-in literals plus "table:<path>" for a
/// tabulated rule loaded from JSON.
struct RuleArg {
  std::optional<PredictionRule> builtin;
  PredictiveFn fn;
  std::string literal;
};

RuleArg load_rule(const std::string& literal) {
  RuleArg arg;
  arg.literal = literal;
  if (literal.rfind("table:", 0) == 0) {
    const std::string path = literal.substr(6);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open rule table '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    arg.fn = tabulated_rule_from_json(buffer.str());
    return arg;
  }
  arg.builtin = parse_rule(literal);
  arg.fn = as_predictive_fn(*arg.builtin);
  return arg;
}

PredictionRule require_builtin(const RuleArg& arg, const std::string& subcommand) {
  if (!arg.builtin) {
    throw std::invalid_argument(subcommand + " requires a built-in rule, not a table");
  }
  return *arg.builtin;
}

std::string dump_json(nlohmann::json j, const std::string& schema) {
  j["schema"] = schema;
  return j.dump() + "\n";
}

void print_predictive(std::ostream& out, const PredictiveDistribution& dist) {
  for (std::size_t j = 0; j < dist.known.size(); ++j) {
    out << "object " << j + 1 << ' ' << format_g12(dist.known[j]) << '\n';
  }
  out << "novelty " << format_g12(dist.novelty) << '\n';
}

void print_check_report(std::ostream& out, const CheckReport& report) {
  out << "property " << property_name(report.property) << '\n';
  out << "T_max " << report.t_max << '\n';
  out << "verdict " << (report.holds ? "holds" : "fails") << '\n';
  out << "tolerance " << format_g12(report.tolerance) << '\n';
  if (report.witness) {
    const CheckWitness& w = *report.witness;
    out << "witness partitions";
    for (const std::string& p : w.partitions) out << ' ' << p;
    out << '\n';
    if (!w.indices.empty()) {
      out << "witness indices";
      for (int i : w.indices) out << ' ' << i;
      out << '\n';
    }
    out << "witness values " << format_g12(w.lhs) << ' ' << format_g12(w.rhs)
        << '\n';
    out << "witness detail " << w.detail << '\n';
  }
}

struct CommonFlags {
  std::string rule;
  std::string partition;
  std::string format = "table";
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Subjective prediction rules for sampling with novelty"};
  app.require_subcommand(1);
  int exit_code = 0;

  // predict
  auto predict_flags = std::make_shared<CommonFlags>();
  CLI::App* predict_cmd =
      app.add_subcommand("predict", "Next-draw distribution of a rule at a partition");
  predict_cmd->add_option("--rule", predict_flags->rule, "Rule literal")->required();
  predict_cmd->add_option("--partition", predict_flags->partition,
                          "Partition, RGS or block form")->required();
  predict_cmd->add_option("--format", predict_flags->format, "table|json");
  predict_cmd->callback([&, predict_flags] {
    const RuleArg rule = load_rule(predict_flags->rule);
    const Partition p = Partition::parse(predict_flags->partition);
    const PredictiveDistribution dist = rule.fn(p);
    if (predict_flags->format == "json") {
      nlohmann::json j = json_of(dist);
      j["rule"] = rule.literal;
      j["partition"] = json_of(p);
      out << dump_json(std::move(j), "predict/v1");
    } else {
      print_predictive(out, dist);
    }
  });

  // eppf
  auto eppf_flags = std::make_shared<CommonFlags>();
  CLI::App* eppf_cmd =
      app.add_subcommand("eppf", "Exact probability of a partition under a rule");
  eppf_cmd->add_option("--rule", eppf_flags->rule, "Rule literal")->required();
  eppf_cmd->add_option("--partition", eppf_flags->partition, "Partition")->required();
  eppf_cmd->add_option("--format", eppf_flags->format, "table|json");
  eppf_cmd->callback([&, eppf_flags] {
    const RuleArg rule = load_rule(eppf_flags->rule);
    const PredictionRule builtin = require_builtin(rule, "eppf");
    const Partition p = Partition::parse(eppf_flags->partition);
    double prob = 0.0;
    if (const auto* tp = std::get_if<TwoParameter>(&builtin)) {
      prob = eppf_two_parameter(tp->alpha, tp->theta, p);
    } else if (const auto* ew = std::get_if<Ewens>(&builtin)) {
      prob = eppf_ewens(ew->theta, p);
    } else if (std::holds_alternative<DeMorgan>(builtin)) {
      prob = eppf_ewens(1.0, p);
    } else {
      throw std::invalid_argument(
          "eppf: the Kuipers rule is not partition exchangeable and has no "
          "EPPF; use `measure` for its induced weights");
    }
    if (eppf_flags->format == "json") {
      nlohmann::json j{{"rule", rule.literal},
                       {"partition", json_of(p)},
                       {"prob", prob}};
      out << dump_json(std::move(j), "eppf/v1");
    } else {
      out << format_g12(prob) << '\n';
    }
  });

  // measure
  auto measure_flags = std::make_shared<CommonFlags>();
  auto measure_T = std::make_shared<int>(1);
  CLI::App* measure_cmd = app.add_subcommand(
      "measure", "Induced distribution over all partitions of {1..T}");
  measure_cmd->add_option("--rule", measure_flags->rule, "Rule literal")->required();
  measure_cmd->add_option("-T,--T", *measure_T, "Number of sampling periods")
      ->required();
  measure_cmd->add_option("--format", measure_flags->format, "table|csv|json");
  measure_cmd->callback([&, measure_flags, measure_T] {
    const RuleArg rule = load_rule(measure_flags->rule);
    const PartitionMeasure m = induced_measure(rule.fn, *measure_T, enumeration_cap());
    if (measure_flags->format == "json") {
      out << dump_json(json_of(m), "measure/v1");
    } else if (measure_flags->format == "csv") {
      out << measure_to_csv(m);
    } else {
      out << "rgs prob\n";
      for (std::size_t i = 0; i < m.size(); ++i) {
        const std::vector<int> rgs = m.rgs_at(i);
        for (std::size_t t = 0; t < rgs.size(); ++t) {
          if (t) out << ',';
          out << rgs[t];
        }
        out << ' ' << format_g12(m.weight_at(i)) << '\n';
      }
    }
  });

  // enumerate
  auto enum_T = std::make_shared<int>(1);
  auto enum_format = std::make_shared<std::string>("table");
  CLI::App* enum_cmd =
      app.add_subcommand("enumerate", "All partitions of {1..T} in lexicographic order");
  enum_cmd->add_option("-T,--T", *enum_T, "Number of sampling periods")->required();
  enum_cmd->add_option("--format", *enum_format, "table|json");
  enum_cmd->callback([&, enum_T, enum_format] {
    const int cap = enumeration_cap();
    if (*enum_T > cap) throw CapError(*enum_T, cap);
    if (*enum_format == "json") {
      nlohmann::json partitions = nlohmann::json::array();
      for_each_rgs(*enum_T, [&](const std::vector<int>& rgs) {
        partitions.push_back(rgs);
      });
      nlohmann::json j{{"T", *enum_T},
                       {"count", partitions.size()},
                       {"partitions", std::move(partitions)}};
      out << dump_json(std::move(j), "enumerate/v1");
    } else {
      for_each_rgs(*enum_T, [&](const std::vector<int>& rgs) {
        for (std::size_t t = 0; t < rgs.size(); ++t) {
          if (t) out << ',';
          out << rgs[t];
        }
        out << '\n';
      });
    }
  });

  // check
  auto check_flags = std::make_shared<CommonFlags>();
  auto check_property = std::make_shared<std::string>();
  auto check_tmax = std::make_shared<int>(4);
  auto check_tol = std::make_shared<double>(kCheckerTolerance);
  CLI::App* check_cmd =
      app.add_subcommand("check", "Verify or refute a property of a rule");
  check_cmd->add_option("--rule", check_flags->rule, "Rule literal or table:FILE")
      ->required();
  check_cmd->add_option("--property", *check_property,
                        "exchangeability|marginal-consistency|freq-known|"
                        "freq-novelty|sampling-time-novelty|reverse-bayes|"
                        "plain-bayes|extended-bayes")
      ->required();
  check_cmd->add_option("--Tmax", *check_tmax, "Largest sampling time examined")
      ->required();
  check_cmd->add_option("--tolerance", *check_tol, "Comparison tolerance");
  check_cmd->add_option("--format", check_flags->format, "table|json");
  check_cmd->callback([&, check_flags, check_property, check_tmax, check_tol] {
    const RuleArg rule = load_rule(check_flags->rule);
    const auto property = property_from_name(*check_property);
    if (!property) {
      throw std::invalid_argument("unknown property '" + *check_property + "'");
    }
    const CheckReport report =
        run_check(*property, rule.fn, *check_tmax, *check_tol, enumeration_cap());
    if (check_flags->format == "json") {
      out << dump_json(json_of(report), "check/v1");
    } else {
      print_check_report(out, report);
    }
    if (!report.holds) exit_code = 3;
  });

  // simulate
  auto sim_flags = std::make_shared<CommonFlags>();
  auto sim_T = std::make_shared<int>(1);
  auto sim_reps = std::make_shared<std::uint64_t>(1);
  auto sim_seed = std::make_shared<std::uint64_t>(0);
  auto sim_empirical = std::make_shared<bool>(false);
  CLI::App* sim_cmd = app.add_subcommand(
      "simulate", "Urn sampling compared against the exact measure");
  sim_cmd->add_option("--rule", sim_flags->rule, "Rule literal")->required();
  sim_cmd->add_option("-T,--T", *sim_T, "Number of sampling periods")->required();
  sim_cmd->add_option("--reps", *sim_reps, "Replications")->required();
  sim_cmd->add_option("--seed", *sim_seed, "Base seed (required: no hidden entropy)")
      ->required();
  sim_cmd->add_flag("--empirical-only", *sim_empirical,
                    "Skip the exact comparison (lifts the enumeration cap)");
  sim_cmd->add_option("--format", sim_flags->format, "table|csv|json");
  sim_cmd->callback([&, sim_flags, sim_T, sim_reps, sim_seed, sim_empirical] {
    SimulationConfig config;
    config.rule = require_builtin(load_rule(sim_flags->rule), "simulate");
    config.T = *sim_T;
    config.replications = *sim_reps;
    config.base_seed = *sim_seed;
    config.compare_exact = !*sim_empirical;
    config.cap = enumeration_cap();
    const SimulationReport report = simulate(config);
    if (sim_flags->format == "json") {
      out << dump_json(json_of(report), "simulate/v1");
    } else if (sim_flags->format == "csv") {
      out << report_to_csv(report);
    } else {
      out << "T " << report.T << '\n';
      out << "replications " << report.replications << '\n';
      if (report.has_exact) {
        out << "max_abs_deviation " << format_g12(report.max_abs_deviation) << '\n';
        out << "chi_square " << format_g12(report.chi_square) << '\n';
      }
      out << "novelty_count_mean " << format_g12(report.novelty_count_mean) << '\n';
    }
  });

  // elicit
  auto elicit_protocol = std::make_shared<std::string>();
  auto elicit_utility = std::make_shared<std::string>("linear");
  auto elicit_z = std::make_shared<double>(0.0);
  auto elicit_k = std::make_shared<double>(0.0);
  auto elicit_format = std::make_shared<std::string>("table");
  CLI::App* elicit_cmd = app.add_subcommand(
      "elicit", "Identify rule parameters from certainty equivalents");
  elicit_cmd->add_option("--protocol", *elicit_protocol, "two-param|ewens")
      ->required();
  elicit_cmd->add_option("--utility", *elicit_utility,
                         "linear or a CSV file with columns x,u");
  elicit_cmd->add_option("--z", *elicit_z, "Certainty equivalent of the novelty bet")
      ->required();
  CLI::Option* k_option = elicit_cmd->add_option(
      "--k", *elicit_k, "Certainty equivalent of the repeat-of-object-1 bet");
  elicit_cmd->add_option("--format", *elicit_format, "table|json");
  elicit_cmd->callback([&, elicit_protocol, elicit_utility, elicit_z, elicit_k,
                        elicit_format, k_option] {
    UtilitySpec u = UtilitySpec::linear();
    if (*elicit_utility != "linear") {
      std::ifstream in(*elicit_utility);
      if (!in) {
        throw std::invalid_argument("cannot open utility file '" +
                                    *elicit_utility + "'");
      }
      u = utility_from_csv(in);
    }
    ElicitationObservation obs;
    obs.z = *elicit_z;
    if (k_option->count() > 0) obs.k = *elicit_k;
    nlohmann::json j;
    std::ostringstream table;
    if (*elicit_protocol == "two-param") {
      obs.protocol = Protocol::TwoParameter;
      const ElicitedTwoParameter fitted = elicit_two_parameter(u, obs);
      table << "alpha " << format_g12(fitted.alpha) << '\n';
      table << "theta " << format_g12(fitted.theta) << '\n';
      if (fitted.warning) table << "warning " << *fitted.warning << '\n';
      j = nlohmann::json{{"alpha", fitted.alpha}, {"theta", fitted.theta}};
      if (fitted.warning) j["warning"] = *fitted.warning;
    } else if (*elicit_protocol == "ewens") {
      obs.protocol = Protocol::Ewens;
      const ElicitedTheta fitted = elicit_ewens(u, obs);
      table << "theta " << format_g12(fitted.theta) << '\n';
      if (fitted.warning) table << "warning " << *fitted.warning << '\n';
      j = nlohmann::json{{"theta", fitted.theta}};
      if (fitted.warning) j["warning"] = *fitted.warning;
    } else {
      throw std::invalid_argument("unknown protocol '" + *elicit_protocol +
                                  "' (expected two-param or ewens)");
    }
    if (*elicit_format == "json") {
      out << dump_json(std::move(j), "elicit/v1");
    } else {
      out << table.str();
    }
  });

  // bets
  auto bets_flags = std::make_shared<CommonFlags>();
  CLI::App* bets_cmd = app.add_subcommand(
      "bets", "Risk-neutral indifference pairs implied by a rule");
  bets_cmd->add_option("--rule", bets_flags->rule, "Rule literal")->required();
  bets_cmd->add_option("--partition", bets_flags->partition, "Partition")->required();
  bets_cmd->add_option("--format", bets_flags->format, "table|json");
  bets_cmd->callback([&, bets_flags] {
    const PredictionRule rule = require_builtin(load_rule(bets_flags->rule), "bets");
    const Partition p = Partition::parse(bets_flags->partition);
    const std::vector<IndifferenceBet> bets = risk_neutral_bets(rule, p);
    if (bets_flags->format == "json") {
      nlohmann::json entries = nlohmann::json::array();
      for (const IndifferenceBet& bet : bets) {
        entries.push_back(nlohmann::json{{"object", bet.object},
                                         {"stake", bet.stake},
                                         {"amount", bet.amount}});
      }
      nlohmann::json j{{"partition", json_of(p)}, {"bets", std::move(entries)}};
      out << dump_json(std::move(j), "bets/v1");
    } else {
      for (const IndifferenceBet& bet : bets) {
        if (bet.object == 0) {
          out << "novelty";
        } else {
          out << "object " << bet.object;
        }
        out << " stake " << format_g12(bet.stake) << " amount "
            << format_g12(bet.amount) << '\n';
      }
    }
  });

  // fit
  auto fit_family = std::make_shared<std::string>();
  auto fit_data = std::make_shared<std::string>();
  auto fit_format = std::make_shared<std::string>("table");
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "Maximum-likelihood parameters from observed partitions");
  fit_cmd->add_option("--family", *fit_family, "two-param|ewens")->required();
  fit_cmd->add_option("--data", *fit_data, "File with one partition per line")
      ->required();
  fit_cmd->add_option("--format", *fit_format, "table|json");
  fit_cmd->callback([&, fit_family, fit_data, fit_format] {
    RuleFamily family;
    if (*fit_family == "two-param") {
      family = RuleFamily::TwoParameter;
    } else if (*fit_family == "ewens") {
      family = RuleFamily::Ewens;
    } else {
      throw std::invalid_argument("unknown family '" + *fit_family +
                                  "' (expected two-param or ewens)");
    }
    std::ifstream in(*fit_data);
    if (!in) throw std::invalid_argument("cannot open data file '" + *fit_data + "'");
    const std::vector<Partition> observations = read_observations(in);
    const FitResult result = fit_mle(observations, family);
    if (*fit_format == "json") {
      out << dump_json(json_of(result), "fit/v1");
    } else {
      out << "alpha " << format_g12(result.alpha) << '\n';
      out << "theta " << format_g12(result.theta) << '\n';
      out << "log_likelihood " << format_g12(result.log_likelihood) << '\n';
      out << "evaluations " << result.evaluations << '\n';
      out << "converged " << (result.converged ? "true" : "false") << '\n';
      if (!result.diagnostic.empty()) out << "diagnostic " << result.diagnostic << '\n';
    }
  });

  // lattice
  auto lattice_rule = std::make_shared<std::string>();
  auto lattice_draws = std::make_shared<std::string>();
  auto lattice_format = std::make_shared<std::string>("edges");
  CLI::App* lattice_cmd = app.add_subcommand(
      "lattice", "Unawareness structure generated by a draw sequence");
  lattice_cmd->add_option("--rule", *lattice_rule, "Rule literal")->required();
  lattice_cmd->add_option("--draws", *lattice_draws,
                          "Comma-separated object labels, e.g. r,b")
      ->required();
  lattice_cmd->add_option("--format", *lattice_format, "edges|json");
  lattice_cmd->callback([&, lattice_rule, lattice_draws, lattice_format] {
    const PredictionRule rule =
        require_builtin(load_rule(*lattice_rule), "lattice");
    std::vector<std::string> draws;
    std::size_t start = 0;
    const std::string& text = *lattice_draws;
    while (start <= text.size()) {
      std::size_t comma = text.find(',', start);
      std::string label = text.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (label.empty()) {
        throw std::invalid_argument("draws: empty label in '" + text + "'");
      }
      draws.push_back(std::move(label));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    const AwarenessLattice lattice = build_lattice(draws, rule);
    if (*lattice_format == "json") {
      out << dump_json(json_of(lattice), "lattice/v1");
    } else {
      out << lattice.to_edge_text();
    }
  });

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const PartitionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const RuleError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const CapError& e) {
    err << "error: " << e.what() << " (set " << kCapEnvVar << " to raise it)\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}

}  // namespace novelty
