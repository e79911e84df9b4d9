#pragma once

#include <json.hpp>

#include "novelty/checkers.hpp"
#include "novelty/elicitation.hpp"
#include "novelty/lattice.hpp"
#include "novelty/measures.hpp"
#include "novelty/partition.hpp"
#include "novelty/rules.hpp"
#include "novelty/urn.hpp"

namespace novelty {

// Canonical JSON renderings used by the CLI and the file formats. Kept in
// one translation unit so the vendored header is compiled once.

nlohmann::json json_of(const Partition& p);  // {"T": int, "rgs": [int...]}
nlohmann::json json_of(const PredictiveDistribution& dist);
nlohmann::json json_of(const PartitionMeasure& m);  // {"T":.., "entries":[..]}
nlohmann::json json_of(const CheckReport& report);
nlohmann::json json_of(const SimulationReport& report);
nlohmann::json json_of(const FitResult& result);
nlohmann::json json_of(const AwarenessLattice& lattice);

}  // namespace novelty
