#pragma once

#include <optional>
#include <string>
#include <vector>

#include "novelty/partition.hpp"
#include "novelty/rules.hpp"

namespace novelty {

/// The marker for "some object not yet conceived of"; member of every space.
inline constexpr const char* kNoveltyMark = "•";  // "•"

/// Partition of sampling times induced by label equality of the draws.
Partition partition_from_labels(const std::vector<std::string>& labels);

/**
 * Subjective state space: the objects the decision maker can currently
 * conceive of, plus the implicit novelty marker. Spaces on the realized
 * prefix path (and their one-step counterfactual siblings) carry the
 * rule's predictive probabilities.
 */
struct AwarenessSpace {
  std::vector<std::string> objects;  // ordered by first appearance in the draws
  bool realized = false;
  bool annotated = false;
  std::vector<double> object_prob;  // aligned with objects when annotated
  double novelty_prob = 0.0;

  std::string name() const;  // "{r,b,•}"
};

/**
 * Complete lattice over the object sets generated by the realized prefixes
 * and their one-step counterfactual draws, closed under union and
 * intersection. Projections send shared objects to themselves and
 * everything else to the novelty marker.
 */
class AwarenessLattice {
 public:
  const std::vector<AwarenessSpace>& spaces() const { return spaces_; }

  /// Index of the space with exactly these objects (order-insensitive),
  /// or -1 when absent.
  int index_of(const std::vector<std::string>& objects) const;

  bool subset(int i, int j) const;  // spaces[i] included in spaces[j]

  /// Covering pairs (sub, super) of the inclusion order, both indices into
  /// spaces().
  std::vector<std::pair<int, int>> covering_edges() const;

  /// Projection from the richer space onto the poorer one. Throws when the
  /// spaces are not ordered or the element is unknown in `from`.
  std::string project(int from, int to, const std::string& object_or_novelty) const;

  /// One covering edge per line: "sub -> super".
  std::string to_edge_text() const;

 private:
  friend AwarenessLattice build_lattice(const std::vector<std::string>& draws,
                                        const PredictionRule& rule);
  std::vector<AwarenessSpace> spaces_;  // sorted by (size, appearance order)
};

/// Builds the unawareness structure generated by the draw sequence and
/// annotates it with the rule's predictive probabilities. Counterfactual
/// spaces one step off each realized prefix are annotated from their
/// hypothetical partitions; spaces added only by lattice closure carry no
/// annotation.
AwarenessLattice build_lattice(const std::vector<std::string>& draws,
                               const PredictionRule& rule);

}  // namespace novelty
