#include "novelty/lattice.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace novelty {

Partition partition_from_labels(const std::vector<std::string>& labels) {
  std::map<std::string, int> block_of;
  std::vector<int> rgs;
  rgs.reserve(labels.size());
  for (const std::string& label : labels) {
    auto [it, inserted] = block_of.emplace(label, block_of.size() + 1);
    rgs.push_back(it->second);
  }
  return Partition::from_rgs(std::move(rgs));
}

std::string AwarenessSpace::name() const {
  std::string out = "{";
  for (const std::string& object : objects) {
    out += object;
    out += ',';
  }
  out += kNoveltyMark;
  out += '}';
  return out;
}

namespace {

// Object sets are represented as sorted vectors of indices into the
// first-appearance label order, which keeps every rendering deterministic.
using ObjectSet = std::vector<int>;

ObjectSet set_union(const ObjectSet& a, const ObjectSet& b) {
  ObjectSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

ObjectSet set_intersection(const ObjectSet& a, const ObjectSet& b) {
  ObjectSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

struct PendingSpace {
  bool realized = false;
  bool annotated = false;
  std::vector<double> object_prob;
  double novelty_prob = 0.0;
};

}  // namespace

AwarenessLattice build_lattice(const std::vector<std::string>& draws,
                               const PredictionRule& rule) {
  validate(rule);

  // Distinct labels in order of first appearance.
  std::vector<std::string> label_order;
  std::map<std::string, int> label_index;
  for (const std::string& s : draws) {
    if (label_index.emplace(s, label_order.size()).second) {
      label_order.push_back(s);
    }
  }

  std::map<ObjectSet, PendingSpace> pending;

  const auto annotate = [&](PendingSpace& space,
                            const std::vector<std::string>& history) {
    const Partition p = partition_from_labels(history);
    const PredictiveDistribution dist = predictive(rule, p);
    space.annotated = true;
    space.object_prob = dist.known;
    space.novelty_prob = dist.novelty;
  };

  // Realized prefixes, each annotated with its predictive probabilities.
  // Blocks of the prefix partition appear in the same order as the
  // prefix's distinct labels, so probabilities align with the object set.
  std::vector<std::string> history;
  ObjectSet current;
  for (int t = 0; t <= static_cast<int>(draws.size()); ++t) {
    PendingSpace& space = pending[current];
    space.realized = true;
    annotate(space, history);
    if (t == static_cast<int>(draws.size())) break;
    history.push_back(draws[t]);
    const int idx = label_index.at(draws[t]);
    if (!std::binary_search(current.begin(), current.end(), idx)) {
      current.insert(std::upper_bound(current.begin(), current.end(), idx), idx);
    }
  }

  // One-step counterfactuals: at each prefix, any not-yet-seen label could
  // have been drawn as a novelty instead. A label absent from a prefix
  // first appears later, so it extends the appearance order at the end and
  // the hypothetical partition's blocks stay aligned with the object set.
  history.clear();
  current.clear();
  for (int t = 0; t <= static_cast<int>(draws.size()); ++t) {
    for (int idx = 0; idx < static_cast<int>(label_order.size()); ++idx) {
      if (std::binary_search(current.begin(), current.end(), idx)) continue;
      ObjectSet alternative = current;
      alternative.push_back(idx);  // idx exceeds every element of current
      auto [it, inserted] = pending.emplace(alternative, PendingSpace{});
      if (it->second.realized || it->second.annotated) continue;
      std::vector<std::string> hypothetical = history;
      hypothetical.push_back(label_order[idx]);
      annotate(it->second, hypothetical);
    }
    if (t == static_cast<int>(draws.size())) break;
    history.push_back(draws[t]);
    const int idx = label_index.at(draws[t]);
    if (!std::binary_search(current.begin(), current.end(), idx)) {
      current.insert(std::upper_bound(current.begin(), current.end(), idx), idx);
    }
  }

  // Close under union and intersection.
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<ObjectSet> sets;
    sets.reserve(pending.size());
    for (const auto& [key, value] : pending) sets.push_back(key);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      for (std::size_t j = i + 1; j < sets.size(); ++j) {
        for (ObjectSet candidate :
             {set_union(sets[i], sets[j]), set_intersection(sets[i], sets[j])}) {
          if (pending.emplace(std::move(candidate), PendingSpace{}).second) {
            grew = true;
          }
        }
      }
    }
  }

  // Order spaces by (cardinality, appearance-order contents).
  std::vector<ObjectSet> keys;
  keys.reserve(pending.size());
  for (const auto& [key, value] : pending) keys.push_back(key);
  std::sort(keys.begin(), keys.end(), [](const ObjectSet& a, const ObjectSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });

  AwarenessLattice lattice;
  lattice.spaces_.reserve(keys.size());
  for (const ObjectSet& key : keys) {
    const PendingSpace& src = pending.at(key);
    AwarenessSpace space;
    for (int idx : key) space.objects.push_back(label_order[idx]);
    space.realized = src.realized;
    space.annotated = src.annotated;
    space.object_prob = src.object_prob;
    space.novelty_prob = src.novelty_prob;
    lattice.spaces_.push_back(std::move(space));
  }
  return lattice;
}

int AwarenessLattice::index_of(const std::vector<std::string>& objects) const {
  std::set<std::string> wanted(objects.begin(), objects.end());
  for (std::size_t i = 0; i < spaces_.size(); ++i) {
    std::set<std::string> have(spaces_[i].objects.begin(), spaces_[i].objects.end());
    if (have == wanted) return static_cast<int>(i);
  }
  return -1;
}

bool AwarenessLattice::subset(int i, int j) const {
  const auto& a = spaces_.at(i).objects;
  const auto& b = spaces_.at(j).objects;
  std::set<std::string> super(b.begin(), b.end());
  for (const std::string& object : a) {
    if (!super.count(object)) return false;
  }
  return true;
}

std::vector<std::pair<int, int>> AwarenessLattice::covering_edges() const {
  std::vector<std::pair<int, int>> edges;
  const int n = static_cast<int>(spaces_.size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || !subset(i, j)) continue;
      if (spaces_[i].objects.size() == spaces_[j].objects.size()) continue;
      bool covering = true;
      for (int m = 0; m < n && covering; ++m) {
        if (m == i || m == j) continue;
        if (subset(i, m) && subset(m, j) &&
            spaces_[m].objects.size() > spaces_[i].objects.size() &&
            spaces_[m].objects.size() < spaces_[j].objects.size()) {
          covering = false;
        }
      }
      if (covering) edges.emplace_back(i, j);
    }
  }
  return edges;
}

std::string AwarenessLattice::project(int from, int to,
                                      const std::string& object_or_novelty) const {
  if (!subset(to, from)) {
    throw std::invalid_argument("projection requires the target space to be "
                                "included in the source space");
  }
  if (object_or_novelty == kNoveltyMark) return kNoveltyMark;
  const auto& source = spaces_.at(from).objects;
  if (std::find(source.begin(), source.end(), object_or_novelty) == source.end()) {
    throw std::invalid_argument("object '" + object_or_novelty +
                                "' is not in the source space");
  }
  const auto& target = spaces_.at(to).objects;
  if (std::find(target.begin(), target.end(), object_or_novelty) != target.end()) {
    return object_or_novelty;
  }
  return kNoveltyMark;
}

std::string AwarenessLattice::to_edge_text() const {
  std::ostringstream os;
  for (const auto& [sub, super] : covering_edges()) {
    os << spaces_[sub].name() << " -> " << spaces_[super].name() << '\n';
  }
  return os.str();
}

}  // namespace novelty
