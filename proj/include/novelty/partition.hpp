#pragma once

#include <compare>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace novelty {

/// Raised on malformed partition text or violated partition invariants.
class PartitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an enumeration would exceed the configured cap.
class CapError : public std::runtime_error {
 public:
  CapError(int requested, int cap);
  int requested() const { return requested_; }
  int cap() const { return cap_; }

 private:
  int requested_;
  int cap_;
};

/// Default bound on exhaustive enumeration (Bell(12) = 4,213,597 partitions).
inline constexpr int kDefaultEnumerationCap = 12;

/**
 * Partition of sampling times {1..T} in order-of-appearance form.
 *
 * The assignment c_1..c_T is a restricted growth sequence: c_1 = 1 and
 * every later label is at most one above the running maximum. Block j
 * collects the times at which the j-th distinct object was drawn, so
 * "the j-th known object" is well defined without naming objects.
 * T = 0 encodes the empty history before anything has been sampled.
 */
class Partition {
 public:
  Partition() = default;  // empty history

  /// Validates the restricted-growth property; throws PartitionError
  /// naming the offending position.
  static Partition from_rgs(std::vector<int> rgs);

  /// Accepts either an RGS form "1,1,2" or a block form "{1,2}{3}".
  /// The empty string parses to the empty history.
  static Partition parse(const std::string& text);

  int T() const { return static_cast<int>(rgs_.size()); }
  int num_blocks() const { return static_cast<int>(block_sizes_.size()); }

  /// Size of the j-th block in order of appearance (j is 1-based).
  int block_size(int j) const;
  const std::vector<int>& rgs() const { return rgs_; }
  const std::vector<int>& block_sizes() const { return block_sizes_; }

  /// Sampling times per block, each ascending, blocks in order of appearance.
  std::vector<std::vector<int>> blocks() const;

  /// Frequency of frequencies: entry i-1 counts blocks of cardinality i,
  /// for i = 1..T.
  std::vector<int> partition_vector() const;

  /// The prefix c_1..c_{T'} ("cutting off" all times after T').
  Partition restricted(int t_prime) const;

  /// Appends time T+1 with the given block label (1..k for a known block,
  /// k+1 for a novel object).
  Partition extended(int label) const;

  /// The k+1 one-step successors: time T+1 appended to each existing block
  /// in order, then the novelty extension last.
  std::vector<Partition> extensions() const;

  /// True iff the other partition restricted to this T equals this partition.
  bool is_prefix_of(const Partition& bigger) const;

  std::string to_rgs_string() const;    // canonical output form
  std::string to_block_string() const;  // "{1,2}{3}"

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.rgs_ == b.rgs_;
  }
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    return a.rgs_ <=> b.rgs_;
  }

 private:
  std::vector<int> rgs_;
  std::vector<int> block_sizes_;
};

/// Visits every restricted growth sequence of length T exactly once, in
/// lexicographic order. The vector passed to the visitor is reused between
/// calls. T = 0 visits the empty sequence once.
void for_each_rgs(int T, const std::function<void(const std::vector<int>&)>& visit);

/// All partitions of {1..T} in lexicographic RGS order (count = Bell(T)).
/// Throws CapError when T exceeds the cap.
std::vector<Partition> enumerate_partitions(int T, int cap = kDefaultEnumerationCap);

}  // namespace novelty
