#include "novelty/partition.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace novelty {

CapError::CapError(int requested, int cap)
    : std::runtime_error("T=" + std::to_string(requested) +
                         " exceeds the enumeration cap " + std::to_string(cap) +
                         "; a cap of at least " + std::to_string(requested) +
                         " is required"),
      requested_(requested),
      cap_(cap) {}

Partition Partition::from_rgs(std::vector<int> rgs) {
  Partition p;
  int running_max = 0;
  for (std::size_t i = 0; i < rgs.size(); ++i) {
    const int label = rgs[i];
    if (i == 0 && label != 1) {
      throw PartitionError("position 1: first label must be 1, got " +
                           std::to_string(label));
    }
    if (label < 1 || label > running_max + 1) {
      throw PartitionError("position " + std::to_string(i + 1) + ": label " +
                           std::to_string(label) +
                           " violates restricted growth (allowed 1.." +
                           std::to_string(running_max + 1) + ")");
    }
    running_max = std::max(running_max, label);
    if (label > static_cast<int>(p.block_sizes_.size())) {
      p.block_sizes_.push_back(1);
    } else {
      ++p.block_sizes_[label - 1];
    }
  }
  p.rgs_ = std::move(rgs);
  return p;
}

namespace {

int parse_int_token(const std::string& tok, std::size_t position) {
  std::size_t begin = tok.find_first_not_of(" \t");
  std::size_t end = tok.find_last_not_of(" \t");
  if (begin == std::string::npos) {
    throw PartitionError("position " + std::to_string(position) +
                         ": empty entry");
  }
  int value = 0;
  const char* first = tok.data() + begin;
  const char* last = tok.data() + end + 1;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw PartitionError("position " + std::to_string(position) + ": '" +
                         tok.substr(begin, end - begin + 1) +
                         "' is not an integer");
  }
  return value;
}

Partition parse_rgs_form(const std::string& text) {
  std::vector<int> rgs;
  std::size_t start = 0;
  std::size_t position = 1;
  while (true) {
    std::size_t comma = text.find(',', start);
    std::string tok = text.substr(start, comma == std::string::npos
                                             ? std::string::npos
                                             : comma - start);
    rgs.push_back(parse_int_token(tok, position++));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return Partition::from_rgs(std::move(rgs));
}

Partition parse_block_form(const std::string& text) {
  // Blocks must appear in order of first appearance and jointly cover
  // {1..T} with no repeats.
  std::vector<std::vector<int>> blocks;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    if (text[i] != '{') {
      throw PartitionError("character " + std::to_string(i + 1) +
                           ": expected '{'");
    }
    std::size_t close = text.find('}', i);
    if (close == std::string::npos) {
      throw PartitionError("character " + std::to_string(i + 1) +
                           ": unterminated block");
    }
    std::string inner = text.substr(i + 1, close - i - 1);
    std::vector<int> block;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = inner.find(',', start);
      std::string tok = inner.substr(start, comma == std::string::npos
                                                ? std::string::npos
                                                : comma - start);
      int value = parse_int_token(tok, block.size() + 1);
      if (!block.empty() && value <= block.back()) {
        throw PartitionError("block " + std::to_string(blocks.size() + 1) +
                             ": times must be strictly ascending");
      }
      block.push_back(value);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!blocks.empty() && block.front() <= blocks.back().front()) {
      throw PartitionError("block " + std::to_string(blocks.size() + 1) +
                           ": blocks must be listed in order of appearance");
    }
    blocks.push_back(std::move(block));
    i = close + 1;
  }
  if (blocks.empty()) {
    throw PartitionError("no blocks found");
  }

  int T = 0;
  for (const auto& b : blocks) T += static_cast<int>(b.size());
  std::vector<int> rgs(T, 0);
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    for (int t : blocks[j]) {
      if (t < 1 || t > T) {
        throw PartitionError("time " + std::to_string(t) +
                             " is outside the contiguous range 1.." +
                             std::to_string(T));
      }
      if (rgs[t - 1] != 0) {
        throw PartitionError("time " + std::to_string(t) +
                             " appears in more than one block");
      }
      rgs[t - 1] = static_cast<int>(j) + 1;
    }
  }
  // Every time covered (zero entries would mean a gap).
  for (int t = 1; t <= T; ++t) {
    if (rgs[t - 1] == 0) {
      throw PartitionError("time " + std::to_string(t) +
                           " is missing (times must be contiguous 1..T)");
    }
  }
  return Partition::from_rgs(std::move(rgs));
}

}  // namespace

Partition Partition::parse(const std::string& text) {
  std::size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return Partition();  // empty history
  std::size_t end = text.find_last_not_of(" \t\r\n");
  std::string body = text.substr(begin, end - begin + 1);
  if (body.front() == '{') return parse_block_form(body);
  return parse_rgs_form(body);
}

int Partition::block_size(int j) const {
  if (j < 1 || j > num_blocks()) {
    throw PartitionError("block index " + std::to_string(j) +
                         " out of range 1.." + std::to_string(num_blocks()));
  }
  return block_sizes_[j - 1];
}

std::vector<std::vector<int>> Partition::blocks() const {
  std::vector<std::vector<int>> out(block_sizes_.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j].reserve(block_sizes_[j]);
  for (int t = 1; t <= T(); ++t) out[rgs_[t - 1] - 1].push_back(t);
  return out;
}

std::vector<int> Partition::partition_vector() const {
  std::vector<int> a(T(), 0);
  for (int size : block_sizes_) ++a[size - 1];
  return a;
}

Partition Partition::restricted(int t_prime) const {
  if (t_prime < 0 || t_prime > T()) {
    throw PartitionError("restriction time " + std::to_string(t_prime) +
                         " out of range 0.." + std::to_string(T()));
  }
  return from_rgs(std::vector<int>(rgs_.begin(), rgs_.begin() + t_prime));
}

Partition Partition::extended(int label) const {
  const int k = num_blocks();
  if (label < 1 || label > k + 1) {
    throw PartitionError("extension label " + std::to_string(label) +
                         " out of range 1.." + std::to_string(k + 1));
  }
  Partition p(*this);
  p.rgs_.push_back(label);
  if (label == k + 1) {
    p.block_sizes_.push_back(1);
  } else {
    ++p.block_sizes_[label - 1];
  }
  return p;
}

std::vector<Partition> Partition::extensions() const {
  std::vector<Partition> out;
  out.reserve(num_blocks() + 1);
  for (int label = 1; label <= num_blocks() + 1; ++label) {
    out.push_back(extended(label));
  }
  return out;
}

bool Partition::is_prefix_of(const Partition& bigger) const {
  if (T() > bigger.T()) return false;
  return std::equal(rgs_.begin(), rgs_.end(), bigger.rgs_.begin());
}

std::string Partition::to_rgs_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < rgs_.size(); ++i) {
    if (i) os << ',';
    os << rgs_[i];
  }
  return os.str();
}

std::string Partition::to_block_string() const {
  std::ostringstream os;
  for (const auto& block : blocks()) {
    os << '{';
    for (std::size_t i = 0; i < block.size(); ++i) {
      if (i) os << ',';
      os << block[i];
    }
    os << '}';
  }
  return os.str();
}

void for_each_rgs(int T,
                  const std::function<void(const std::vector<int>&)>& visit) {
  if (T < 0) throw PartitionError("T must be nonnegative");
  std::vector<int> rgs(T, 1);
  if (T == 0) {
    visit(rgs);
    return;
  }
  // Lexicographic successor: bump the rightmost position that may still
  // grow, reset everything after it to 1.
  std::vector<int> prefix_max(T, 1);  // max of rgs[0..i-1]; entry 0 unused
  while (true) {
    visit(rgs);
    int t = T - 1;
    for (; t >= 1; --t) {
      if (rgs[t] <= prefix_max[t]) break;
    }
    if (t < 1) return;
    ++rgs[t];
    for (int s = t + 1; s < T; ++s) {
      rgs[s] = 1;
      prefix_max[s] = std::max(prefix_max[s - 1], rgs[s - 1]);
    }
  }
}

std::vector<Partition> enumerate_partitions(int T, int cap) {
  if (T > cap) throw CapError(T, cap);
  std::vector<Partition> out;
  for_each_rgs(T, [&](const std::vector<int>& rgs) {
    out.push_back(Partition::from_rgs(rgs));
  });
  return out;
}

}  // namespace novelty
