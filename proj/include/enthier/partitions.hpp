#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enthier/errors.hpp"
#include "enthier/state.hpp"

namespace enthier {

// A set partition of {1..n} into non-empty blocks, stored canonically:
// indices ascending within each block, blocks ordered by smallest element.
struct KPartition {
  std::vector<std::vector<int>> blocks;

  int k() const { return static_cast<int>(blocks.size()); }
  int n() const;

  // Throws InvalidPartition unless blocks form a canonical partition of {1..n}.
  void validate(int n) const;

  // Canonical form of an arbitrary block list (sorts within blocks, then
  // orders blocks by smallest element).  Does not validate coverage.
  static KPartition canonical(std::vector<std::vector<int>> blocks);

  // Blocks joined with '|'.  Indices within a block are concatenated when
  // every index is a single digit ("1|23"), comma-separated otherwise
  // ("1,10|2").
  std::string to_string() const;

  bool operator==(const KPartition& other) const { return blocks == other.blocks; }
};

// Streams the partitions of {1..n} into exactly k blocks in lexicographic
// order of their restricted growth strings, without materializing the list.
// A restricted growth string a[0..n-1] assigns element i+1 to block a[i],
// with a[0] = 0 and a[i] <= max(a[0..i-1]) + 1.
class PartitionEnumerator {
 public:
  // Requires 2 <= k <= n (InvalidK).
  PartitionEnumerator(int n, int k);

  // False once the stream is exhausted.
  bool valid() const { return valid_; }
  // Advances to the next partition; no-op once exhausted.
  void next();

  const std::vector<int>& rgs() const { return a_; }
  KPartition current() const;
  // Bitmask per block (bit i-1 set for element i); masks[b] matches block b
  // of current().  Requires n <= 32.
  void block_masks(std::vector<std::uint32_t>& masks) const;

  int n() const { return n_; }
  int k() const { return k_; }

 private:
  void fill_min_suffix(int from);

  int n_, k_;
  bool valid_ = true;
  std::vector<int> a_;
};

// All partitions of {1..n} into exactly k blocks, in enumerator order.
std::vector<KPartition> enumerate_k_partitions(int n, int k);

// Number of partitions of {1..n} into exactly k blocks (Stirling number of
// the second kind), computed exactly via the alternating sum
//   sum_{t=1}^{k} (-1)^{k-t} binom(k-1, t-1) t^{n-1} / (k-1)!
// in arbitrary precision.  Requires 2 <= k <= n and n <= 25; throws
// std::overflow_error if the count does not fit in 64 bits.
std::uint64_t stirling2(int n, int k);

// The 2^{n-1} - 1 bipartition cuts of {1..n}, represented by the side
// containing subsystem 1, ordered by ascending bitmask of the remaining
// members.  Requires 2 <= n <= 32.
std::vector<IndexSubset> bipartitions(int n);

}  // namespace enthier
