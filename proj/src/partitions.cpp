#include "enthier/partitions.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace enthier {

// ---------------------------------------------------------------------------
// KPartition

int KPartition::n() const {
  int count = 0;
  for (const auto& b : blocks) count += static_cast<int>(b.size());
  return count;
}

void KPartition::validate(int n) const {
  if (blocks.empty()) throw InvalidPartition("partition has no blocks");
  std::vector<char> seen(n, 0);
  int prev_front = 0;
  for (const auto& b : blocks) {
    if (b.empty()) throw InvalidPartition("partition contains an empty block");
    if (b.front() <= prev_front) {
      throw InvalidPartition("blocks must be ordered by smallest element");
    }
    prev_front = b.front();
    int prev = 0;
    for (int e : b) {
      if (e < 1 || e > n) {
        throw InvalidPartition("element " + std::to_string(e) + " outside {1.." +
                               std::to_string(n) + "}");
      }
      if (e <= prev) throw InvalidPartition("block elements must be strictly increasing");
      if (seen[e - 1]) throw InvalidPartition("element " + std::to_string(e) + " repeated");
      seen[e - 1] = 1;
      prev = e;
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw InvalidPartition("element " + std::to_string(i + 1) + " not covered");
    }
  }
}

KPartition KPartition::canonical(std::vector<std::vector<int>> blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const std::vector<int>& x, const std::vector<int>& y) {
              return x.front() < y.front();
            });
  return KPartition{std::move(blocks)};
}

std::string KPartition::to_string() const {
  bool wide = false;
  for (const auto& b : blocks) {
    for (int e : b) {
      if (e >= 10) wide = true;
    }
  }
  std::ostringstream os;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) os << '|';
    for (std::size_t j = 0; j < blocks[i].size(); ++j) {
      if (j && wide) os << ',';
      os << blocks[i][j];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// PartitionEnumerator

PartitionEnumerator::PartitionEnumerator(int n, int k) : n_(n), k_(k) {
  if (n < 2 || n > 32) {
    throw InvalidInput("partition enumeration supports 2 <= n <= 32, got n = " +
                       std::to_string(n));
  }
  if (k < 2 || k > n) {
    throw InvalidK("block count must satisfy 2 <= k <= n, got k = " + std::to_string(k) +
                   " with n = " + std::to_string(n));
  }
  // Smallest string with exactly k classes: zeros, then one of each new class.
  a_.assign(n_, 0);
  for (int j = 0; j < k_ - 1; ++j) {
    a_[n_ - (k_ - 1) + j] = j + 1;
  }
}

void PartitionEnumerator::fill_min_suffix(int from) {
  int used = 0;
  for (int i = 0; i < from; ++i) used = std::max(used, a_[i]);
  ++used;  // classes in {0..max} inclusive
  for (int j = from; j < n_; ++j) {
    int need = k_ - used;
    int slots = n_ - j;
    if (slots > need) {
      a_[j] = 0;
    } else {
      a_[j] = used;  // open a new class; forced to reach k in time
      ++used;
    }
  }
}

void PartitionEnumerator::next() {
  if (!valid_) return;
  // Prefix maxima of the current string.
  std::vector<int> pm(n_);
  pm[0] = a_[0];
  for (int i = 1; i < n_; ++i) pm[i] = std::max(pm[i - 1], a_[i]);

  for (int i = n_ - 1; i >= 1; --i) {
    int amax = std::min(pm[i - 1] + 1, k_ - 1);
    if (a_[i] >= amax) continue;
    int c = a_[i] + 1;
    int used = std::max(pm[i - 1], c) + 1;
    if (used + (n_ - 1 - i) < k_) continue;  // suffix cannot reach k classes
    a_[i] = c;
    fill_min_suffix(i + 1);
    return;
  }
  valid_ = false;
}

KPartition PartitionEnumerator::current() const {
  std::vector<std::vector<int>> blocks(k_);
  for (int i = 0; i < n_; ++i) blocks[a_[i]].push_back(i + 1);
  return KPartition{std::move(blocks)};
}

void PartitionEnumerator::block_masks(std::vector<std::uint32_t>& masks) const {
  masks.assign(k_, 0);
  for (int i = 0; i < n_; ++i) masks[a_[i]] |= (1u << i);
}

std::vector<KPartition> enumerate_k_partitions(int n, int k) {
  std::vector<KPartition> out;
  for (PartitionEnumerator en(n, k); en.valid(); en.next()) {
    out.push_back(en.current());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Counting

std::uint64_t stirling2(int n, int k) {
  if (n < 2 || n > 25) {
    throw InvalidInput("partition counting supports 2 <= n <= 25, got n = " +
                       std::to_string(n));
  }
  if (k < 2 || k > n) {
    throw InvalidK("block count must satisfy 2 <= k <= n, got k = " + std::to_string(k) +
                   " with n = " + std::to_string(n));
  }
  using boost::multiprecision::cpp_int;
  auto factorial = [](int m) {
    cpp_int f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
  };
  const cpp_int fkm1 = factorial(k - 1);
  cpp_int acc = 0;
  for (int t = 1; t <= k; ++t) {
    cpp_int binom = fkm1 / (factorial(t - 1) * factorial(k - t));
    cpp_int term = binom * boost::multiprecision::pow(cpp_int(t), n - 1);
    if ((k - t) % 2 == 0) {
      acc += term;
    } else {
      acc -= term;
    }
  }
  if (acc % fkm1 != 0) {
    throw std::logic_error("partition count alternating sum not divisible by (k-1)!");
  }
  acc /= fkm1;
  if (acc < 0 || acc > cpp_int(std::numeric_limits<std::uint64_t>::max())) {
    throw std::overflow_error("partition count does not fit in 64 bits");
  }
  return acc.convert_to<std::uint64_t>();
}

std::vector<IndexSubset> bipartitions(int n) {
  if (n < 2 || n > 32) {
    throw InvalidInput("bipartition listing supports 2 <= n <= 32, got n = " +
                       std::to_string(n));
  }
  std::vector<IndexSubset> out;
  const std::uint64_t rest = 1ull << (n - 1);
  out.reserve(rest - 1);
  for (std::uint64_t r = 0; r + 1 < rest; ++r) {
    IndexSubset s;
    s.members.push_back(1);
    for (int i = 0; i < n - 1; ++i) {
      if (r & (1ull << i)) s.members.push_back(i + 2);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace enthier
