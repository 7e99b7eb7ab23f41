// Tests for k-partition enumeration: ordering, completeness against an
// exhaustive oracle, Stirling counts, and input validation.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "enthier/errors.hpp"
#include "enthier/partitions.hpp"
#include "oracles.hpp"

using namespace enthier;

namespace {

std::vector<std::string> enumerate_strings(int n, int k) {
  std::vector<std::string> out;
  for (const auto& p : enumerate_k_partitions(n, k)) out.push_back(p.to_string());
  return out;
}

}  // namespace

TEST_CASE("enumeration order for n=4, k=2 is the documented refinement order") {
  std::vector<std::string> expected = {
      "123|4", "124|3", "12|34", "134|2", "13|24", "14|23", "1|234",
  };
  CHECK(enumerate_strings(4, 2) == expected);
}

TEST_CASE("first partition groups the leading subsystems") {
  CHECK(enumerate_k_partitions(5, 3).front().to_string() == "123|4|5");
  CHECK(enumerate_k_partitions(6, 2).front().to_string() == "12345|6");
  CHECK(enumerate_k_partitions(4, 4).front().to_string() == "1|2|3|4");
}

TEST_CASE("enumeration is complete and duplicate-free against the exhaustive oracle") {
  for (int n = 2; n <= 6; ++n) {
    for (int k = 2; k <= n; ++k) {
      auto ours = enumerate_k_partitions(n, k);
      std::set<std::vector<std::vector<int>>> seen;
      for (const auto& p : ours) seen.insert(p.blocks);
      CHECK(seen.size() == ours.size());  // no duplicates
      CHECK(seen == oracle::all_partitions(n, k));
    }
  }
}

TEST_CASE("enumeration count equals the Stirling number") {
  for (int n = 2; n <= 8; ++n) {
    for (int k = 2; k <= n; ++k) {
      CHECK(enumerate_k_partitions(n, k).size() == stirling2(n, k));
    }
  }
}

TEST_CASE("known partition counts for n=5..8") {
  // Row n lists |T_k| for k = 2..n.
  CHECK(stirling2(5, 2) == 15u);
  CHECK(stirling2(5, 3) == 25u);
  CHECK(stirling2(5, 4) == 10u);
  CHECK(stirling2(5, 5) == 1u);

  CHECK(stirling2(6, 2) == 31u);
  CHECK(stirling2(6, 3) == 90u);
  CHECK(stirling2(6, 4) == 65u);
  CHECK(stirling2(6, 5) == 15u);
  CHECK(stirling2(6, 6) == 1u);

  CHECK(stirling2(7, 2) == 63u);
  CHECK(stirling2(7, 3) == 301u);
  CHECK(stirling2(7, 4) == 350u);
  CHECK(stirling2(7, 5) == 140u);
  CHECK(stirling2(7, 6) == 21u);
  CHECK(stirling2(7, 7) == 1u);

  CHECK(stirling2(8, 2) == 127u);
  CHECK(stirling2(8, 3) == 966u);
  CHECK(stirling2(8, 4) == 1701u);
  CHECK(stirling2(8, 5) == 1050u);
  CHECK(stirling2(8, 6) == 266u);
  CHECK(stirling2(8, 7) == 28u);
  CHECK(stirling2(8, 8) == 1u);
}

TEST_CASE("bipartition count is 2^(n-1) - 1") {
  for (int n = 2; n <= 12; ++n) {
    CHECK(stirling2(n, 2) == (1ull << (n - 1)) - 1ull);
  }
}

TEST_CASE("closed-form Stirling numbers match the recurrence up to n=25") {
  for (int n = 2; n <= 25; ++n) {
    for (int k = 2; k <= n; ++k) {
      CHECK(stirling2(n, k) == oracle::stirling2_recurrence(n, k));
    }
  }
}

TEST_CASE("stirling2 rejects out-of-range arguments") {
  CHECK_THROWS_AS(stirling2(1, 1), InvalidInput);
  CHECK_THROWS_AS(stirling2(5, 1), InvalidK);
  CHECK_THROWS_AS(stirling2(5, 6), InvalidK);
  CHECK_THROWS_AS(stirling2(26, 2), InvalidInput);  // would overflow uint64 anyway
}

TEST_CASE("enumerator rejects out-of-range arguments") {
  CHECK_THROWS_AS(PartitionEnumerator(1, 1), InvalidInput);
  CHECK_THROWS_AS(PartitionEnumerator(33, 2), InvalidInput);
  CHECK_THROWS_AS(PartitionEnumerator(4, 1), InvalidK);
  CHECK_THROWS_AS(PartitionEnumerator(4, 5), InvalidK);
}

TEST_CASE("restricted growth strings are emitted in strictly increasing lex order") {
  PartitionEnumerator e(6, 3);
  std::vector<int> prev;
  std::size_t count = 0;
  while (e.valid()) {
    std::vector<int> cur(e.rgs().begin(), e.rgs().end());
    if (!prev.empty()) CHECK(std::lexicographical_compare(prev.begin(), prev.end(),
                                                          cur.begin(), cur.end()));
    prev = cur;
    ++count;
    e.next();
  }
  CHECK(count == stirling2(6, 3));
}

TEST_CASE("block masks cover every subsystem exactly once") {
  PartitionEnumerator e(5, 3);
  std::vector<std::uint32_t> masks;
  while (e.valid()) {
    e.block_masks(masks);
    REQUIRE(masks.size() == 3);
    std::uint32_t all = 0;
    for (std::uint32_t m : masks) {
      CHECK(m != 0u);
      CHECK((all & m) == 0u);  // disjoint
      all |= m;
    }
    CHECK(all == 0b11111u);
    e.next();
  }
}

TEST_CASE("partition formatting uses digits for small indices and commas beyond 9") {
  KPartition p{{{1, 2}, {3, 4}}};
  CHECK(p.to_string() == "12|34");
  KPartition wide{{{1, 10}, {2, 3, 4, 5, 6, 7, 8, 9, 11}}};
  CHECK(wide.to_string() == "1,10|2,3,4,5,6,7,8,9,11");
}

TEST_CASE("partition validation enforces canonical form") {
  KPartition ok{{{1, 3}, {2}}};
  ok.validate(3);
  CHECK(ok.k() == 2);
  CHECK(ok.n() == 3);

  KPartition empty_block{{{1, 2}, {}}};
  CHECK_THROWS_AS(empty_block.validate(2), InvalidPartition);
  KPartition missing{{{1}, {2}}};
  CHECK_THROWS_AS(missing.validate(3), InvalidPartition);
  KPartition repeated{{{1, 2}, {2, 3}}};
  CHECK_THROWS_AS(repeated.validate(3), InvalidPartition);
  KPartition bad_order{{{2, 3}, {1}}};  // block leaders not increasing
  CHECK_THROWS_AS(bad_order.validate(3), InvalidPartition);
  KPartition unsorted{{{2, 1}, {3}}};  // members not ascending within a block
  CHECK_THROWS_AS(unsorted.validate(3), InvalidPartition);

  KPartition c = KPartition::canonical({{2, 3}, {1}});
  c.validate(3);
  CHECK(c.to_string() == "1|23");
}

TEST_CASE("bipartitions list one side per cut, smallest-index side first") {
  auto cuts = bipartitions(3);
  REQUIRE(cuts.size() == 3);
  CHECK(cuts[0].to_string() == "{1}");
  CHECK(cuts[1].to_string() == "{1,2}");
  CHECK(cuts[2].to_string() == "{1,3}");
  for (int n = 2; n <= 10; ++n) {
    CHECK(bipartitions(n).size() == (1u << (n - 1)) - 1u);
    for (const auto& c : bipartitions(n)) CHECK(c.contains(1));
  }
}
