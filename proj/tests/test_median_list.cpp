#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "rqk/median_list.hpp"
#include "rqk/oracle.hpp"
#include "rqk/workload.hpp"

namespace rqk {
namespace {

using testing::ids;
using testing::list_l1;
using workload::LabelDist;

template <class Index>
void expect_median(const LabeledList& list, const Index& idx, ListRange r) {
  const auto got = idx.query(r);
  const auto want = oracle::median(list.slice(r));
  ASSERT_EQ(got.value, want.value) << "range [" << r.i << ", " << r.j << "]";
  ASSERT_EQ(got.rank, want.rank);
}

std::size_t ceil_log(std::size_t n, std::size_t b) {
  std::size_t h = 0;
  for (std::size_t z = 1; z < n; z *= b) ++h;
  return h;
}

// --- block index -----------------------------------------------------------

TEST(MedianBlock, PersistentTreesAndWindowExample) {
  const auto idx = MedianBlockIndex::build(list_l1(), 3);
  ASSERT_EQ(idx.top_block_size(), 4u);
  // Block 1 from its second element: positions 2..4.
  auto suffix = idx.top_suffix(0, 1);
  EXPECT_EQ(suffix, ids({1, 1, 4}));
  EXPECT_EQ(idx.top_prefix(1, 3), ids({2, 5, 6, 9}));
  const auto window = idx.top_window(0, 2);
  EXPECT_EQ(std::vector<Label>(window.begin(), window.end()), ids({2, 5, 6, 9}));
  EXPECT_EQ(idx.top_omitted_low(0, 2), 0u);
}

TEST(MedianBlock, QueryExamples) {
  const auto l = list_l1();
  const auto idx = MedianBlockIndex::build(l, 3);
  EXPECT_EQ(idx.query({2, 10}).value, Label{4});
  EXPECT_EQ(idx.query({1, 4}).value, Label{3});
  EXPECT_EQ(idx.query({7, 7}).value, Label{2});
}

TEST(MedianBlock, FullBranchingIsBaseCase) {
  const auto l = list_l1();
  const auto idx = MedianBlockIndex::build(l, l.size());
  EXPECT_EQ(idx.depth(), 1u);
  EXPECT_EQ(idx.persistent_nodes(), 0u);
  for (std::size_t i = 1; i <= l.size(); ++i) {
    for (std::size_t j = i; j <= l.size(); ++j) expect_median(l, idx, {i, j});
  }
}

TEST(MedianBlock, Errors) {
  try {
    MedianBlockIndex::build(list_l1(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::bad_branching);
  }
  EXPECT_THROW(MedianBlockIndex::build(list_l1(), 12), Error);
  try {
    MedianBlockIndex::build(LabeledList{}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::empty_input);
  }
}

// Fixed C in nodes <= C n log2(n + 2) (log_b n + 1).
constexpr double kBlockNodeConstant = 2.0;

TEST(MedianBlock, WindowsAreSortedRankWindows) {
  workload::Rng rng(41);
  const auto list = workload::make_list(150, 12, LabelDist::zipf, rng);
  for (std::size_t b : {2u, 3u, 5u}) {
    const auto idx = MedianBlockIndex::build(list, b);
    const std::size_t s = idx.top_block_size();
    const std::size_t blocks = (list.size() + s - 1) / s;
    for (std::size_t bi = 0; bi < blocks; ++bi) {
      for (std::size_t bj = bi + 2; bj < blocks; ++bj) {
        auto middle = std::vector<Label>(list.slice({(bi + 1) * s + 1, bj * s}).begin(),
                                         list.slice({(bi + 1) * s + 1, bj * s}).end());
        std::sort(middle.begin(), middle.end());
        const auto window = idx.top_window(bi, bj);
        const std::size_t omitted = idx.top_omitted_low(bi, bj);
        ASSERT_TRUE(std::is_sorted(window.begin(), window.end()));
        ASSERT_TRUE(std::equal(window.begin(), window.end(), middle.begin() + static_cast<std::ptrdiff_t>(omitted)));
        if (middle.size() > 4 * s + 1) {
          EXPECT_EQ(window.size(), 4 * s + 1);
        }
      }
    }
  }
}

TEST(MedianBlock, ExhaustiveSmallLists) {
  workload::Rng rng(42);
  for (std::size_t n : {1u, 2u, 9u, 33u, 100u, 200u}) {
    for (auto dist : {LabelDist::uniform, LabelDist::zipf}) {
      const auto list = workload::make_list(n, workload::sqrt_alphabet(n), dist, rng);
      for (std::size_t b : {std::size_t{2}, std::size_t{3}, std::size_t{7}, n}) {
        if (b < 2 || b > std::max<std::size_t>(n, 2)) continue;
        const auto idx = MedianBlockIndex::build(list, b);
        const double logb = n > 1 ? std::log(static_cast<double>(n)) / std::log(static_cast<double>(b)) : 0.0;
        EXPECT_LE(static_cast<double>(idx.persistent_nodes()),
                  kBlockNodeConstant * n * std::log2(n + 2.0) * (logb + 1.0));
        EXPECT_LE(idx.depth(), ceil_log(n, b) + 1);
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = i; j <= n; ++j) expect_median(list, idx, {i, j});
        }
      }
    }
  }
}

TEST(MedianBlock, SampledLargeList) {
  workload::Rng rng(43);
  const auto list = workload::make_list(4096, 64, LabelDist::uniform, rng);
  for (std::size_t b : {2u, 16u}) {
    const auto idx = MedianBlockIndex::build(list, b);
    for (auto r : workload::uniform_ranges(list.size(), 2000, rng)) expect_median(list, idx, r);
  }
}

// --- range tree ------------------------------------------------------------

TEST(RangeTree, Structure) {
  const auto l = list_l1();
  const auto idx = RangeTreeIndex::build(l, 2);
  EXPECT_EQ(idx.height(), 4u);
  const auto root = idx.level(idx.height());
  EXPECT_EQ(std::vector<Label>(root.begin(), root.end()), ids({1, 1, 2, 3, 3, 4, 5, 5, 5, 6, 9}));
  const auto leaves = idx.level(0);
  EXPECT_TRUE(std::equal(leaves.begin(), leaves.end(), l.labels().begin()));
  EXPECT_LE(idx.stored_elements(), 11u * (4 + 1));
}

TEST(RangeTree, DecompositionExamples) {
  const auto l = list_l1();
  const auto idx = RangeTreeIndex::build(l, 2);
  auto full = idx.canonical_decomposition({1, 11});
  ASSERT_EQ(full.size(), 1u);
  EXPECT_EQ(full[0].size(), 11u);
  auto single = idx.canonical_decomposition({5, 5});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0][0], Label{5});
  std::vector<Label> merged;
  for (auto part : idx.canonical_decomposition({2, 10})) merged.insert(merged.end(), part.begin(), part.end());
  std::sort(merged.begin(), merged.end());
  EXPECT_EQ(merged, ids({1, 1, 2, 3, 4, 5, 5, 6, 9}));
}

TEST(RangeTree, QueryExamples) {
  const auto l = list_l1();
  const auto idx = RangeTreeIndex::build(l, 2);
  EXPECT_EQ(idx.query({2, 10}).value, Label{4});
  EXPECT_EQ(idx.query({1, 11}).value, Label{4});
  EXPECT_EQ(idx.query({5, 5}).value, Label{5});
}

TEST(RangeTree, DecompositionCoversRangeInOrder) {
  workload::Rng rng(44);
  for (std::size_t n : {1u, 7u, 64u, 200u}) {
    const auto list = workload::make_list(n, 10, LabelDist::uniform, rng);
    for (std::size_t b : {2u, 3u, 4u, 16u}) {
      if (b > std::max<std::size_t>(n, 2)) continue;
      const auto idx = RangeTreeIndex::build(list, b);
      for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = i; j <= n; ++j) {
          // Chunks are views into level arrays; map each back to positions.
          std::size_t next = i;
          for (auto part : idx.canonical_decomposition({i, j})) {
            bool found = false;
            for (std::size_t h = 0; h <= idx.height() && !found; ++h) {
              const auto level = idx.level(h);
              if (part.data() >= level.data() && part.data() < level.data() + level.size()) {
                const auto start = static_cast<std::size_t>(part.data() - level.data()) + 1;
                ASSERT_EQ(start, next);
                ASSERT_TRUE(std::is_sorted(part.begin(), part.end()));
                next += part.size();
                found = true;
              }
            }
            ASSERT_TRUE(found);
          }
          ASSERT_EQ(next, j + 1);
        }
      }
    }
  }
}

TEST(RangeTree, BinaryDecompositionBound) {
  workload::Rng rng(45);
  for (std::size_t n : {2u, 11u, 64u, 200u}) {
    const auto list = workload::make_list(n, 10, LabelDist::uniform, rng);
    const auto idx = RangeTreeIndex::build(list, 2);
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = i; j <= n; ++j) {
        EXPECT_LE(idx.canonical_decomposition({i, j}).size(), 2 * ceil_log(n, 2) + 2);
      }
    }
  }
}

TEST(RangeTree, ExhaustiveSmallLists) {
  workload::Rng rng(46);
  for (std::size_t n : {1u, 2u, 13u, 100u, 200u}) {
    for (auto dist : {LabelDist::uniform, LabelDist::zipf}) {
      const auto list = workload::make_list(n, workload::sqrt_alphabet(n), dist, rng);
      for (std::size_t b : {std::size_t{2}, std::size_t{4}, std::size_t{16}, n}) {
        if (b < 2 || b > std::max<std::size_t>(n, 2)) continue;
        const auto idx = RangeTreeIndex::build(list, b);
        EXPECT_LE(idx.stored_elements(), n * (ceil_log(n, b) + 1));
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = i; j <= n; ++j) expect_median(list, idx, {i, j});
        }
      }
    }
  }
}

TEST(RangeTree, Errors) {
  EXPECT_THROW(RangeTreeIndex::build(list_l1(), 1), Error);
  EXPECT_THROW(RangeTreeIndex::build(LabeledList{}, 2), Error);
  const auto idx = RangeTreeIndex::build(list_l1(), 2);
  EXPECT_THROW(idx.canonical_decomposition({0, 3}), Error);
}

// --- constant-time index ---------------------------------------------------

TEST(MedianConstant, Examples) {
  const auto l = list_l1();
  const auto idx = MedianConstantIndex::build(l, 2);
  EXPECT_EQ(idx.query({2, 10}).value, Label{4});
  for (std::size_t i = 1; i <= l.size(); ++i) EXPECT_EQ(idx.query({i, i}).value, l.at(i));
}

TEST(MedianConstant, AllEqualListSharesOneTable) {
  const LabeledList list(std::vector<Label>(24, Label{7}));
  for (std::size_t k : {1u, 2u, 3u, 4u}) {
    EXPECT_EQ(MedianConstantIndex::build(list, k).distinct_tables(), 1u) << k;
  }
}

TEST(MedianConstant, CandidateArraysAreSmallAndSorted) {
  workload::Rng rng(47);
  const auto list = workload::make_list(180, 20, LabelDist::uniform, rng);
  for (std::size_t k : {1u, 2u, 3u, 5u}) {
    const auto idx = MedianConstantIndex::build(list, k);
    std::size_t pairs = 0;
    for (std::size_t bi = 0; bi < idx.block_count(); ++bi) {
      for (std::size_t bj = bi + 1; bj < idx.block_count(); ++bj) {
        const auto c = idx.candidates(bi, bj);
        EXPECT_LE(c.size(), 6 * k + 2);
        EXPECT_TRUE(std::is_sorted(c.begin(), c.end()));
        ++pairs;
      }
    }
    EXPECT_LE(idx.distinct_tables(), pairs);
  }
}

TEST(MedianConstant, ExhaustiveSmallLists) {
  workload::Rng rng(48);
  for (std::size_t n : {1u, 2u, 5u, 17u, 64u, 200u}) {
    for (auto dist : {LabelDist::uniform, LabelDist::zipf}) {
      const auto list = workload::make_list(n, workload::sqrt_alphabet(n), dist, rng);
      for (std::size_t k : {1u, 2u, 3u, 8u}) {
        if (k > n) continue;
        const auto idx = MedianConstantIndex::build(list, k);
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t j = i; j <= n; ++j) expect_median(list, idx, {i, j});
        }
      }
    }
  }
}

TEST(MedianConstant, Errors) {
  EXPECT_THROW(MedianConstantIndex::build(LabeledList{}), Error);
  EXPECT_THROW(MedianConstantIndex::build(list_l1(), 12), Error);
}

TEST(MedianConstant, ProbesDoNotGrowWithN) {
  workload::Rng rng(49);
  std::uint64_t max_probes[2] = {0, 0};
  for (int which = 0; which < 2; ++which) {
    const std::size_t n = which == 0 ? 1u << 10 : 1u << 13;
    const auto list = workload::make_list(n, workload::sqrt_alphabet(n), LabelDist::uniform, rng);
    const auto idx = MedianConstantIndex::build(list, 4);
    for (auto r : workload::uniform_ranges(n, 1000, rng)) {
      QueryStats st;
      idx.query(r, &st);
      max_probes[which] = std::max(max_probes[which], st.probes);
      expect_median(list, idx, r);
    }
  }
  EXPECT_EQ(max_probes[0], max_probes[1]);
}

// The oracle median of every cross-block range lies among the stored
// candidates of its block pair.
TEST(MedianConstant, WindowHoldsEveryCrossBlockMedian) {
  workload::Rng rng(50);
  const auto list = workload::make_list(120, 9, LabelDist::zipf, rng);
  const std::size_t k = 3;
  const auto idx = MedianConstantIndex::build(list, k);
  for (std::size_t i = 1; i <= list.size(); ++i) {
    for (std::size_t j = i; j <= list.size(); ++j) {
      const std::size_t bi = (i - 1) / k, bj = (j - 1) / k;
      if (bi == bj) continue;
      const auto c = idx.candidates(bi, bj);
      const Label med = oracle::median(list.slice({i, j})).value;
      EXPECT_TRUE(std::binary_search(c.begin(), c.end(), med));
    }
  }
}

TEST(MedianIndexes, SaveLoadRoundTrip) {
  workload::Rng rng(51);
  const auto list = workload::make_list(400, 30, LabelDist::zipf, rng);
  const auto a = MedianBlockIndex::build(list, 4);
  const auto b = RangeTreeIndex::build(list, 3);
  const auto c = MedianConstantIndex::build(list, 3);
  std::stringstream buf;
  BinaryWriter w(buf);
  a.save(w);
  b.save(w);
  c.save(w);
  BinaryReader r(buf);
  const auto a2 = MedianBlockIndex::load(r);
  const auto b2 = RangeTreeIndex::load(r);
  const auto c2 = MedianConstantIndex::load(r);
  for (auto q : workload::uniform_ranges(list.size(), 1000, rng)) {
    EXPECT_EQ(a.query(q).value, a2.query(q).value);
    EXPECT_EQ(b.query(q).value, b2.query(q).value);
    EXPECT_EQ(c.query(q).value, c2.query(q).value);
  }
}

}  // namespace
}  // namespace rqk
