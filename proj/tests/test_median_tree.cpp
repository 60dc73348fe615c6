#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "rqk/median_tree.hpp"
#include "rqk/oracle.hpp"
#include "rqk/workload.hpp"

namespace rqk {
namespace {

using testing::ids;
using testing::N;
using testing::tree_t1;
using workload::LabelDist;
using workload::TreeShape;

// Fixed C in persistent nodes <= C n log2(n + 2) D.
constexpr double kPersistentNodeConstant = 4.0;

double depth_bound(std::size_t n) { return std::log(static_cast<double>(n)) / std::log(1.5) + 2.0; }

std::vector<LabeledTree> shapes(std::size_t n, std::size_t alphabet, std::uint64_t seed) {
  workload::Rng rng(seed);
  std::vector<LabeledTree> out;
  for (auto shape : {TreeShape::random, TreeShape::path, TreeShape::star, TreeShape::caterpillar}) {
    out.push_back(workload::make_tree(n, shape, alphabet, LabelDist::uniform, rng));
    out.push_back(workload::make_tree(n, shape, alphabet, LabelDist::zipf, rng));
  }
  return out;
}

std::vector<Label> sorted(std::vector<Label> v) {
  std::sort(v.begin(), v.end());
  return v;
}

void check_structure(const LabeledTree& t, const TreeMedianIndex& idx) {
  const std::size_t n = t.size();
  EXPECT_LE(static_cast<double>(idx.depth()), depth_bound(n));
  EXPECT_LE(static_cast<double>(idx.persistent_nodes()),
            kPersistentNodeConstant * n * std::log2(n + 2.0) * std::max<std::size_t>(idx.depth(), 1));
  for (std::size_t d = 0; d < idx.depth(); ++d) {
    for (NodeId v = 0; v < n; ++v) {
      const NodeId c = idx.centroid(d, v);
      if (c == kNilNode) {
        EXPECT_TRUE(idx.inclusive(d, v).empty());
        continue;
      }
      auto path = oracle::path_labels(t, v, c);
      EXPECT_EQ(pbst_in_order(idx.inclusive(d, v)), sorted(path));
      path.pop_back();  // c's label ends the path
      EXPECT_EQ(pbst_in_order(idx.exclusive(d, v)), sorted(path));
    }
    // Each component is connected: flood fill inside the same-centroid class
    // reaches every member, and no component exceeds half its parent.
    std::vector<char> seen(n, 0);
    for (NodeId s = 0; s < n; ++s) {
      const NodeId c = idx.centroid(d, s);
      if (c == kNilNode || seen[s]) continue;
      std::vector<NodeId> stack{s};
      seen[s] = 1;
      std::size_t reached = 0;
      while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        ++reached;
        std::vector<NodeId> nb(t.children(v).begin(), t.children(v).end());
        if (t.parent(v) != kNilNode) nb.push_back(t.parent(v));
        for (NodeId w : nb) {
          if (!seen[w] && idx.centroid(d, w) == c) {
            seen[w] = 1;
            stack.push_back(w);
          }
        }
      }
      std::size_t members = 0;
      for (NodeId v = 0; v < n; ++v) members += idx.centroid(d, v) == c ? 1 : 0;
      EXPECT_EQ(reached, members);
      if (d > 0) {
        std::size_t parent_members = 0;
        const NodeId pc = idx.centroid(d - 1, s);
        ASSERT_NE(pc, kNilNode);
        for (NodeId v = 0; v < n; ++v) parent_members += idx.centroid(d - 1, v) == pc ? 1 : 0;
        EXPECT_LE(2 * members, parent_members);
      }
    }
  }
}

void check_all_pairs(const LabeledTree& t, const TreeMedianIndex& idx) {
  for (NodeId u = 0; u < t.size(); ++u) {
    for (NodeId v = 0; v < t.size(); ++v) {
      const auto want = oracle::median(oracle::path_labels(t, u, v));
      const auto got = idx.query(u, v);
      ASSERT_EQ(got.value, want.value) << "u=" << u << " v=" << v;
      ASSERT_EQ(got.rank, want.rank);
    }
  }
}

TEST(TreeMedian, Examples) {
  const auto t = tree_t1();
  const auto idx = TreeMedianIndex::build(t);
  EXPECT_EQ(idx.query(N(4), N(7)).value, Label{5});
  EXPECT_EQ(idx.query(N(4), N(7)).rank, 4u);
  EXPECT_EQ(idx.query(N(4), N(5)).value, Label{1});
  EXPECT_EQ(idx.query(N(4), N(5)).rank, 2u);
  EXPECT_EQ(idx.query(N(6), N(6)).value, Label{5});
  EXPECT_LE(static_cast<double>(idx.depth()), depth_bound(7));
  check_structure(t, idx);
}

TEST(TreeMedian, SingleNode) {
  const auto t = LabeledTree::from_parents({kNilNode}, ids({7}));
  const auto idx = TreeMedianIndex::build(t);
  EXPECT_EQ(idx.depth(), 0u);
  EXPECT_EQ(idx.query(0, 0).value, Label{7});
}

TEST(TreeMedian, Errors) {
  EXPECT_THROW(TreeMedianIndex::build(LabeledTree{}), Error);
  const auto idx = TreeMedianIndex::build(tree_t1());
  try {
    idx.query(0, 7);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unknown_node);
  }
}

TEST(TreeMedian, PathOfFifteenIsConnectedPerLevel) {
  workload::Rng rng(71);
  const auto t = workload::make_tree(15, TreeShape::path, 4, LabelDist::uniform, rng);
  const auto idx = TreeMedianIndex::build(t);
  EXPECT_EQ(idx.depth(), 3u);
  check_structure(t, idx);
}

TEST(TreeMedian, ExhaustiveSmallTrees) {
  for (std::size_t n : {1u, 2u, 3u, 5u, 16u, 33u, 64u}) {
    for (const auto& t : shapes(n, workload::sqrt_alphabet(n), 72 + n)) {
      const auto idx = TreeMedianIndex::build(t);
      check_structure(t, idx);
      check_all_pairs(t, idx);
    }
  }
}

TEST(TreeMedian, UnionIsThePathExactly) {
  for (const auto& t : shapes(40, 6, 73)) {
    const auto idx = TreeMedianIndex::build(t);
    for (NodeId u = 0; u < t.size(); ++u) {
      for (NodeId v = 0; v < t.size(); ++v) {
        if (u == v) continue;
        std::size_t d = 0;
        while (d + 1 < idx.depth() && idx.centroid(d + 1, u) != kNilNode &&
               idx.centroid(d + 1, u) == idx.centroid(d + 1, v)) {
          ++d;
        }
        auto joined = pbst_in_order(idx.inclusive(d, u));
        const auto rest = pbst_in_order(idx.exclusive(d, v));
        joined.insert(joined.end(), rest.begin(), rest.end());
        ASSERT_EQ(sorted(joined), sorted(oracle::path_labels(t, u, v)));
      }
    }
  }
}

TEST(TreeMedian, SampledLargeTrees) {
  workload::Rng rng(74);
  for (const auto& t : shapes(2048, 45, 75)) {
    const auto idx = TreeMedianIndex::build(t);
    EXPECT_LE(static_cast<double>(idx.depth()), depth_bound(t.size()));
    for (auto [u, v] : workload::node_pairs(t.size(), 1000, rng)) {
      ASSERT_EQ(idx.query(u, v).value, oracle::median(oracle::path_labels(t, u, v)).value);
    }
  }
}

TEST(TreeMedian, SaveLoadRoundTrip) {
  workload::Rng rng(76);
  const auto t = workload::make_tree(500, TreeShape::random, 30, LabelDist::zipf, rng);
  const auto idx = TreeMedianIndex::build(t);
  std::stringstream buf;
  BinaryWriter w(buf);
  idx.save(w);
  BinaryReader r(buf);
  const auto back = TreeMedianIndex::load(r);
  EXPECT_EQ(back.depth(), idx.depth());
  for (auto [u, v] : workload::node_pairs(t.size(), 1000, rng)) {
    EXPECT_EQ(idx.query(u, v).value, back.query(u, v).value);
  }
}

}  // namespace
}  // namespace rqk
