#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "fixtures.hpp"
#include "rqk/lca.hpp"
#include "rqk/oracle.hpp"
#include "rqk/persistent_tree.hpp"
#include "rqk/selection.hpp"
#include "rqk/tree_partition.hpp"
#include "rqk/workload.hpp"

namespace rqk {
namespace {

using testing::ids;
using testing::N;
using testing::tree_t1;
using workload::LabelDist;
using workload::TreeShape;

std::vector<LabeledTree> sample_trees(std::size_t max_n, std::uint64_t seed) {
  workload::Rng rng(seed);
  std::vector<LabeledTree> out;
  for (std::size_t n = 1; n <= max_n; n += (n < 16 ? 1 : 7)) {
    for (auto shape : {TreeShape::random, TreeShape::path, TreeShape::star, TreeShape::caterpillar}) {
      out.push_back(workload::make_tree(n, shape, 4, LabelDist::uniform, rng));
    }
  }
  return out;
}

LabeledTree complete_binary(std::size_t n) {
  std::vector<NodeId> parent(n, kNilNode);
  for (std::size_t v = 1; v < n; ++v) parent[v] = static_cast<NodeId>((v - 1) / 2);
  return LabeledTree::from_parents(std::move(parent), std::vector<Label>(n, Label{0}));
}

// --- LCA -------------------------------------------------------------------

TEST(Lca, Examples) {
  const auto t = tree_t1();
  const LcaIndex idx(t);
  EXPECT_EQ(idx.lca(N(4), N(5)), N(2));
  EXPECT_EQ(idx.lca(N(4), N(7)), N(1));
  EXPECT_EQ(idx.lca(N(3), N(3)), N(3));
}

TEST(Lca, MatchesParentChainOracle) {
  for (const auto& t : sample_trees(70, 21)) {
    const LcaIndex idx(t);
    for (NodeId u = 0; u < t.size(); ++u) {
      for (NodeId v = 0; v < t.size(); ++v) {
        const NodeId w = idx.lca(u, v);
        ASSERT_EQ(w, oracle::lca(t, u, v));
        EXPECT_LE(t.depth(w), std::min(t.depth(u), t.depth(v)));
      }
    }
  }
}

// --- persistent trees ------------------------------------------------------

TEST(PersistentTree, InsertKeepsOldVersions) {
  PersistentTreeStore store;
  auto v1 = store.insert(store.empty_version(), Label{3});
  auto v2 = store.insert(v1, Label{1});
  auto v3 = store.insert(v2, Label{4});
  EXPECT_EQ(v3.size, 3u);
  EXPECT_EQ(pbst_in_order(v3), ids({1, 3, 4}));
  EXPECT_EQ(pbst_in_order(v2), ids({1, 3}));
  EXPECT_EQ(pbst_select(v3, 2), Label{3});
  EXPECT_EQ(pbst_select(v3, 1), Label{1});
  EXPECT_EQ(pbst_rank_of(v3, Label{3}), 1u);
  EXPECT_EQ(pbst_rank_of(v3, Label{0}), 0u);
  EXPECT_EQ(pbst_rank_of(v3, Label{9}), 3u);
}

TEST(PersistentTree, SelectOnEmptyVersionThrows) {
  PersistentTreeStore store;
  try {
    pbst_select(store.empty_version(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::rank_out_of_range);
  }
}

TEST(PersistentTree, AscendingInsertsStayBalanced) {
  PersistentTreeStore store;
  auto v = store.empty_version();
  const double bound = PersistentTreeStore::kAllocationFactor * std::log2(66.0);
  for (std::uint32_t x = 1; x <= 64; ++x) {
    v = store.insert(v, Label{x});
    EXPECT_LE(pbst_height(v), bound);
  }
}

TEST(PersistentTree, SizesAndOrderHoldInEveryVersion) {
  workload::Rng rng(22);
  PersistentTreeStore store;
  std::vector<VersionHandle> versions{store.empty_version()};
  std::vector<std::vector<Label>> expected{{}};
  std::uniform_int_distribution<std::size_t> pick_label(0, 20);
  for (int step = 0; step < 400; ++step) {
    std::uniform_int_distribution<std::size_t> pick_version(0, versions.size() - 1);
    const std::size_t base = pick_version(rng);
    const Label x{static_cast<std::uint32_t>(pick_label(rng))};
    const std::size_t before = store.node_count();
    versions.push_back(store.insert(versions[base], x));
    EXPECT_EQ(store.node_count() - before, store.last_insert_allocations());
    EXPECT_LE(static_cast<double>(store.last_insert_allocations()),
              PersistentTreeStore::kAllocationFactor * std::log2(versions[base].size + 2.0));
    auto e = expected[base];
    e.insert(std::upper_bound(e.begin(), e.end(), x), x);
    expected.push_back(std::move(e));
  }
  for (std::size_t v = 0; v < versions.size(); ++v) {
    ASSERT_EQ(pbst_in_order(versions[v]), expected[v]);
    std::function<std::uint32_t(NodeRef)> check = [&](NodeRef r) -> std::uint32_t {
      if (r == kNilRef) return 0;
      const auto& node = store.node(r);
      const std::uint32_t s = 1 + check(node.left) + check(node.right);
      EXPECT_EQ(node.size, s);
      return s;
    };
    EXPECT_EQ(check(versions[v].root), versions[v].size);
    for (std::size_t r = 1; r <= expected[v].size(); ++r) EXPECT_EQ(pbst_select(versions[v], r), expected[v][r - 1]);
  }
}

TEST(PersistentTree, SaveLoadRoundTrip) {
  PersistentTreeStore store;
  auto v = store.empty_version();
  for (std::uint32_t x : {5u, 2u, 8u, 2u, 9u}) v = store.insert(v, Label{x});
  std::stringstream buf;
  BinaryWriter w(buf);
  store.save(w);
  BinaryReader r(buf);
  const auto loaded = PersistentTreeStore::load(r);
  EXPECT_EQ(pbst_in_order(loaded.handle(v.root)), ids({2, 2, 5, 8, 9}));
}

// --- selection -------------------------------------------------------------

VersionHandle tree_of(PersistentTreeStore& store, const std::vector<Label>& values) {
  auto v = store.empty_version();
  for (Label x : values) v = store.insert(v, x);
  return v;
}

TEST(SelectThreeTrees, Examples) {
  PersistentTreeStore store;
  const auto a = tree_of(store, ids({1, 4}));
  const auto b = tree_of(store, ids({2}));
  const auto c = tree_of(store, ids({3, 5}));
  const auto e = store.empty_version();
  EXPECT_EQ(select_three_trees(a, b, c, 3), Label{3});
  EXPECT_EQ(select_three_trees(a, e, e, 2), Label{4});
  EXPECT_EQ(select_three_trees(a, b, c, 5), Label{5});
  EXPECT_THROW(select_three_trees(a, b, c, 6), Error);
  EXPECT_THROW(select_three_trees(a, b, c, 0), Error);
}

TEST(SelectThreeTrees, ExhaustiveSmallSizes) {
  workload::Rng rng(23);
  PersistentTreeStore store;
  for (std::size_t sa = 0; sa <= 8; ++sa) {
    for (std::size_t sb = 0; sb <= 8; ++sb) {
      for (std::size_t sc = 0; sc <= 8; ++sc) {
        if (sa + sb + sc == 0) continue;
        const auto la = workload::make_labels(sa, 6, LabelDist::uniform, rng);
        const auto lb = workload::make_labels(sb, 6, LabelDist::uniform, rng);
        const auto lc = workload::make_labels(sc, 6, LabelDist::uniform, rng);
        const auto a = tree_of(store, la);
        const auto b = tree_of(store, lb);
        const auto c = tree_of(store, lc);
        std::vector<Label> all(la);
        all.insert(all.end(), lb.begin(), lb.end());
        all.insert(all.end(), lc.begin(), lc.end());
        for (std::size_t r = 1; r <= all.size(); ++r) {
          QueryStats st;
          ASSERT_EQ(select_three_trees(a, b, c, r, &st), oracle::select(all, r));
          EXPECT_LE(st.probes, pbst_height(a) + pbst_height(b) + pbst_height(c));
        }
      }
    }
  }
}

TEST(SelectSortedArrays, Examples) {
  const auto a = ids({1, 4});
  const auto b = ids({2});
  const auto c = ids({3, 5});
  std::vector<std::span<const Label>> arrays{a, b, c};
  EXPECT_EQ(select_sorted_arrays(arrays, 3), Label{3});
  const auto only = ids({2, 3, 5, 7, 11});
  std::vector<std::span<const Label>> single{only};
  for (std::size_t r = 1; r <= only.size(); ++r) EXPECT_EQ(select_sorted_arrays(single, r), only[r - 1]);
  const auto one = ids({6});
  const std::vector<Label> none;
  std::vector<std::span<const Label>> sparse{none, one, none};
  EXPECT_EQ(select_sorted_arrays(sparse, 1), Label{6});
}

TEST(SelectSortedArrays, Errors) {
  const auto a = ids({1, 4});
  const auto bad = ids({4, 1});
  std::vector<std::span<const Label>> ok{a};
  try {
    select_sorted_arrays(ok, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::rank_out_of_range);
  }
  std::vector<std::span<const Label>> unsorted{a, bad};
  try {
    select_sorted_arrays(unsorted, 1, nullptr, true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::unsorted_input);
  }
}

// Comparison constant for the k*log2(n+2) bound.
constexpr double kSelectionComparisonConstant = 6.0;

TEST(SelectSortedArrays, ExhaustiveSmallInstances) {
  workload::Rng rng(24);
  std::uniform_int_distribution<std::size_t> len(0, 6);
  for (std::size_t k = 1; k <= 4; ++k) {
    for (int trial = 0; trial < 400; ++trial) {
      std::vector<std::vector<Label>> arrays(k);
      std::vector<Label> all;
      for (auto& a : arrays) {
        a = workload::make_labels(len(rng), 9, LabelDist::uniform, rng);
        std::sort(a.begin(), a.end());
        all.insert(all.end(), a.begin(), a.end());
      }
      std::vector<std::span<const Label>> spans(arrays.begin(), arrays.end());
      for (std::size_t r = 1; r <= all.size(); ++r) {
        QueryStats st;
        ASSERT_EQ(select_sorted_arrays(spans, r, &st, true), oracle::select(all, r));
        EXPECT_LE(static_cast<double>(st.comparisons),
                  kSelectionComparisonConstant * static_cast<double>(k) * std::log2(all.size() + 2.0));
      }
    }
  }
}

// --- separators and partitions --------------------------------------------

std::size_t side_size(const LabeledTree& t, NodeId child) {
  std::size_t s = 0;
  for (NodeId v = 0; v < t.size(); ++v) s += oracle::is_ancestor(t, child, v) ? 1 : 0;
  return s;
}

TEST(EdgeSeparator, Examples) {
  const auto path3 = LabeledTree::from_parents({kNilNode, 0, 1}, ids({0, 0, 0}));
  const auto e3 = edge_separator(path3);
  const std::size_t s3 = side_size(path3, e3.child);
  EXPECT_EQ(std::min(s3, 3 - s3), 1u);
  EXPECT_EQ(std::max(s3, 3 - s3), 2u);

  const auto two = LabeledTree::from_parents({kNilNode, 0}, ids({0, 0}));
  const auto e2 = edge_separator(two);
  EXPECT_EQ(e2.parent, 0u);
  EXPECT_EQ(e2.child, 1u);

  const auto full = complete_binary(7);
  const auto e7 = edge_separator(full);
  EXPECT_EQ(e7.parent, 0u);
  EXPECT_EQ(side_size(full, e7.child), 3u);
}

TEST(EdgeSeparator, Errors) {
  const auto one = LabeledTree::from_parents({kNilNode}, ids({0}));
  try {
    edge_separator(one);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::single_node);
  }
  const auto star = LabeledTree::from_parents({kNilNode, 0, 0, 0}, ids({0, 0, 0, 0}));
  EXPECT_THROW(edge_separator(star), Error);
}

TEST(EdgeSeparator, TwoThirdsBoundOnBinaryTrees) {
  for (const auto& raw : sample_trees(64, 25)) {
    const auto t = binarize(raw).tree;
    if (t.size() < 2) continue;
    const auto e = edge_separator(t);
    ASSERT_EQ(t.parent(e.child), e.parent);
    const std::size_t s = side_size(t, e.child);
    const std::size_t limit = (2 * t.size() + 2) / 3;
    EXPECT_LE(s, limit);
    EXPECT_LE(t.size() - s, limit);
  }
  for (std::size_t n = 2; n <= 64; ++n) {
    const auto t = complete_binary(n);
    const std::size_t s = side_size(t, edge_separator(t).child);
    EXPECT_LE(std::max(s, n - s), (2 * n + 2) / 3);
  }
}

bool components_connected(const LabeledTree& t, const TreePartition& p) {
  // A component is connected iff exactly one of its nodes has its parent
  // outside the component.
  std::vector<std::uint32_t> heads(p.count, 0);
  for (NodeId v = 0; v < t.size(); ++v) {
    const NodeId u = t.parent(v);
    if (u == kNilNode || p.component[u] != p.component[v]) ++heads[p.component[v]];
  }
  return std::all_of(heads.begin(), heads.end(), [](std::uint32_t h) { return h == 1; });
}

// Fixed constant C in "component count <= C * b".
constexpr std::size_t kPartitionCountConstant = 4;

TEST(PartitionSubtrees, Examples) {
  const auto path9 = LabeledTree::from_parents({kNilNode, 0, 1, 2, 3, 4, 5, 6, 7}, std::vector<Label>(9));
  const auto one = partition_subtrees(path9, 1);
  EXPECT_EQ(one.count, 1u);
  const auto three = partition_subtrees(path9, 3);
  for (auto s : three.sizes) EXPECT_LE(s, 3u);
  EXPECT_TRUE(components_connected(path9, three));
  const auto all = partition_subtrees(path9, 9);
  for (auto s : all.sizes) EXPECT_EQ(s, 1u);
  EXPECT_THROW(partition_subtrees(path9, 0), Error);
  EXPECT_THROW(partition_subtrees(path9, 10), Error);
}

TEST(PartitionSubtrees, SizeAndCountBounds) {
  for (const auto& raw : sample_trees(64, 26)) {
    const auto t = binarize(raw).tree;
    for (std::size_t b = 1; b <= t.size(); b += 1 + t.size() / 9) {
      const auto p = partition_subtrees(t, b);
      const std::size_t limit = (t.size() + b - 1) / b;
      for (auto s : p.sizes) EXPECT_LE(s, limit);
      EXPECT_LE(p.count, kPartitionCountConstant * b);
      EXPECT_TRUE(components_connected(t, p));
    }
  }
}

// --- binarization ----------------------------------------------------------

TEST(Binarize, BinaryTreeUnchanged) {
  const auto t = tree_t1();
  const auto b = binarize(t);
  EXPECT_EQ(b.synthetic_count, 0u);
  EXPECT_EQ(b.tree.size(), t.size());
  for (NodeId v = 0; v < t.size(); ++v) {
    EXPECT_EQ(b.node_map[v], v);
    EXPECT_EQ(b.tree.parent(v), t.parent(v));
  }
}

TEST(Binarize, StarGadget) {
  const auto star = LabeledTree::from_parents({kNilNode, 0, 0, 0, 0}, ids({9, 1, 2, 3, 4}));
  const auto b = binarize(star);
  EXPECT_EQ(b.tree.max_children(), 2u);
  // The root plus two synthetic nodes form the gadget's inner level.
  EXPECT_EQ(b.synthetic_count, 2u);
  std::size_t inner = 0;
  for (NodeId v = 0; v < b.tree.size(); ++v) inner += b.tree.children(v).empty() ? 0 : 1;
  EXPECT_EQ(inner, 3u);
  for (NodeId v = 5; v < b.tree.size(); ++v) EXPECT_TRUE(b.tree.label(v).reserved());
}

TEST(Binarize, PathsKeepOriginalLabelsWithOwnerAtLca) {
  for (const auto& t : sample_trees(32, 27)) {
    const auto b = binarize(t);
    EXPECT_LE(b.tree.max_children(), 2u);
    EXPECT_LE(b.tree.size(), 2 * t.size());
    for (NodeId u = 0; u < t.size(); ++u) {
      EXPECT_EQ(b.tree.label(b.node_map[u]), t.label(u));
      for (NodeId v = 0; v < t.size(); ++v) {
        const auto nodes = oracle::path(b.tree, b.node_map[u], b.node_map[v]);
        const NodeId w = oracle::lca(b.tree, b.node_map[u], b.node_map[v]);
        std::vector<Label> got;
        for (NodeId x : nodes) got.push_back(b.tree.label(x == w ? b.owner[x] : x));
        got.erase(std::remove_if(got.begin(), got.end(), [](Label l) { return l.reserved(); }), got.end());
        ASSERT_EQ(got, oracle::path_labels(t, u, v));
      }
    }
  }
}

}  // namespace
}  // namespace rqk
