#pragma once

#include <cstdint>
#include <vector>

#include "rqk/core.hpp"

namespace rqk {

struct BinarizedTree {
  LabeledTree tree;
  /// node_map[v] is the node carrying original node v's label. Original ids
  /// are kept, synthetic nodes are appended after them.
  std::vector<NodeId> node_map;
  std::size_t synthetic_count = 0;
  /// owner[v] is v for original nodes and the gadget root for synthetic ones.
  std::vector<NodeId> owner;
};

/// Expands every node with d > 2 children into a complete binary gadget whose
/// root is the node itself and whose leaves are its children; the d - 2
/// inner gadget nodes get unique reserved labels. Two children that end up
/// below the same synthetic node no longer have the gadget root on their
/// path: when the LCA of two nodes is synthetic, its owner's label belongs to
/// the original path.
BinarizedTree binarize(const LabeledTree& tree);

struct TreeEdge {
  NodeId parent = kNilNode;
  NodeId child = kNilNode;
};

/// Edge whose removal leaves two components of at most ceil(2n/3) nodes each.
/// Requires at least two nodes (single_node) and at most two children per
/// node (invalid_tree).
TreeEdge edge_separator(const LabeledTree& tree);

struct TreePartition {
  std::vector<std::uint32_t> component;  // per node
  std::uint32_t count = 0;
  std::vector<std::uint32_t> sizes;      // per component
};

/// Splits a binary tree into connected components of at most ceil(n/b) nodes
/// by repeatedly cutting separator edges.
TreePartition partition_subtrees(const LabeledTree& tree, std::size_t b);

}  // namespace rqk
