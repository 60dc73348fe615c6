#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rqk/binary_io.hpp"
#include "rqk/core.hpp"
#include "rqk/lca.hpp"
#include "rqk/tree_partition.hpp"

namespace rqk {

/// In-order numbering of a tree with at most two children per node. A lone
/// child is treated as a left child. Numbers start at 1.
struct IntervalLabels {
  std::vector<std::uint32_t> inorder;
  std::vector<std::uint32_t> lo;  // smallest in-order number in the subtree
  std::vector<std::uint32_t> hi;
};

IntervalLabels interval_labels(const LabeledTree& tree);

/// Label tree T_x, flattened: its member nodes, the prefix count c of each
/// member, and the elementary in-order segments with their nearest member.
struct LabelTreeView {
  std::span<const NodeId> members;
  std::span<const std::uint32_t> prefix_count;
};

/// Path mode on trees: binarize, cut into b connected components, store the
/// mode of the path segment strictly between every component pair, and count
/// candidates with per-label trees.
class TreeModeIndex {
 public:
  /// b = ceil(N^(1 - epsilon)) components, N the binarized size.
  static TreeModeIndex build(const LabeledTree& tree, double epsilon);
  static TreeModeIndex with_components(const LabeledTree& tree, std::size_t b);

  /// u, v are node ids of the input tree.
  ModeAnswer query(NodeId u, NodeId v, QueryStats* stats = nullptr) const;

  /// Nearest ancestor-or-self of v among T_x's members. Throws unknown_label
  /// if x labels no node.
  NodeId map_to_label_tree(Label x, NodeId v, QueryStats* stats = nullptr) const;
  /// Occurrences of x on the u-v path.
  std::size_t range_count(Label x, NodeId u, NodeId v, QueryStats* stats = nullptr) const;

  std::size_t size() const noexcept { return original_size_; }
  const BinarizedTree& binarized() const noexcept { return bin_; }
  const TreePartition& partition() const noexcept { return part_; }
  const IntervalLabels& intervals() const noexcept { return intervals_; }
  std::span<const Label> component_labels(std::uint32_t c) const noexcept {
    return std::span(component_labels_).subspan(component_offsets_[c], component_offsets_[c + 1] - component_offsets_[c]);
  }
  std::optional<ModeAnswer> middle_mode(std::uint32_t p, std::uint32_t q) const;
  bool has_label_tree(Label x) const noexcept;
  LabelTreeView label_tree(Label x) const;
  std::size_t label_tree_total() const noexcept { return members_.size(); }
  std::size_t words() const noexcept;

  void save(BinaryWriter& w) const;
  static TreeModeIndex load(BinaryReader& r);

 private:
  TreeModeIndex() = default;
  void build_label_trees();
  void build_component_labels();
  void build_middle_table();
  std::size_t pair_slot(std::uint32_t p, std::uint32_t q) const noexcept {
    if (p > q) std::swap(p, q);
    const std::size_t c = part_.count;
    return p * c - std::size_t{p} * (p + 1) / 2 + (q - p - 1);
  }
  /// Prefix count of x at v's nearest member, 0 for v == kNilNode.
  std::uint32_t prefix_at(Label x, NodeId v, QueryStats* stats) const;

  std::size_t original_size_ = 0;
  BinarizedTree bin_;
  LcaIndex lca_;
  IntervalLabels intervals_;
  TreePartition part_;
  std::vector<std::uint32_t> component_offsets_;
  std::vector<Label> component_labels_;
  std::vector<ModeAnswer> middle_;  // frequency 0 marks an empty segment

  // Label trees in CSR form over label ids.
  std::vector<std::uint32_t> member_offsets_;
  std::vector<NodeId> members_;
  std::vector<std::uint32_t> prefix_;
  std::vector<std::uint32_t> segment_offsets_;
  std::vector<std::uint32_t> segment_starts_;   // in-order number where each segment begins
  std::vector<std::uint32_t> segment_member_;   // index into the label's members
};

}  // namespace rqk
