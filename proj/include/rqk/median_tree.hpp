#pragma once

#include <cstdint>
#include <vector>

#include "rqk/binary_io.hpp"
#include "rqk/core.hpp"
#include "rqk/persistent_tree.hpp"

namespace rqk {

/// Path median on trees by centroid decomposition. At every level each
/// component of two or more nodes is split at its centroid c, and every node
/// v of the component keeps two persistent versions: the labels of the v-c
/// path including c (inclusive) and excluding c (exclusive). For u, v
/// separated at a level, inclusive(u) and exclusive(v) partition the u-v path.
class TreeMedianIndex {
 public:
  static TreeMedianIndex build(const LabeledTree& tree);

  MedianAnswer query(NodeId u, NodeId v, QueryStats* stats = nullptr) const;

  std::size_t size() const noexcept { return tree_.size(); }
  const LabeledTree& tree() const noexcept { return tree_; }
  /// Levels holding at least one component of two or more nodes.
  std::size_t depth() const noexcept { return levels_.size(); }
  std::size_t persistent_nodes() const noexcept { return store_.node_count(); }
  std::size_t words() const noexcept;

  /// Centroid of v's component at the level, kNilNode if v is no longer in a
  /// component of two or more nodes there.
  NodeId centroid(std::size_t level, NodeId v) const noexcept { return levels_[level].centroid[v]; }
  VersionHandle inclusive(std::size_t level, NodeId v) const noexcept {
    return store_.handle(levels_[level].inclusive[v]);
  }
  VersionHandle exclusive(std::size_t level, NodeId v) const noexcept {
    return store_.handle(levels_[level].exclusive[v]);
  }

  void save(BinaryWriter& w) const;
  static TreeMedianIndex load(BinaryReader& r);

 private:
  struct Level {
    std::vector<NodeId> centroid;
    std::vector<NodeRef> inclusive;
    std::vector<NodeRef> exclusive;
  };

  TreeMedianIndex() = default;
  Level& level_at(std::size_t d);

  LabeledTree tree_;
  PersistentTreeStore store_;
  std::vector<Level> levels_;
};

}  // namespace rqk
