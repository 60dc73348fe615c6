#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "rqk/binary_io.hpp"
#include "rqk/core.hpp"

namespace rqk {

using NodeRef = std::uint32_t;
inline constexpr NodeRef kNilRef = std::numeric_limits<NodeRef>::max();

class PersistentTreeStore;

/// A read-only view of one version: a root inside a store plus its size.
struct VersionHandle {
  const PersistentTreeStore* store = nullptr;
  NodeRef root = kNilRef;
  std::uint32_t size = 0;

  bool empty() const noexcept { return size == 0; }
};

/// Append-only pool of size-augmented AVL nodes. Inserting creates a new
/// version by copying the root-to-leaf search path; rotations only touch
/// nodes created by the same insert, so published nodes are never mutated.
class PersistentTreeStore {
 public:
  struct Node {
    Label value;
    NodeRef left = kNilRef;
    NodeRef right = kNilRef;
    std::uint32_t size = 1;
    std::uint32_t height = 1;  // balance key
  };

  /// Path length bound used by tests and the acceptance run: every insert
  /// allocates at most kAllocationFactor * log2(size + 2) nodes.
  static constexpr double kAllocationFactor = 2.0;

  VersionHandle empty_version() const noexcept { return VersionHandle{this, kNilRef, 0}; }
  VersionHandle handle(NodeRef root) const noexcept { return VersionHandle{this, root, size_of(root)}; }

  /// Returns the version containing v's multiset plus x. v stays valid.
  VersionHandle insert(VersionHandle v, Label x);

  const Node& node(NodeRef r) const noexcept { return nodes_[r]; }
  std::uint32_t size_of(NodeRef r) const noexcept { return r == kNilRef ? 0 : nodes_[r].size; }
  std::uint32_t height_of(NodeRef r) const noexcept { return r == kNilRef ? 0 : nodes_[r].height; }

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t last_insert_allocations() const noexcept { return last_allocations_; }
  std::size_t words() const noexcept { return nodes_.size() * 5; }
  void reserve(std::size_t nodes) { nodes_.reserve(nodes); }

  void save(BinaryWriter& w) const;
  static PersistentTreeStore load(BinaryReader& r);

 private:
  NodeRef make(Label value, NodeRef left, NodeRef right);
  NodeRef insert_at(NodeRef t, Label x);
  NodeRef rebalance(NodeRef t);
  NodeRef rotate_left(NodeRef t);
  NodeRef rotate_right(NodeRef t);
  void refresh(NodeRef t) noexcept;

  std::vector<Node> nodes_;
  NodeRef fresh_from_ = 0;
  std::size_t last_allocations_ = 0;
};

/// Element at 1-indexed sorted position r. Throws rank_out_of_range.
Label pbst_select(VersionHandle v, std::size_t r, QueryStats* stats = nullptr);
/// Number of stored elements strictly less than x.
std::size_t pbst_rank_of(VersionHandle v, Label x);
std::uint32_t pbst_height(VersionHandle v) noexcept;
std::vector<Label> pbst_in_order(VersionHandle v);

inline VersionHandle pbst_insert(PersistentTreeStore& store, VersionHandle v, Label x) { return store.insert(v, x); }

}  // namespace rqk
