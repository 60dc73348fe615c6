#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rqk/binary_io.hpp"
#include "rqk/core.hpp"
#include "rqk/persistent_tree.hpp"
#include "rqk/table_store.hpp"

namespace rqk {

/// Recursive block index. Each level cuts its span into b blocks; every block
/// keeps persistent prefix and suffix trees, every block pair a sorted window
/// of the middle around the middle's median. Same-block queries recurse into
/// the block.
class MedianBlockIndex {
 public:
  /// Requires 2 <= b <= max(n, 2).
  static MedianBlockIndex build(const LabeledList& list, std::size_t b);

  MedianAnswer query(ListRange r, QueryStats* stats = nullptr) const;

  std::size_t size() const noexcept { return list_.size(); }
  std::size_t branching() const noexcept { return b_; }
  /// Spans of at most this many elements are answered by direct selection.
  std::size_t base_size() const noexcept { return std::max<std::size_t>(b_, 8); }
  std::size_t depth() const noexcept;
  std::size_t persistent_nodes() const noexcept { return store_.node_count(); }
  std::size_t words() const noexcept;

  /// Top-level introspection (0-based blocks, 0-based offsets x in a block).
  std::size_t top_block_size() const noexcept { return segments_.empty() ? 0 : segments_[0].block; }
  /// Block elements x..end, as stored in the suffix tree.
  std::vector<Label> top_suffix(std::size_t block, std::size_t x) const;
  std::vector<Label> top_prefix(std::size_t block, std::size_t y) const;
  /// Stored middle window of the pair and the number of omitted low elements.
  std::span<const Label> top_window(std::size_t bi, std::size_t bj) const;
  std::uint32_t top_omitted_low(std::size_t bi, std::size_t bj) const;

  void save(BinaryWriter& w) const;
  static MedianBlockIndex load(BinaryReader& r);

 private:
  struct Segment {
    std::uint32_t lo = 1;           // first list position
    std::uint32_t length = 0;
    std::uint32_t block = 0;        // block size; 0 for a base segment
    std::uint32_t blocks = 0;
    std::uint32_t first_child = 0;  // children are consecutive segments
    std::uint64_t roots = 0;        // offset into roots_, 2 (block + 1) per block
    std::uint64_t pairs = 0;        // offset into pair_offsets_ / omitted_low_
  };

  MedianBlockIndex() = default;
  void build_segment(std::size_t id);
  std::size_t pair_slot(const Segment& s, std::size_t bi, std::size_t bj) const noexcept {
    return s.pairs + bi * s.blocks - bi * (bi + 1) / 2 + (bj - bi - 1);
  }
  VersionHandle prefix_version(const Segment& s, std::size_t block, std::size_t y) const noexcept;
  VersionHandle suffix_version(const Segment& s, std::size_t block, std::size_t x) const noexcept;

  LabeledList list_;
  std::size_t b_ = 2;
  PersistentTreeStore store_;
  std::vector<Segment> segments_;
  std::vector<NodeRef> roots_;
  std::vector<std::uint64_t> pair_offsets_;  // window of slot p is windows_[offsets[p], offsets[p + 1])
  std::vector<std::uint32_t> omitted_low_;
  std::vector<Label> windows_;
};

/// Complete b-ary tree over positions; level h holds the list with every
/// aligned chunk of b^h positions sorted.
class RangeTreeIndex {
 public:
  /// Requires 2 <= b <= max(n, 2).
  static RangeTreeIndex build(const LabeledList& list, std::size_t b);

  /// Disjoint sorted chunks whose positions exactly cover r, collected
  /// bottom-up.
  std::vector<std::span<const Label>> canonical_decomposition(ListRange r) const;
  MedianAnswer query(ListRange r, QueryStats* stats = nullptr) const;

  std::size_t size() const noexcept { return n_; }
  std::size_t arity() const noexcept { return b_; }
  /// Number of levels above the leaves: ceil(log_b n).
  std::size_t height() const noexcept { return levels_.size() - 1; }
  std::span<const Label> level(std::size_t h) const noexcept { return levels_[h]; }
  std::size_t stored_elements() const noexcept { return n_ * levels_.size(); }
  std::size_t words() const noexcept { return stored_elements() + levels_.size(); }

  void save(BinaryWriter& w) const;
  static RangeTreeIndex load(BinaryReader& r);

 private:
  RangeTreeIndex() = default;
  std::size_t n_ = 0;
  std::size_t b_ = 2;
  std::vector<std::vector<Label>> levels_;
};

/// Constant-time range median. Every block pair keeps a sorted array of its
/// potential medians (both blocks plus the middle's rank window) and points at
/// a shared k x k table mapping (x, y) offsets to an index in that array.
class MedianConstantIndex {
 public:
  static std::size_t default_block_size(std::size_t n) noexcept;
  /// block_size == 0 picks default_block_size(n).
  static MedianConstantIndex build(const LabeledList& list, std::size_t block_size = 0);

  MedianAnswer query(ListRange r, QueryStats* stats = nullptr) const;

  std::size_t size() const noexcept { return list_.size(); }
  std::size_t block_size() const noexcept { return k_; }
  std::size_t block_count() const noexcept { return block_count_; }
  std::size_t distinct_tables() const noexcept { return tables_.count(); }
  std::span<const Label> candidates(std::size_t bi, std::size_t bj) const noexcept;
  std::size_t words() const noexcept;

  void save(BinaryWriter& w) const;
  static MedianConstantIndex load(BinaryReader& r);

 private:
  MedianConstantIndex() = default;
  std::size_t pair_slot(std::size_t bi, std::size_t bj) const noexcept {
    return bi * block_count_ - bi * (bi + 1) / 2 + (bj - bi - 1);
  }
  std::size_t block_start(std::size_t b) const noexcept { return b * k_ + 1; }
  std::size_t block_length(std::size_t b) const noexcept { return std::min(k_, list_.size() - b * k_); }
  void build_in_block();
  void build_pairs();

  LabeledList list_;
  std::size_t k_ = 1;
  std::size_t block_count_ = 0;
  std::vector<std::uint32_t> table_of_pair_;
  std::vector<std::uint64_t> candidate_offsets_;
  std::vector<Label> candidates_;
  TableStore tables_;
  std::vector<Label> in_block_;  // block * k^2 + x * k + y, x <= y
};

}  // namespace rqk
