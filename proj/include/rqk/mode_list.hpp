#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rqk/binary_io.hpp"
#include "rqk/core.hpp"
#include "rqk/table_store.hpp"

namespace rqk {

/// Per-label sorted position arrays A_x, stored back to back.
class OccurrenceIndex {
 public:
  OccurrenceIndex() = default;
  explicit OccurrenceIndex(const LabeledList& list);

  /// 1-indexed positions holding x, ascending. Empty for unknown labels.
  std::span<const std::uint32_t> positions(Label x) const noexcept;
  /// Occurrences of x in the range: two binary searches in A_x.
  std::size_t count(Label x, ListRange r, QueryStats* stats = nullptr) const;

  std::size_t label_bound() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t words() const noexcept { return offsets_.size() + positions_.size(); }

  void save(BinaryWriter& w) const;
  static OccurrenceIndex load(BinaryReader& r);

 private:
  std::vector<std::uint32_t> offsets_;
  std::vector<std::uint32_t> positions_;
};

inline std::size_t range_count(const OccurrenceIndex& idx, Label x, ListRange r) { return idx.count(x, r); }

/// Block decomposition with a precomputed middle-mode table: a query checks
/// the two partial blocks' elements plus the stored mode of the blocks
/// strictly between them.
class ModeTradeoffIndex {
 public:
  /// b = ceil(n^(1 - epsilon)) blocks; requires 0 < epsilon <= 1/2.
  static ModeTradeoffIndex build(const LabeledList& list, double epsilon);
  static ModeTradeoffIndex with_blocks(const LabeledList& list, std::size_t blocks);
  static ModeTradeoffIndex with_block_size(const LabeledList& list, std::size_t block_size);

  ModeAnswer query(ListRange r, QueryStats* stats = nullptr) const;

  std::size_t size() const noexcept { return list_.size(); }
  std::size_t block_size() const noexcept { return block_size_; }
  std::size_t block_count() const noexcept { return block_count_; }
  std::size_t table_entries() const noexcept { return middle_.size(); }
  /// Mode of blocks strictly between 0-based blocks bi < bj; nullopt if empty.
  std::optional<ModeAnswer> middle_mode(std::size_t bi, std::size_t bj) const;
  const OccurrenceIndex& occurrences() const noexcept { return occ_; }
  std::size_t words() const noexcept;

  void save(BinaryWriter& w) const;
  static ModeTradeoffIndex load(BinaryReader& r);

 private:
  ModeTradeoffIndex(const LabeledList& list, std::size_t block_size);
  std::size_t pair_slot(std::size_t bi, std::size_t bj) const noexcept {
    return bi * block_count_ - bi * (bi + 1) / 2 + (bj - bi - 1);
  }

  LabeledList list_;
  OccurrenceIndex occ_;
  std::size_t block_size_ = 1;
  std::size_t block_count_ = 0;
  std::vector<ModeAnswer> middle_;  // frequency 0 marks an empty middle
};

/// Constant-time range mode. Every block pair points at a shared k x k table
/// of outcome codes: 0 = the pair's middle mode, 1..k = a position in the
/// left block, k+1..2k = a position in the right block.
class ModeConstantIndex {
 public:
  static std::size_t default_block_size(std::size_t n) noexcept;
  /// block_size == 0 picks default_block_size(n).
  static ModeConstantIndex build(const LabeledList& list, std::size_t block_size = 0);

  ModeAnswer query(ListRange r, QueryStats* stats = nullptr) const;

  std::size_t size() const noexcept { return list_.size(); }
  std::size_t block_size() const noexcept { return k_; }
  std::size_t block_count() const noexcept { return block_count_; }
  std::size_t distinct_tables() const noexcept { return tables_.count(); }
  std::uint32_t table_id(std::size_t bi, std::size_t bj) const noexcept { return pairs_[pair_slot(bi, bj)].table; }
  /// Code stored for offsets (x, y) in table `id`.
  std::uint16_t code(std::uint32_t id, std::size_t x, std::size_t y) const noexcept {
    return tables_.at(id, x * k_ + y);
  }
  std::size_t words() const noexcept;

  void save(BinaryWriter& w) const;
  static ModeConstantIndex load(BinaryReader& r);

 private:
  struct PairEntry {
    std::uint32_t table = 0;
    Label mode;
    std::uint32_t frequency = 0;  // middle frequency of mode, 0 for an empty middle
  };

  ModeConstantIndex() = default;
  std::size_t pair_slot(std::size_t bi, std::size_t bj) const noexcept {
    return bi * block_count_ - bi * (bi + 1) / 2 + (bj - bi - 1);
  }
  std::size_t block_start(std::size_t b) const noexcept { return b * k_ + 1; }
  std::size_t block_length(std::size_t b) const noexcept { return std::min(k_, list_.size() - b * k_); }
  void build_in_block();
  void build_pairs();

  LabeledList list_;
  OccurrenceIndex occ_;
  std::vector<std::uint32_t> position_rank_;  // index of position p inside A_{a_p}
  std::size_t k_ = 1;
  std::size_t block_count_ = 0;
  std::vector<PairEntry> pairs_;
  TableStore tables_;
  std::vector<ModeAnswer> in_block_;  // block * k^2 + x * k + y, x <= y
};

}  // namespace rqk
