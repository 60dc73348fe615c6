#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "rqk/error.hpp"

namespace rqk {

/// Dense label id. Ids at or above kReservedBase are synthetic labels created
/// by tree binarization; they never collide with normalized input ids.
struct Label {
  static constexpr std::uint32_t kReservedBase = 0x80000000u;

  std::uint32_t id = 0;

  constexpr auto operator<=>(const Label&) const = default;
  constexpr bool reserved() const noexcept { return id >= kReservedBase; }

  static constexpr Label synthetic(std::uint32_t ordinal) noexcept { return Label{kReservedBase + ordinal}; }
};

using NodeId = std::uint32_t;
inline constexpr NodeId kNilNode = std::numeric_limits<NodeId>::max();

/// 1-indexed inclusive position range.
struct ListRange {
  std::size_t i = 1;
  std::size_t j = 1;

  std::size_t length() const noexcept { return j - i + 1; }
};

struct ModeAnswer {
  Label value;
  std::uint32_t frequency = 0;
};

struct MedianAnswer {
  Label value;
  std::uint32_t rank = 0;
};

/// Rank selected as the median of an m-element multiset: floor(m/2) + 1.
constexpr std::size_t median_rank(std::size_t m) noexcept { return m / 2 + 1; }

/// Instrumented per-query counters. Queries add to whatever is already there.
struct QueryStats {
  std::uint64_t probes = 0;
  std::uint64_t candidates = 0;
  std::uint64_t comparisons = 0;
};

class LabeledList {
 public:
  LabeledList() = default;
  explicit LabeledList(std::vector<Label> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }

  /// 1-indexed access.
  Label at(std::size_t position) const noexcept { return labels_[position - 1]; }
  std::span<const Label> labels() const noexcept { return labels_; }
  std::span<const Label> slice(ListRange r) const noexcept { return std::span(labels_).subspan(r.i - 1, r.length()); }

  /// One past the largest label id present (0 for an empty list).
  std::size_t label_bound() const noexcept { return label_bound_; }

  /// Throws malformed_query unless 1 <= i <= j <= size().
  void check_range(ListRange r) const;

 private:
  std::vector<Label> labels_;
  std::size_t label_bound_ = 0;
};

/// Rooted tree with one label per node. Node ids are 0-based and dense.
class LabeledTree {
 public:
  LabeledTree() = default;

  /// parent[v] == kNilNode marks the root. Validates that exactly one root
  /// exists and every node reaches it.
  static LabeledTree from_parents(std::vector<NodeId> parent, std::vector<Label> labels);

  std::size_t size() const noexcept { return parent_.size(); }
  NodeId root() const noexcept { return root_; }
  NodeId parent(NodeId v) const noexcept { return parent_[v]; }
  Label label(NodeId v) const noexcept { return labels_[v]; }
  std::uint32_t depth(NodeId v) const noexcept { return depth_[v]; }
  std::span<const NodeId> children(NodeId v) const noexcept {
    return std::span(child_list_).subspan(child_offset_[v], child_offset_[v + 1] - child_offset_[v]);
  }
  std::span<const Label> labels() const noexcept { return labels_; }
  std::span<const NodeId> parents() const noexcept { return parent_; }
  /// Nodes in DFS preorder from the root; children visited in id order.
  std::span<const NodeId> preorder() const noexcept { return preorder_; }

  bool contains(NodeId v) const noexcept { return v < parent_.size(); }
  void check_node(NodeId v) const;
  std::size_t max_children() const noexcept;
  std::size_t label_bound() const noexcept { return label_bound_; }

 private:
  std::vector<NodeId> parent_;
  std::vector<Label> labels_;
  std::vector<std::uint32_t> child_offset_;
  std::vector<NodeId> child_list_;
  std::vector<std::uint32_t> depth_;
  std::vector<NodeId> preorder_;
  NodeId root_ = kNilNode;
  std::size_t label_bound_ = 0;
};

template <class T>
struct Normalized {
  std::vector<Label> ids;
  /// dictionary[id] is the raw value normalized to that id.
  std::vector<T> dictionary;
};

/// Replaces raw values by dense order-preserving ranks over the distinct values.
template <class T>
Normalized<T> normalize(std::span<const T> raw) {
  if (raw.empty()) throw Error(Errc::empty_input, "cannot normalize an empty label sequence");
  Normalized<T> out;
  out.dictionary.assign(raw.begin(), raw.end());
  std::sort(out.dictionary.begin(), out.dictionary.end());
  out.dictionary.erase(std::unique(out.dictionary.begin(), out.dictionary.end()), out.dictionary.end());
  out.ids.reserve(raw.size());
  for (const T& v : raw) {
    auto it = std::lower_bound(out.dictionary.begin(), out.dictionary.end(), v);
    out.ids.push_back(Label{static_cast<std::uint32_t>(it - out.dictionary.begin())});
  }
  return out;
}

template <class T>
std::pair<LabeledList, std::vector<T>> normalize_list(std::span<const T> raw) {
  auto n = normalize(raw);
  return {LabeledList(std::move(n.ids)), std::move(n.dictionary)};
}

template <class T>
std::pair<LabeledTree, std::vector<T>> normalize_tree(std::vector<NodeId> parent, std::span<const T> raw) {
  auto n = normalize(raw);
  return {LabeledTree::from_parents(std::move(parent), std::move(n.ids)), std::move(n.dictionary)};
}

/// Convenience for tests and generators: wraps plain integers as label ids.
std::vector<Label> to_labels(std::span<const std::uint32_t> ids);
inline std::vector<Label> to_labels(std::initializer_list<std::uint32_t> ids) {
  return to_labels(std::span<const std::uint32_t>(ids.begin(), ids.size()));
}

}  // namespace rqk
