#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rqk/core.hpp"
#include "rqk/persistent_tree.hpp"

namespace rqk {

/// A shrinking window over one sorted source: either a subtree of an
/// augmented search tree, or a slice of a sorted array navigated as an
/// implicit balanced tree (midpoint = root).
class SelectionCursor {
 public:
  static SelectionCursor over_tree(VersionHandle v) noexcept;
  static SelectionCursor over_array(std::span<const Label> sorted) noexcept;

  bool empty() const noexcept { return tree_ ? node_ == kNilRef : lo_ >= hi_; }
  std::size_t size() const noexcept;
  Label pivot() const noexcept;
  std::size_t left_size() const noexcept;
  /// Drop the pivot and everything before it.
  void discard_left() noexcept;
  /// Drop the pivot and everything after it.
  void discard_right() noexcept;

 private:
  const PersistentTreeStore* tree_ = nullptr;
  NodeRef node_ = kNilRef;
  std::span<const Label> array_;
  std::size_t lo_ = 0;
  std::size_t hi_ = 0;
};

/// Element of 1-indexed rank r in the multiset union of the cursors' contents.
/// Each step discards one pivot plus one side of it from a single cursor, so
/// the number of steps is at most the sum of the cursors' heights. Throws
/// rank_out_of_range.
Label select_union(std::span<SelectionCursor> cursors, std::size_t r, QueryStats* stats = nullptr);

Label select_three_trees(VersionHandle a, VersionHandle b, VersionHandle c, std::size_t r,
                         QueryStats* stats = nullptr);

#ifdef NDEBUG
inline constexpr bool kCheckSortedInput = false;
#else
inline constexpr bool kCheckSortedInput = true;
#endif

/// Rank selection over the union of sorted arrays. With check_sorted, throws
/// unsorted_input when any array is not ascending.
Label select_sorted_arrays(std::span<const std::span<const Label>> arrays, std::size_t r,
                           QueryStats* stats = nullptr, bool check_sorted = kCheckSortedInput);

}  // namespace rqk
