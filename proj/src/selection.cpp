#include "rqk/selection.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace rqk {

SelectionCursor SelectionCursor::over_tree(VersionHandle v) noexcept {
  SelectionCursor c;
  c.tree_ = v.store;
  c.node_ = v.root;
  return c;
}

SelectionCursor SelectionCursor::over_array(std::span<const Label> sorted) noexcept {
  SelectionCursor c;
  c.array_ = sorted;
  c.lo_ = 0;
  c.hi_ = sorted.size();
  return c;
}

std::size_t SelectionCursor::size() const noexcept {
  return tree_ ? tree_->size_of(node_) : hi_ - lo_;
}

Label SelectionCursor::pivot() const noexcept {
  return tree_ ? tree_->node(node_).value : array_[lo_ + (hi_ - lo_) / 2];
}

std::size_t SelectionCursor::left_size() const noexcept {
  return tree_ ? tree_->size_of(tree_->node(node_).left) : (hi_ - lo_) / 2;
}

void SelectionCursor::discard_left() noexcept {
  if (tree_) {
    node_ = tree_->node(node_).right;
  } else {
    lo_ = lo_ + (hi_ - lo_) / 2 + 1;
  }
}

void SelectionCursor::discard_right() noexcept {
  if (tree_) {
    node_ = tree_->node(node_).left;
  } else {
    hi_ = lo_ + (hi_ - lo_) / 2;
  }
}

namespace {

// Winner tree over cursor pivots ordered by (pivot value, cursor index), a
// strict total order on pivots. Leaves hold -1 for exhausted cursors.
class PivotTournament {
 public:
  PivotTournament(std::span<SelectionCursor> cursors, QueryStats* stats)
      : cursors_(cursors), stats_(stats), width_(std::bit_ceil(std::max<std::size_t>(cursors.size(), 1))),
        min_(2 * width_, -1), max_(2 * width_, -1) {
    for (std::size_t t = 0; t < cursors.size(); ++t) {
      if (!cursors[t].empty()) min_[width_ + t] = max_[width_ + t] = static_cast<int>(t);
    }
    for (std::size_t p = width_ - 1; p >= 1; --p) pull(p);
  }

  int argmin() const noexcept { return min_[1]; }
  int argmax() const noexcept { return max_[1]; }

  void update(std::size_t t) {
    const int v = cursors_[t].empty() ? -1 : static_cast<int>(t);
    min_[width_ + t] = max_[width_ + t] = v;
    for (std::size_t p = (width_ + t) / 2; p >= 1; p /= 2) pull(p);
  }

 private:
  bool less(int a, int b) {
    if (stats_) ++stats_->comparisons;
    const Label pa = cursors_[a].pivot();
    const Label pb = cursors_[b].pivot();
    return pa < pb || (pa == pb && a < b);
  }

  void pull(std::size_t p) {
    const int a = min_[2 * p], b = min_[2 * p + 1];
    min_[p] = a < 0 ? b : b < 0 ? a : (less(b, a) ? b : a);
    const int c = max_[2 * p], d = max_[2 * p + 1];
    max_[p] = c < 0 ? d : d < 0 ? c : (less(c, d) ? d : c);
  }

  std::span<SelectionCursor> cursors_;
  QueryStats* stats_;
  std::size_t width_;
  std::vector<int> min_;
  std::vector<int> max_;
};

Label select_in_one(SelectionCursor& c, std::size_t r, QueryStats* stats) {
  for (;;) {
    if (stats) ++stats->probes;
    const std::size_t left = c.left_size();
    if (r <= left) {
      c.discard_right();
    } else if (r == left + 1) {
      return c.pivot();
    } else {
      r -= left + 1;
      c.discard_left();
    }
  }
}

}  // namespace

Label select_union(std::span<SelectionCursor> cursors, std::size_t r, QueryStats* stats) {
  std::size_t total = 0;
  std::size_t active = 0;
  std::size_t left_sum = 0;
  for (const auto& c : cursors) {
    total += c.size();
    if (!c.empty()) {
      ++active;
      left_sum += c.left_size();
    }
  }
  if (r < 1 || r > total) {
    throw Error(Errc::rank_out_of_range, "rank " + std::to_string(r) + " of " + std::to_string(total));
  }

  PivotTournament tournament(cursors, stats);
  while (active > 1) {
    if (stats) ++stats->probes;
    // The smallest pivot has union rank <= left_sum + 1 and the largest has
    // union rank >= left_sum + active, so one of them can always be dropped
    // together with the side of its subtree that cannot hold rank r.
    const bool drop_low = r > left_sum + 1;
    const auto t = static_cast<std::size_t>(drop_low ? tournament.argmin() : tournament.argmax());
    SelectionCursor& c = cursors[t];
    left_sum -= c.left_size();
    if (drop_low) {
      r -= c.left_size() + 1;
      c.discard_left();
    } else {
      c.discard_right();
    }
    if (c.empty()) {
      --active;
    } else {
      left_sum += c.left_size();
    }
    tournament.update(t);
  }
  return select_in_one(cursors[static_cast<std::size_t>(tournament.argmin())], r, stats);
}

Label select_three_trees(VersionHandle a, VersionHandle b, VersionHandle c, std::size_t r, QueryStats* stats) {
  SelectionCursor cursors[3] = {SelectionCursor::over_tree(a), SelectionCursor::over_tree(b),
                                SelectionCursor::over_tree(c)};
  return select_union(cursors, r, stats);
}

Label select_sorted_arrays(std::span<const std::span<const Label>> arrays, std::size_t r, QueryStats* stats,
                           bool check_sorted) {
  std::vector<SelectionCursor> cursors;
  cursors.reserve(arrays.size());
  for (auto a : arrays) {
    if (check_sorted && !std::is_sorted(a.begin(), a.end())) {
      throw Error(Errc::unsorted_input, "array passed to select_sorted_arrays is not ascending");
    }
    cursors.push_back(SelectionCursor::over_array(a));
  }
  return select_union(cursors, r, stats);
}

}  // namespace rqk
