#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace rqk::detail {

// Counts over 0-based slots with prefix sums and order statistics.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0), top_(std::bit_floor(std::max<std::size_t>(n, 1))) {}

  void add(std::size_t slot, std::int32_t delta) noexcept {
    for (std::size_t p = slot + 1; p < tree_.size(); p += p & (~p + 1)) tree_[p] += delta;
  }

  /// Smallest slot whose prefix count reaches k (1-based k).
  std::size_t kth(std::int64_t k) const noexcept {
    std::size_t pos = 0;
    for (std::size_t step = top_; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] < k) {
        pos = next;
        k -= tree_[next];
      }
    }
    return pos;
  }

 private:
  std::vector<std::int64_t> tree_;
  std::size_t top_;
};

}  // namespace rqk::detail
