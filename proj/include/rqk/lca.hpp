#pragma once

#include <cstdint>
#include <vector>

#include "rqk/binary_io.hpp"
#include "rqk/core.hpp"

namespace rqk {

/// Lowest common ancestors via an Euler tour and a doubling sparse table over
/// tour depths. O(n log n) words, O(1) per query.
class LcaIndex {
 public:
  LcaIndex() = default;
  explicit LcaIndex(const LabeledTree& tree);

  NodeId lca(NodeId u, NodeId v) const;
  std::size_t words() const noexcept;

  void save(BinaryWriter& w) const;
  static LcaIndex load(BinaryReader& r);

 private:
  std::uint32_t min_pos(std::uint32_t a, std::uint32_t b) const noexcept {
    return depth_[a] <= depth_[b] ? a : b;
  }

  std::vector<NodeId> euler_;
  std::vector<std::uint32_t> first_visit_;
  std::vector<std::uint32_t> depth_;
  // sparse_[k][p] = tour position of minimum depth in [p, p + 2^k).
  std::vector<std::vector<std::uint32_t>> sparse_;
};

}  // namespace rqk
