#include "rqk/lca.hpp"

#include <bit>
#include <utility>

namespace rqk {

LcaIndex::LcaIndex(const LabeledTree& tree) {
  const std::size_t n = tree.size();
  euler_.reserve(2 * n);
  depth_.reserve(2 * n);
  first_visit_.assign(n, 0);

  // Iterative DFS; each frame remembers how many children it has emitted.
  std::vector<std::pair<NodeId, std::uint32_t>> stack{{tree.root(), 0}};
  first_visit_[tree.root()] = 0;
  euler_.push_back(tree.root());
  depth_.push_back(0);
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    auto kids = tree.children(v);
    if (next < kids.size()) {
      NodeId c = kids[next++];
      first_visit_[c] = static_cast<std::uint32_t>(euler_.size());
      euler_.push_back(c);
      depth_.push_back(tree.depth(c));
      stack.emplace_back(c, 0);
    } else {
      stack.pop_back();
      if (!stack.empty()) {
        NodeId p = stack.back().first;
        euler_.push_back(p);
        depth_.push_back(tree.depth(p));
      }
    }
  }

  const std::size_t m = euler_.size();
  sparse_.emplace_back(m);
  for (std::uint32_t p = 0; p < m; ++p) sparse_[0][p] = p;
  for (std::size_t k = 1; (std::size_t{1} << k) <= m; ++k) {
    const std::size_t half = std::size_t{1} << (k - 1);
    const std::size_t len = m - (std::size_t{1} << k) + 1;
    std::vector<std::uint32_t> row(len);
    const auto& prev = sparse_[k - 1];
    for (std::size_t p = 0; p < len; ++p) row[p] = min_pos(prev[p], prev[p + half]);
    sparse_.push_back(std::move(row));
  }
}

NodeId LcaIndex::lca(NodeId u, NodeId v) const {
  std::uint32_t a = first_visit_[u];
  std::uint32_t b = first_visit_[v];
  if (a > b) std::swap(a, b);
  const std::uint32_t len = b - a + 1;
  const int k = std::bit_width(len) - 1;
  const auto& row = sparse_[k];
  return euler_[min_pos(row[a], row[b + 1 - (std::uint32_t{1} << k)])];
}

std::size_t LcaIndex::words() const noexcept {
  std::size_t w = euler_.size() + first_visit_.size() + depth_.size();
  for (const auto& row : sparse_) w += row.size();
  return w;
}

void LcaIndex::save(BinaryWriter& w) const {
  w.put_vector(euler_);
  w.put_vector(first_visit_);
  w.put_vector(depth_);
  w.put(static_cast<std::uint32_t>(sparse_.size()));
  for (const auto& row : sparse_) w.put_vector(row);
}

LcaIndex LcaIndex::load(BinaryReader& r) {
  LcaIndex idx;
  idx.euler_ = r.get_vector<NodeId>();
  idx.first_visit_ = r.get_vector<std::uint32_t>();
  idx.depth_ = r.get_vector<std::uint32_t>();
  const auto rows = r.get<std::uint32_t>();
  for (std::uint32_t k = 0; k < rows; ++k) idx.sparse_.push_back(r.get_vector<std::uint32_t>());
  return idx;
}

}  // namespace rqk
