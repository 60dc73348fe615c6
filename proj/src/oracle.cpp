#include "rqk/oracle.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace rqk::oracle {

std::vector<NodeId> path(const LabeledTree& tree, NodeId u, NodeId v) {
  tree.check_node(u);
  tree.check_node(v);
  std::vector<NodeId> up;
  std::vector<NodeId> down;
  while (tree.depth(u) > tree.depth(v)) {
    up.push_back(u);
    u = tree.parent(u);
  }
  while (tree.depth(v) > tree.depth(u)) {
    down.push_back(v);
    v = tree.parent(v);
  }
  while (u != v) {
    up.push_back(u);
    down.push_back(v);
    u = tree.parent(u);
    v = tree.parent(v);
  }
  up.push_back(u);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

std::vector<Label> path_labels(const LabeledTree& tree, NodeId u, NodeId v) {
  std::vector<Label> out;
  for (NodeId w : path(tree, u, v)) out.push_back(tree.label(w));
  return out;
}

ModeAnswer mode(std::span<const Label> multiset) {
  if (multiset.empty()) throw Error(Errc::empty_range, "mode of an empty multiset");
  std::map<Label, std::uint32_t> counts;
  for (Label l : multiset) ++counts[l];
  ModeAnswer best{};
  for (const auto& [label, c] : counts) {
    if (c > best.frequency) best = ModeAnswer{label, c};
  }
  return best;
}

Label select(std::span<const Label> multiset, std::size_t rank) {
  if (rank < 1 || rank > multiset.size()) {
    throw Error(Errc::rank_out_of_range,
                "rank " + std::to_string(rank) + " of " + std::to_string(multiset.size()) + " elements");
  }
  std::vector<Label> sorted(multiset.begin(), multiset.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted[rank - 1];
}

MedianAnswer median(std::span<const Label> multiset) {
  if (multiset.empty()) throw Error(Errc::empty_range, "median of an empty multiset");
  const auto r = median_rank(multiset.size());
  return MedianAnswer{select(multiset, r), static_cast<std::uint32_t>(r)};
}

std::size_t count(std::span<const Label> multiset, Label x) {
  return static_cast<std::size_t>(std::count(multiset.begin(), multiset.end(), x));
}

bool is_ancestor(const LabeledTree& tree, NodeId ancestor, NodeId v) {
  for (NodeId w = v; w != kNilNode; w = tree.parent(w)) {
    if (w == ancestor) return true;
  }
  return false;
}

NodeId lca(const LabeledTree& tree, NodeId u, NodeId v) {
  while (!is_ancestor(tree, u, v)) u = tree.parent(u);
  return u;
}

}  // namespace rqk::oracle
