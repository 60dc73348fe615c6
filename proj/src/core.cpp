#include "rqk/core.hpp"

#include <string>

namespace rqk {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::empty_input: return "EmptyInput";
    case Errc::empty_range: return "EmptyRange";
    case Errc::rank_out_of_range: return "RankOutOfRange";
    case Errc::unknown_node: return "UnknownNode";
    case Errc::unknown_label: return "UnknownLabel";
    case Errc::unsorted_input: return "UnsortedInput";
    case Errc::single_node: return "SingleNode";
    case Errc::invalid_tree: return "InvalidTree";
    case Errc::bad_epsilon: return "BadEpsilon";
    case Errc::bad_branching: return "BadBranching";
    case Errc::bad_params: return "BadParams";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
    case Errc::version_mismatch: return "VersionMismatch";
    case Errc::malformed_query: return "MalformedQuery";
  }
  return "Unknown";
}

LabeledList::LabeledList(std::vector<Label> labels) : labels_(std::move(labels)) {
  for (Label l : labels_) label_bound_ = std::max<std::size_t>(label_bound_, std::size_t{l.id} + 1);
}

void LabeledList::check_range(ListRange r) const {
  if (r.i < 1 || r.i > r.j || r.j > labels_.size()) {
    throw Error(Errc::malformed_query, "range [" + std::to_string(r.i) + ", " + std::to_string(r.j) +
                                           "] outside 1.." + std::to_string(labels_.size()));
  }
}

LabeledTree LabeledTree::from_parents(std::vector<NodeId> parent, std::vector<Label> labels) {
  const std::size_t n = parent.size();
  if (n == 0) throw Error(Errc::empty_input, "tree has no nodes");
  if (labels.size() != n) throw Error(Errc::invalid_tree, "label count differs from node count");

  LabeledTree t;
  t.parent_ = std::move(parent);
  t.labels_ = std::move(labels);
  for (Label l : t.labels_) {
    if (!l.reserved()) t.label_bound_ = std::max<std::size_t>(t.label_bound_, std::size_t{l.id} + 1);
  }

  t.child_offset_.assign(n + 1, 0);
  for (NodeId v = 0; v < n; ++v) {
    NodeId p = t.parent_[v];
    if (p == kNilNode) {
      if (t.root_ != kNilNode) throw Error(Errc::invalid_tree, "more than one root");
      t.root_ = v;
    } else if (p >= n || p == v) {
      throw Error(Errc::invalid_tree, "node " + std::to_string(v) + " has invalid parent");
    } else {
      ++t.child_offset_[p + 1];
    }
  }
  if (t.root_ == kNilNode) throw Error(Errc::invalid_tree, "no root");
  for (std::size_t v = 0; v < n; ++v) t.child_offset_[v + 1] += t.child_offset_[v];
  t.child_list_.resize(n - 1);
  std::vector<std::uint32_t> fill(t.child_offset_.begin(), t.child_offset_.end() - 1);
  for (NodeId v = 0; v < n; ++v) {
    if (t.parent_[v] != kNilNode) t.child_list_[fill[t.parent_[v]]++] = v;
  }

  t.depth_.assign(n, 0);
  t.preorder_.reserve(n);
  std::vector<NodeId> stack{t.root_};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    t.preorder_.push_back(v);
    auto kids = t.children(v);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) {
      t.depth_[*it] = t.depth_[v] + 1;
      stack.push_back(*it);
    }
  }
  if (t.preorder_.size() != n) throw Error(Errc::invalid_tree, "tree is disconnected or cyclic");
  return t;
}

void LabeledTree::check_node(NodeId v) const {
  if (!contains(v)) throw Error(Errc::unknown_node, "node " + std::to_string(v) + " not in tree");
}

std::size_t LabeledTree::max_children() const noexcept {
  std::size_t best = 0;
  for (std::size_t v = 0; v < size(); ++v) best = std::max<std::size_t>(best, child_offset_[v + 1] - child_offset_[v]);
  return best;
}

std::vector<Label> to_labels(std::span<const std::uint32_t> ids) {
  std::vector<Label> out;
  out.reserve(ids.size());
  for (auto id : ids) out.push_back(Label{id});
  return out;
}

}  // namespace rqk
