#include "rqk/tree_partition.hpp"

#include <string>

namespace rqk {

namespace {

// Hangs `kids` below `top` as the leaves of a complete binary tree rooted at
// `top`, creating synthetic inner nodes as needed.
void attach_balanced(NodeId top, std::span<const NodeId> kids, std::vector<NodeId>& parent,
                     std::vector<Label>& labels, std::uint32_t& synthetic) {
  if (kids.size() <= 2) {
    for (NodeId c : kids) parent[c] = top;
    return;
  }
  const std::size_t half = kids.size() / 2;
  for (auto part : {kids.first(half), kids.subspan(half)}) {
    if (part.size() == 1) {
      parent[part[0]] = top;
      continue;
    }
    const auto s = static_cast<NodeId>(parent.size());
    parent.push_back(top);
    labels.push_back(Label::synthetic(synthetic++));
    attach_balanced(s, part, parent, labels, synthetic);
  }
}

void require_binary(const LabeledTree& tree) {
  if (tree.max_children() > 2) throw Error(Errc::invalid_tree, "tree is not binary");
}

// Separator edge restricted to the nodes listed in `nodes` (a connected
// component, in tree preorder). Returns the child endpoint's position in
// `nodes` and its side's size.
struct Cut {
  std::size_t position = 0;
  std::uint32_t size = 0;
};

Cut best_cut(const LabeledTree& tree, std::span<const NodeId> nodes, const std::vector<std::uint32_t>& component,
             std::uint32_t id, std::vector<std::uint32_t>& scratch) {
  for (NodeId v : nodes) scratch[v] = 1;
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const NodeId p = tree.parent(*it);
    if (p != kNilNode && component[p] == id) scratch[p] += scratch[*it];
  }
  const auto total = static_cast<std::uint32_t>(nodes.size());
  Cut best{0, 0};
  std::uint32_t best_worst = total + 1;
  for (std::size_t k = 1; k < nodes.size(); ++k) {  // nodes[0] is the component root
    const std::uint32_t side = scratch[nodes[k]];
    const std::uint32_t worst = std::max(side, total - side);
    if (worst < best_worst) {
      best_worst = worst;
      best = Cut{k, side};
    }
  }
  return best;
}

}  // namespace

BinarizedTree binarize(const LabeledTree& tree) {
  const std::size_t n = tree.size();
  std::vector<NodeId> parent(tree.parents().begin(), tree.parents().end());
  std::vector<Label> labels(tree.labels().begin(), tree.labels().end());
  std::uint32_t synthetic = 0;
  for (NodeId v = 0; v < n; ++v) {
    auto kids = tree.children(v);
    if (kids.size() > 2) attach_balanced(v, kids, parent, labels, synthetic);
  }
  BinarizedTree out;
  out.tree = LabeledTree::from_parents(std::move(parent), std::move(labels));
  out.node_map.resize(n);
  for (NodeId v = 0; v < n; ++v) out.node_map[v] = v;
  out.synthetic_count = synthetic;
  out.owner.resize(out.tree.size());
  for (NodeId v : out.tree.preorder()) {
    out.owner[v] = v < n ? v : out.owner[out.tree.parent(v)];
  }
  return out;
}

TreeEdge edge_separator(const LabeledTree& tree) {
  if (tree.size() < 2) throw Error(Errc::single_node, "a single node has no separator edge");
  require_binary(tree);
  std::vector<std::uint32_t> component(tree.size(), 0);
  std::vector<std::uint32_t> scratch(tree.size(), 0);
  const auto nodes = tree.preorder();
  const Cut cut = best_cut(tree, nodes, component, 0, scratch);
  const NodeId child = nodes[cut.position];
  return TreeEdge{tree.parent(child), child};
}

TreePartition partition_subtrees(const LabeledTree& tree, std::size_t b) {
  require_binary(tree);
  const std::size_t n = tree.size();
  if (b < 1 || b > n) throw Error(Errc::bad_params, "component count must satisfy 1 <= b <= n");
  const std::size_t limit = (n + b - 1) / b;

  TreePartition out;
  out.component.assign(n, 0);
  out.count = 1;
  std::vector<std::uint32_t> scratch(n, 0);

  struct Work {
    std::uint32_t id;
    std::vector<NodeId> nodes;  // preorder
  };
  std::vector<Work> stack;
  stack.push_back(Work{0, std::vector<NodeId>(tree.preorder().begin(), tree.preorder().end())});
  while (!stack.empty()) {
    Work w = std::move(stack.back());
    stack.pop_back();
    if (w.nodes.size() <= limit) continue;
    const Cut cut = best_cut(tree, w.nodes, out.component, w.id, scratch);
    const std::uint32_t fresh = out.count++;
    std::vector<NodeId> below(w.nodes.begin() + static_cast<std::ptrdiff_t>(cut.position),
                              w.nodes.begin() + static_cast<std::ptrdiff_t>(cut.position + cut.size));
    std::vector<NodeId> rest(w.nodes.begin(), w.nodes.begin() + static_cast<std::ptrdiff_t>(cut.position));
    rest.insert(rest.end(), w.nodes.begin() + static_cast<std::ptrdiff_t>(cut.position + cut.size), w.nodes.end());
    for (NodeId v : below) out.component[v] = fresh;
    stack.push_back(Work{w.id, std::move(rest)});
    stack.push_back(Work{fresh, std::move(below)});
  }

  out.sizes.assign(out.count, 0);
  for (auto c : out.component) ++out.sizes[c];
  return out;
}

}  // namespace rqk
