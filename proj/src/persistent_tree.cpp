#include "rqk/persistent_tree.hpp"

#include <algorithm>
#include <cassert>
#include <string>

namespace rqk {

NodeRef PersistentTreeStore::make(Label value, NodeRef left, NodeRef right) {
  const auto ref = static_cast<NodeRef>(nodes_.size());
  nodes_.push_back(Node{value, left, right, 1, 1});
  refresh(ref);
  return ref;
}

void PersistentTreeStore::refresh(NodeRef t) noexcept {
  Node& n = nodes_[t];
  n.size = 1 + size_of(n.left) + size_of(n.right);
  n.height = 1 + std::max(height_of(n.left), height_of(n.right));
}

NodeRef PersistentTreeStore::rotate_right(NodeRef t) {
  const NodeRef l = nodes_[t].left;
  assert(t >= fresh_from_ && l >= fresh_from_);
  nodes_[t].left = nodes_[l].right;
  nodes_[l].right = t;
  refresh(t);
  refresh(l);
  return l;
}

NodeRef PersistentTreeStore::rotate_left(NodeRef t) {
  const NodeRef r = nodes_[t].right;
  assert(t >= fresh_from_ && r >= fresh_from_);
  nodes_[t].right = nodes_[r].left;
  nodes_[r].left = t;
  refresh(t);
  refresh(r);
  return r;
}

NodeRef PersistentTreeStore::rebalance(NodeRef t) {
  const auto lh = static_cast<int>(height_of(nodes_[t].left));
  const auto rh = static_cast<int>(height_of(nodes_[t].right));
  if (lh - rh > 1) {
    const NodeRef l = nodes_[t].left;
    if (height_of(nodes_[l].left) < height_of(nodes_[l].right)) nodes_[t].left = rotate_left(l);
    return rotate_right(t);
  }
  if (rh - lh > 1) {
    const NodeRef r = nodes_[t].right;
    if (height_of(nodes_[r].right) < height_of(nodes_[r].left)) nodes_[t].right = rotate_right(r);
    return rotate_left(t);
  }
  return t;
}

NodeRef PersistentTreeStore::insert_at(NodeRef t, Label x) {
  if (t == kNilRef) return make(x, kNilRef, kNilRef);
  const Node old = nodes_[t];
  if (x < old.value) return rebalance(make(old.value, insert_at(old.left, x), old.right));
  return rebalance(make(old.value, old.left, insert_at(old.right, x)));
}

VersionHandle PersistentTreeStore::insert(VersionHandle v, Label x) {
  assert(v.store == this || v.root == kNilRef);
  fresh_from_ = static_cast<NodeRef>(nodes_.size());
  const NodeRef root = insert_at(v.root, x);
  last_allocations_ = nodes_.size() - fresh_from_;
  return handle(root);
}

void PersistentTreeStore::save(BinaryWriter& w) const {
  w.put(static_cast<std::uint64_t>(nodes_.size()));
  for (const Node& n : nodes_) {
    w.put(n.value);
    w.put(n.left);
    w.put(n.right);
    w.put(n.size);
    w.put(n.height);
  }
}

PersistentTreeStore PersistentTreeStore::load(BinaryReader& r) {
  PersistentTreeStore store;
  const auto n = r.get<std::uint64_t>();
  store.nodes_.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t k = 0; k < n; ++k) {
    Node node;
    node.value = r.get<Label>();
    node.left = r.get<NodeRef>();
    node.right = r.get<NodeRef>();
    node.size = r.get<std::uint32_t>();
    node.height = r.get<std::uint32_t>();
    store.nodes_.push_back(node);
  }
  store.fresh_from_ = static_cast<NodeRef>(n);
  return store;
}

Label pbst_select(VersionHandle v, std::size_t r, QueryStats* stats) {
  if (r < 1 || r > v.size) {
    throw Error(Errc::rank_out_of_range, "rank " + std::to_string(r) + " of " + std::to_string(v.size));
  }
  const PersistentTreeStore& s = *v.store;
  NodeRef t = v.root;
  for (;;) {
    if (stats) ++stats->probes;
    const auto& n = s.node(t);
    const std::size_t left = s.size_of(n.left);
    if (r <= left) {
      t = n.left;
    } else if (r == left + 1) {
      return n.value;
    } else {
      r -= left + 1;
      t = n.right;
    }
  }
}

std::size_t pbst_rank_of(VersionHandle v, Label x) {
  std::size_t below = 0;
  NodeRef t = v.root;
  while (t != kNilRef) {
    const auto& n = v.store->node(t);
    if (x <= n.value) {
      t = n.left;
    } else {
      below += v.store->size_of(n.left) + 1;
      t = n.right;
    }
  }
  return below;
}

std::uint32_t pbst_height(VersionHandle v) noexcept {
  return v.root == kNilRef ? 0 : v.store->height_of(v.root);
}

std::vector<Label> pbst_in_order(VersionHandle v) {
  std::vector<Label> out;
  out.reserve(v.size);
  std::vector<NodeRef> stack;
  NodeRef t = v.root;
  while (t != kNilRef || !stack.empty()) {
    while (t != kNilRef) {
      stack.push_back(t);
      t = v.store->node(t).left;
    }
    t = stack.back();
    stack.pop_back();
    out.push_back(v.store->node(t).value);
    t = v.store->node(t).right;
  }
  return out;
}

}  // namespace rqk
