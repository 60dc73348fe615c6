#include "rqk/mode_tree.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace rqk {

IntervalLabels interval_labels(const LabeledTree& tree) {
  const std::size_t n = tree.size();
  IntervalLabels out;
  out.inorder.assign(n, 0);
  out.lo.assign(n, 0);
  out.hi.assign(n, 0);
  if (n == 0) return out;
  if (tree.max_children() > 2) throw Error(Errc::invalid_tree, "interval labelling needs a binary tree");

  struct Frame {
    NodeId v;
    bool left_done;
  };
  std::vector<Frame> stack{{tree.root(), false}};
  std::uint32_t next = 1;
  while (!stack.empty()) {
    Frame& f = stack.back();
    const auto kids = tree.children(f.v);
    if (!f.left_done) {
      f.left_done = true;
      if (!kids.empty()) {
        stack.push_back({kids[0], false});
        continue;
      }
    }
    const NodeId v = f.v;
    stack.pop_back();
    out.inorder[v] = next++;
    if (kids.size() == 2) stack.push_back({kids[1], false});
  }
  for (auto it = tree.preorder().rbegin(); it != tree.preorder().rend(); ++it) {
    const NodeId v = *it;
    const auto kids = tree.children(v);
    out.lo[v] = kids.empty() ? out.inorder[v] : out.lo[kids[0]];
    out.hi[v] = kids.size() == 2 ? out.hi[kids[1]] : out.inorder[v];
  }
  return out;
}

TreeModeIndex TreeModeIndex::build(const LabeledTree& tree, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw Error(Errc::bad_epsilon, "epsilon must lie in (0, 1/2], got " + std::to_string(epsilon));
  }
  if (tree.size() == 0) throw Error(Errc::empty_input, "mode index over an empty tree");
  const std::size_t big_n = binarize(tree).tree.size();
  const double target = std::pow(static_cast<double>(big_n), 1.0 - epsilon);
  const auto b = static_cast<std::size_t>(std::max(1.0, std::ceil(target - 1e-9)));
  return with_components(tree, std::min(b, big_n));
}

TreeModeIndex TreeModeIndex::with_components(const LabeledTree& tree, std::size_t b) {
  if (tree.size() == 0) throw Error(Errc::empty_input, "mode index over an empty tree");
  TreeModeIndex idx;
  idx.original_size_ = tree.size();
  idx.bin_ = binarize(tree);
  if (b < 1 || b > idx.bin_.tree.size()) throw Error(Errc::bad_params, "component count must satisfy 1 <= b <= N");
  idx.lca_ = LcaIndex(idx.bin_.tree);
  idx.intervals_ = interval_labels(idx.bin_.tree);
  idx.part_ = partition_subtrees(idx.bin_.tree, b);
  idx.build_label_trees();
  idx.build_component_labels();
  idx.build_middle_table();
  return idx;
}

void TreeModeIndex::build_label_trees() {
  const LabeledTree& t = bin_.tree;
  const std::size_t labels = t.label_bound();
  std::vector<std::uint32_t> start(labels + 1, 0);
  for (NodeId v = 0; v < t.size(); ++v) {
    if (!t.label(v).reserved()) ++start[t.label(v).id + 1];
  }
  for (std::size_t x = 0; x < labels; ++x) start[x + 1] += start[x];
  std::vector<NodeId> by_label(start.back());
  {
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (NodeId v : t.preorder()) {
      if (!t.label(v).reserved()) by_label[fill[t.label(v).id]++] = v;
    }
  }

  member_offsets_.assign(1, 0);
  segment_offsets_.assign(1, 0);
  std::vector<NodeId> members;
  std::vector<std::size_t> stack;
  for (std::size_t x = 0; x < labels; ++x) {
    members.clear();
    const std::span<const NodeId> nodes(by_label.data() + start[x], start[x + 1] - start[x]);
    if (!nodes.empty()) {
      members.assign(nodes.begin(), nodes.end());
      for (std::size_t k = 0; k + 1 < nodes.size(); ++k) members.push_back(lca_.lca(nodes[k], nodes[k + 1]));
      members.push_back(t.root());
      std::sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
        if (intervals_.lo[a] != intervals_.lo[b]) return intervals_.lo[a] < intervals_.lo[b];
        return intervals_.hi[a] > intervals_.hi[b];
      });
      members.erase(std::unique(members.begin(), members.end()), members.end());
    }

    const std::size_t base = members_.size();
    const Label lx{static_cast<std::uint32_t>(x)};
    auto emit = [&](std::uint32_t pos, std::size_t member) {
      if (segment_starts_.size() > segment_offsets_.back() && segment_starts_.back() == pos) {
        segment_member_.back() = static_cast<std::uint32_t>(member);
      } else {
        segment_starts_.push_back(pos);
        segment_member_.push_back(static_cast<std::uint32_t>(member));
      }
    };
    stack.clear();
    for (std::size_t k = 0; k < members.size(); ++k) {
      const NodeId m = members[k];
      while (!stack.empty() && intervals_.hi[members[stack.back()]] < intervals_.lo[m]) {
        const NodeId closed = members[stack.back()];
        stack.pop_back();
        if (!stack.empty()) emit(intervals_.hi[closed] + 1, stack.back());
      }
      const std::uint32_t above = stack.empty() ? 0 : prefix_[base + stack.back()];
      members_.push_back(m);
      prefix_.push_back(above + (t.label(m) == lx ? 1 : 0));
      stack.push_back(k);
      emit(intervals_.lo[m], k);
    }
    while (stack.size() > 1) {
      const NodeId closed = members[stack.back()];
      stack.pop_back();
      emit(intervals_.hi[closed] + 1, stack.back());
    }
    member_offsets_.push_back(static_cast<std::uint32_t>(members_.size()));
    segment_offsets_.push_back(static_cast<std::uint32_t>(segment_starts_.size()));
  }
}

void TreeModeIndex::build_component_labels() {
  const LabeledTree& t = bin_.tree;
  std::vector<std::vector<NodeId>> nodes(part_.count);
  for (NodeId v = 0; v < t.size(); ++v) nodes[part_.component[v]].push_back(v);
  std::vector<std::uint32_t> stamp(t.label_bound(), kNilNode);
  component_offsets_.assign(1, 0);
  for (std::uint32_t c = 0; c < part_.count; ++c) {
    for (NodeId v : nodes[c]) {
      const Label l = t.label(v);
      if (l.reserved() || stamp[l.id] == c) continue;
      stamp[l.id] = c;
      component_labels_.push_back(l);
    }
    component_offsets_.push_back(static_cast<std::uint32_t>(component_labels_.size()));
  }
}

void TreeModeIndex::build_middle_table() {
  const LabeledTree& t = bin_.tree;
  const std::size_t c = part_.count;
  middle_.assign(c * (c - 1) / 2, ModeAnswer{});
  if (c < 2) return;

  std::vector<std::uint32_t> count(t.label_bound(), 0);
  std::vector<ModeAnswer> history;
  std::vector<std::uint32_t> seen(c, kNilNode);
  ModeAnswer best{};

  struct Frame {
    NodeId v;
    NodeId from;
    std::uint32_t next;  // neighbour cursor: children first, then the parent
  };
  std::vector<Frame> stack;
  std::vector<std::vector<NodeId>> members(c);
  for (NodeId v = 0; v < t.size(); ++v) members[part_.component[v]].push_back(v);

  auto neighbour = [&](NodeId v, std::uint32_t k) -> NodeId {
    const auto kids = t.children(v);
    if (k < kids.size()) return kids[k];
    return k == kids.size() ? t.parent(v) : kNilNode;
  };
  auto enter = [&](NodeId v, NodeId from, std::uint32_t p) {
    const std::uint32_t q = part_.component[v];
    if (seen[q] != p) {
      seen[q] = p;
      if (p < q) middle_[pair_slot(p, q)] = best;
    }
    history.push_back(best);
    const Label l = t.label(v);
    if (!l.reserved() && ++count[l.id] > best.frequency) best = ModeAnswer{l, count[l.id]};
    stack.push_back(Frame{v, from, 0});
  };
  auto leave = [&]() {
    const Label l = t.label(stack.back().v);
    if (!l.reserved()) --count[l.id];
    best = history.back();
    history.pop_back();
    stack.pop_back();
  };

  for (std::uint32_t p = 0; p < c; ++p) {
    seen[p] = p;
    for (NodeId z : members[p]) {
      for (std::uint32_t k = 0;; ++k) {
        const NodeId y = neighbour(z, k);
        if (k > t.children(z).size()) break;
        if (y == kNilNode || part_.component[y] == p) continue;
        enter(y, z, p);
        while (!stack.empty()) {
          Frame& f = stack.back();
          if (f.next > t.children(f.v).size()) {
            leave();
            continue;
          }
          const NodeId w = neighbour(f.v, f.next++);
          if (w != kNilNode && w != f.from) enter(w, f.v, p);
        }
      }
    }
  }
}

std::optional<ModeAnswer> TreeModeIndex::middle_mode(std::uint32_t p, std::uint32_t q) const {
  if (p == q) return std::nullopt;
  const ModeAnswer& m = middle_[pair_slot(p, q)];
  if (m.frequency == 0) return std::nullopt;
  return m;
}

bool TreeModeIndex::has_label_tree(Label x) const noexcept {
  return !x.reserved() && x.id + 1 < member_offsets_.size() && member_offsets_[x.id + 1] > member_offsets_[x.id];
}

LabelTreeView TreeModeIndex::label_tree(Label x) const {
  if (!has_label_tree(x)) throw Error(Errc::unknown_label, "label " + std::to_string(x.id) + " labels no node");
  const std::size_t a = member_offsets_[x.id];
  const std::size_t b = member_offsets_[x.id + 1];
  return LabelTreeView{std::span(members_).subspan(a, b - a), std::span(prefix_).subspan(a, b - a)};
}

std::uint32_t TreeModeIndex::prefix_at(Label x, NodeId v, QueryStats* stats) const {
  if (v == kNilNode) return 0;
  const auto first = segment_starts_.begin() + segment_offsets_[x.id];
  const auto last = segment_starts_.begin() + segment_offsets_[x.id + 1];
  if (stats) stats->probes += std::bit_width(static_cast<std::size_t>(last - first));
  const auto it = std::upper_bound(first, last, intervals_.inorder[v]) - 1;
  const std::uint32_t member = segment_member_[static_cast<std::size_t>(it - segment_starts_.begin())];
  return prefix_[member_offsets_[x.id] + member];
}

NodeId TreeModeIndex::map_to_label_tree(Label x, NodeId v, QueryStats* stats) const {
  if (v >= original_size_) throw Error(Errc::unknown_node, "node " + std::to_string(v) + " is not in the tree");
  if (!has_label_tree(x)) throw Error(Errc::unknown_label, "label " + std::to_string(x.id) + " labels no node");
  const auto first = segment_starts_.begin() + segment_offsets_[x.id];
  const auto last = segment_starts_.begin() + segment_offsets_[x.id + 1];
  if (stats) stats->probes += std::bit_width(static_cast<std::size_t>(last - first));
  const auto it = std::upper_bound(first, last, intervals_.inorder[v]) - 1;
  return members_[member_offsets_[x.id] + segment_member_[static_cast<std::size_t>(it - segment_starts_.begin())]];
}

std::size_t TreeModeIndex::range_count(Label x, NodeId u, NodeId v, QueryStats* stats) const {
  if (u >= original_size_ || v >= original_size_) throw Error(Errc::unknown_node, "node is not in the tree");
  if (!has_label_tree(x)) return 0;
  const NodeId w = lca_.lca(u, v);
  // c(u) + c(v) - c(w) - c(parent(w)) counts w exactly once.
  std::int64_t c = std::int64_t{prefix_at(x, u, stats)} + prefix_at(x, v, stats) - prefix_at(x, w, stats) -
                   prefix_at(x, bin_.tree.parent(w), stats);
  if (w >= original_size_ && bin_.tree.label(bin_.owner[w]) == x) ++c;
  return static_cast<std::size_t>(c);
}

ModeAnswer TreeModeIndex::query(NodeId u, NodeId v, QueryStats* stats) const {
  if (u >= original_size_ || v >= original_size_) {
    throw Error(Errc::unknown_node, "node " + std::to_string(std::max(u, v)) + " is not in the tree");
  }
  const LabeledTree& t = bin_.tree;
  const std::uint32_t p = part_.component[u];
  const std::uint32_t q = part_.component[v];
  if (p == q) {
    std::vector<Label> labels;
    NodeId a = u, b = v;
    while (a != b) {
      NodeId& deeper = t.depth(a) >= t.depth(b) ? a : b;
      if (!t.label(deeper).reserved()) labels.push_back(t.label(deeper));
      deeper = t.parent(deeper);
    }
    labels.push_back(t.label(bin_.owner[a]));
    if (stats) stats->probes += labels.size();
    std::sort(labels.begin(), labels.end());
    ModeAnswer best{};
    for (std::size_t k = 0, run = 0; k < labels.size(); ++k) {
      run = k > 0 && labels[k] == labels[k - 1] ? run + 1 : 1;
      if (run > best.frequency) best = ModeAnswer{labels[k], static_cast<std::uint32_t>(run)};
    }
    return best;
  }

  if (stats) ++stats->probes;
  ModeAnswer best{};
  auto consider = [&](Label x) {
    if (stats) ++stats->candidates;
    const auto f = static_cast<std::uint32_t>(range_count(x, u, v, stats));
    if (f > best.frequency) best = ModeAnswer{x, f};
  };
  for (Label x : component_labels(p)) consider(x);
  for (Label x : component_labels(q)) consider(x);
  if (const auto m = middle_mode(p, q)) consider(m->value);
  const NodeId w = lca_.lca(u, v);
  if (w >= original_size_) consider(t.label(bin_.owner[w]));
  return best;
}

std::size_t TreeModeIndex::words() const noexcept {
  const std::size_t n = bin_.tree.size();
  return lca_.words() + 6 * n + part_.component.size() + part_.sizes.size() + component_offsets_.size() +
         component_labels_.size() + 2 * middle_.size() + member_offsets_.size() + members_.size() + prefix_.size() +
         segment_offsets_.size() + segment_starts_.size() + segment_member_.size();
}

void TreeModeIndex::save(BinaryWriter& w) const {
  w.put(static_cast<std::uint64_t>(original_size_));
  save_tree(w, bin_.tree);
  w.put(static_cast<std::uint64_t>(bin_.synthetic_count));
  w.put_vector(bin_.owner);
  lca_.save(w);
  w.put_vector(intervals_.inorder);
  w.put_vector(intervals_.lo);
  w.put_vector(intervals_.hi);
  w.put_vector(part_.component);
  w.put(part_.count);
  w.put_vector(part_.sizes);
  w.put_vector(component_offsets_);
  w.put_vector(component_labels_);
  w.put(static_cast<std::uint64_t>(middle_.size()));
  for (const auto& m : middle_) {
    w.put(m.value);
    w.put(m.frequency);
  }
  w.put_vector(member_offsets_);
  w.put_vector(members_);
  w.put_vector(prefix_);
  w.put_vector(segment_offsets_);
  w.put_vector(segment_starts_);
  w.put_vector(segment_member_);
}

TreeModeIndex TreeModeIndex::load(BinaryReader& r) {
  TreeModeIndex idx;
  idx.original_size_ = static_cast<std::size_t>(r.get<std::uint64_t>());
  idx.bin_.tree = load_tree(r);
  idx.bin_.synthetic_count = static_cast<std::size_t>(r.get<std::uint64_t>());
  idx.bin_.owner = r.get_vector<NodeId>();
  idx.bin_.node_map.resize(idx.original_size_);
  for (NodeId v = 0; v < idx.original_size_; ++v) idx.bin_.node_map[v] = v;
  idx.lca_ = LcaIndex::load(r);
  idx.intervals_.inorder = r.get_vector<std::uint32_t>();
  idx.intervals_.lo = r.get_vector<std::uint32_t>();
  idx.intervals_.hi = r.get_vector<std::uint32_t>();
  idx.part_.component = r.get_vector<std::uint32_t>();
  idx.part_.count = r.get<std::uint32_t>();
  idx.part_.sizes = r.get_vector<std::uint32_t>();
  idx.component_offsets_ = r.get_vector<std::uint32_t>();
  idx.component_labels_ = r.get_vector<Label>();
  const auto entries = r.get<std::uint64_t>();
  for (std::uint64_t e = 0; e < entries; ++e) {
    ModeAnswer m;
    m.value = r.get<Label>();
    m.frequency = r.get<std::uint32_t>();
    idx.middle_.push_back(m);
  }
  idx.member_offsets_ = r.get_vector<std::uint32_t>();
  idx.members_ = r.get_vector<NodeId>();
  idx.prefix_ = r.get_vector<std::uint32_t>();
  idx.segment_offsets_ = r.get_vector<std::uint32_t>();
  idx.segment_starts_ = r.get_vector<std::uint32_t>();
  idx.segment_member_ = r.get_vector<std::uint32_t>();
  return idx;
}

}  // namespace rqk
