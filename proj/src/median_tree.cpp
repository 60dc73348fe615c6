#include "rqk/median_tree.hpp"

#include <deque>

#include "rqk/selection.hpp"

namespace rqk {

TreeMedianIndex::Level& TreeMedianIndex::level_at(std::size_t d) {
  const std::size_t n = tree_.size();
  while (levels_.size() <= d) {
    levels_.push_back(Level{std::vector<NodeId>(n, kNilNode), std::vector<NodeRef>(n, kNilRef),
                            std::vector<NodeRef>(n, kNilRef)});
  }
  return levels_[d];
}

TreeMedianIndex TreeMedianIndex::build(const LabeledTree& tree) {
  if (tree.size() == 0) throw Error(Errc::empty_input, "median index over an empty tree");
  TreeMedianIndex idx;
  idx.tree_ = tree;
  const std::size_t n = tree.size();
  const auto& t = idx.tree_;

  std::vector<char> removed(n, 0);
  std::vector<NodeId> order, from(n, kNilNode);
  std::vector<std::uint32_t> sub(n, 0);
  order.reserve(n);

  auto for_neighbors = [&](NodeId v, auto&& f) {
    if (t.parent(v) != kNilNode && !removed[t.parent(v)]) f(t.parent(v));
    for (NodeId c : t.children(v)) {
      if (!removed[c]) f(c);
    }
  };
  // BFS over the live component of start; fills order and from.
  auto collect = [&](NodeId start) {
    order.clear();
    order.push_back(start);
    from[start] = kNilNode;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const NodeId v = order[k];
      for_neighbors(v, [&](NodeId w) {
        if (w != from[v]) {
          from[w] = v;
          order.push_back(w);
        }
      });
    }
  };

  std::deque<std::pair<NodeId, std::uint32_t>> work{{t.root(), 0}};
  while (!work.empty()) {
    const auto [start, d] = work.front();
    work.pop_front();
    collect(start);
    const std::size_t total = order.size();
    if (total == 1) {
      removed[start] = 1;
      continue;
    }

    // Centroid: the node whose largest remaining part is at most total / 2.
    for (auto it = order.rbegin(); it != order.rend(); ++it) sub[*it] = 1;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      if (from[*it] != kNilNode) sub[from[*it]] += sub[*it];
    }
    NodeId c = start;
    for (NodeId v : order) {
      std::size_t largest = total - sub[v];
      for_neighbors(v, [&](NodeId w) {
        if (w != from[v]) largest = std::max<std::size_t>(largest, sub[w]);
      });
      if (2 * largest <= total) {
        c = v;
        break;
      }
    }

    collect(c);
    Level& level = idx.level_at(d);
    for (NodeId v : order) {
      level.centroid[v] = c;
      if (v == c) {
        level.inclusive[v] = idx.store_.insert(idx.store_.empty_version(), t.label(v)).root;
        level.exclusive[v] = kNilRef;
      } else {
        const NodeId p = from[v];
        level.inclusive[v] = idx.store_.insert(idx.store_.handle(level.inclusive[p]), t.label(v)).root;
        level.exclusive[v] = idx.store_.insert(idx.store_.handle(level.exclusive[p]), t.label(v)).root;
      }
    }
    removed[c] = 1;
    for_neighbors(c, [&](NodeId w) { work.emplace_back(w, d + 1); });
  }
  return idx;
}

MedianAnswer TreeMedianIndex::query(NodeId u, NodeId v, QueryStats* stats) const {
  tree_.check_node(u);
  tree_.check_node(v);
  if (u == v) {
    if (stats) ++stats->probes;
    return MedianAnswer{tree_.label(u), 1};
  }
  // Last level at which u and v share a component: its centroid separates them.
  std::size_t d = 0;
  while (d + 1 < levels_.size()) {
    const NodeId cu = levels_[d + 1].centroid[u];
    if (stats) stats->probes += 2;
    if (cu == kNilNode || cu != levels_[d + 1].centroid[v]) break;
    ++d;
  }
  const VersionHandle a = inclusive(d, u);
  const VersionHandle b = exclusive(d, v);
  const std::size_t rank = median_rank(std::size_t{a.size} + b.size);
  if (stats) stats->probes += 2;
  return MedianAnswer{select_three_trees(a, b, store_.empty_version(), rank, stats),
                      static_cast<std::uint32_t>(rank)};
}

std::size_t TreeMedianIndex::words() const noexcept {
  return tree_.size() * 2 + store_.words() + levels_.size() * tree_.size() * 3;
}

void TreeMedianIndex::save(BinaryWriter& w) const {
  save_tree(w, tree_);
  store_.save(w);
  w.put(static_cast<std::uint64_t>(levels_.size()));
  for (const Level& level : levels_) {
    w.put_vector(level.centroid);
    w.put_vector(level.inclusive);
    w.put_vector(level.exclusive);
  }
}

TreeMedianIndex TreeMedianIndex::load(BinaryReader& r) {
  TreeMedianIndex idx;
  idx.tree_ = load_tree(r);
  idx.store_ = PersistentTreeStore::load(r);
  const auto count = r.get<std::uint64_t>();
  const std::size_t n = idx.tree_.size();
  for (std::uint64_t d = 0; d < count; ++d) {
    Level level{r.get_vector<NodeId>(), r.get_vector<NodeRef>(), r.get_vector<NodeRef>()};
    if (level.centroid.size() != n || level.inclusive.size() != n || level.exclusive.size() != n) {
      throw Error(Errc::parse_error, "median tree level size mismatch");
    }
    for (std::size_t v = 0; v < n; ++v) {
      const bool bad_node = level.centroid[v] != kNilNode && level.centroid[v] >= n;
      const bool bad_ref = (level.inclusive[v] != kNilRef && level.inclusive[v] >= idx.store_.node_count()) ||
                           (level.exclusive[v] != kNilRef && level.exclusive[v] >= idx.store_.node_count());
      if (bad_node || bad_ref) throw Error(Errc::parse_error, "median tree level out of range");
    }
    idx.levels_.push_back(std::move(level));
  }
  return idx;
}

}  // namespace rqk
