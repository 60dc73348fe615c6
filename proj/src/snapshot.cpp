#include "rqk/snapshot.hpp"

#include <sstream>

namespace rqk {

namespace {

constexpr std::array<std::string_view, 7> kNames{
    "mode-tradeoff", "mode-constant", "median-block", "median-range-tree",
    "median-constant", "mode-tree", "median-tree",
};

std::uint32_t ordinal(IndexKind kind) noexcept { return static_cast<std::uint32_t>(kind) - 1; }

const LabeledList& need_list(IndexKind kind, const Instance& instance) {
  if (instance.is_tree()) throw Error(Errc::bad_params, std::string(to_string(kind)) + " needs a list input");
  return instance.list();
}

const LabeledTree& need_tree(IndexKind kind, const Instance& instance) {
  if (!instance.is_tree()) throw Error(Errc::bad_params, std::string(to_string(kind)) + " needs a tree input");
  return instance.tree();
}

std::size_t arity_or_default(const BuildParams& p) { return p.arity == 0 ? 2 : p.arity; }

AnyIndex load_payload(IndexKind kind, BinaryReader& r) {
  switch (kind) {
    case IndexKind::mode_tradeoff: return ModeTradeoffIndex::load(r);
    case IndexKind::mode_constant: return ModeConstantIndex::load(r);
    case IndexKind::median_block: return MedianBlockIndex::load(r);
    case IndexKind::median_range_tree: return RangeTreeIndex::load(r);
    case IndexKind::median_constant: return MedianConstantIndex::load(r);
    case IndexKind::mode_tree: return TreeModeIndex::load(r);
    case IndexKind::median_tree: return TreeMedianIndex::load(r);
  }
  throw Error(Errc::parse_error, "unknown kind tag");
}

}  // namespace

std::string_view to_string(IndexKind kind) noexcept { return kNames[ordinal(kind)]; }

IndexKind parse_kind(std::string_view name) {
  for (IndexKind kind : kAllKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(Errc::bad_params, "unknown kind \"" + std::string(name) + "\"");
}

bool is_tree_kind(IndexKind kind) noexcept { return kind == IndexKind::mode_tree || kind == IndexKind::median_tree; }

bool is_mode_kind(IndexKind kind) noexcept {
  return kind == IndexKind::mode_tradeoff || kind == IndexKind::mode_constant || kind == IndexKind::mode_tree;
}

std::string describe(IndexKind kind, const BuildParams& p) {
  std::ostringstream out;
  switch (kind) {
    case IndexKind::mode_tradeoff:
    case IndexKind::mode_tree:
      if (p.blocks != 0) {
        out << "blocks=" << p.blocks;
      } else {
        out << "epsilon=" << p.epsilon;
      }
      break;
    case IndexKind::mode_constant:
    case IndexKind::median_constant:
      if (p.k != 0) {
        out << "k=" << p.k;
      } else {
        out << "k=default";
      }
      break;
    case IndexKind::median_block:
    case IndexKind::median_range_tree:
      out << "b=" << arity_or_default(p);
      break;
    case IndexKind::median_tree:
      out << "-";
      break;
  }
  return out.str();
}

AnyIndex build_index(IndexKind kind, const Instance& instance, const BuildParams& p) {
  switch (kind) {
    case IndexKind::mode_tradeoff: {
      const auto& list = need_list(kind, instance);
      return p.blocks != 0 ? ModeTradeoffIndex::with_blocks(list, p.blocks) : ModeTradeoffIndex::build(list, p.epsilon);
    }
    case IndexKind::mode_constant:
      return ModeConstantIndex::build(need_list(kind, instance), p.k);
    case IndexKind::median_block:
      return MedianBlockIndex::build(need_list(kind, instance), arity_or_default(p));
    case IndexKind::median_range_tree:
      return RangeTreeIndex::build(need_list(kind, instance), arity_or_default(p));
    case IndexKind::median_constant:
      return MedianConstantIndex::build(need_list(kind, instance), p.k);
    case IndexKind::mode_tree: {
      const auto& tree = need_tree(kind, instance);
      return p.blocks != 0 ? TreeModeIndex::with_components(tree, p.blocks) : TreeModeIndex::build(tree, p.epsilon);
    }
    case IndexKind::median_tree:
      return TreeMedianIndex::build(need_tree(kind, instance));
  }
  throw Error(Errc::bad_params, "unknown kind");
}

IndexKind kind_of(const AnyIndex& index) noexcept { return kAllKinds[index.index()]; }

std::size_t words_of(const AnyIndex& index) noexcept {
  return std::visit([](const auto& idx) { return idx.words(); }, index);
}

Answer answer(const AnyIndex& index, std::uint64_t a, std::uint64_t b) {
  QueryStats stats;
  Answer out;
  std::visit(
      [&](const auto& idx) {
        using T = std::decay_t<decltype(idx)>;
        if constexpr (std::is_same_v<T, TreeModeIndex> || std::is_same_v<T, TreeMedianIndex>) {
          auto node = [&](std::uint64_t id) {
            if (id == 0 || id > idx.size()) throw Error(Errc::unknown_node, "node " + std::to_string(id) + " not in tree");
            return static_cast<NodeId>(id - 1);
          };
          const NodeId u = node(a), v = node(b);
          if constexpr (std::is_same_v<T, TreeModeIndex>) {
            const auto m = idx.query(u, v, &stats);
            out = Answer{m.value, m.frequency, 0};
          } else {
            const auto m = idx.query(u, v, &stats);
            out = Answer{m.value, m.rank, 0};
          }
        } else {
          const ListRange r{static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
          if constexpr (std::is_same_v<T, ModeTradeoffIndex> || std::is_same_v<T, ModeConstantIndex>) {
            const auto m = idx.query(r, &stats);
            out = Answer{m.value, m.frequency, 0};
          } else {
            const auto m = idx.query(r, &stats);
            out = Answer{m.value, m.rank, 0};
          }
        }
      },
      index);
  out.probes = stats.probes;
  return out;
}

void write_snapshot(std::ostream& out, const Snapshot& snapshot) {
  BinaryWriter w(out);
  w.put_bytes(kSnapshotMagic.data(), kSnapshotMagic.size());
  w.put(kSnapshotVersion);
  w.put(static_cast<std::uint32_t>(kind_of(snapshot.index)));
  std::visit([&](const auto& idx) { idx.save(w); }, snapshot.index);
  w.put_vector(snapshot.dictionary);
}

Snapshot read_snapshot(std::istream& in) {
  BinaryReader r(in);
  std::array<char, 4> magic{};
  try {
    r.get_bytes(magic.data(), magic.size());
  } catch (const Error&) {
    throw Error(Errc::parse_error, "not a snapshot: too short");
  }
  if (magic != kSnapshotMagic) throw Error(Errc::parse_error, "not a snapshot: bad magic bytes");
  const auto version = r.get<std::uint32_t>();
  if (version != kSnapshotVersion) {
    throw Error(Errc::version_mismatch, "snapshot version " + std::to_string(version) + ", expected " +
                                            std::to_string(kSnapshotVersion));
  }
  const auto tag = r.get<std::uint32_t>();
  if (tag < 1 || tag > kAllKinds.size()) throw Error(Errc::parse_error, "unknown kind tag " + std::to_string(tag));
  Snapshot s{load_payload(static_cast<IndexKind>(tag), r), {}};
  s.dictionary = r.get_vector<std::int64_t>();
  return s;
}

}  // namespace rqk
