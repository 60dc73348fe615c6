#include "rqk/fuzz.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "rqk/oracle.hpp"
#include "rqk/workload.hpp"

namespace rqk {

namespace {

using workload::LabelDist;
using workload::TreeShape;

std::vector<Label> query_labels(const Instance& instance, std::uint64_t a, std::uint64_t b) {
  if (instance.is_tree()) {
    return oracle::path_labels(instance.tree(), static_cast<NodeId>(a - 1), static_cast<NodeId>(b - 1));
  }
  const auto slice = instance.list().slice(ListRange{static_cast<std::size_t>(a), static_cast<std::size_t>(b)});
  return {slice.begin(), slice.end()};
}

std::string show(const Instance& instance, IndexKind kind, Label value, std::uint32_t witness) {
  std::ostringstream out;
  out << "value=" << instance.raw(value) << (is_mode_kind(kind) ? " frequency=" : " rank=") << witness;
  return out.str();
}

std::vector<Instance> instances_for(IndexKind kind, std::size_t n, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(kind)};
  workload::Rng rng(seq);
  const std::size_t alphabet = workload::sqrt_alphabet(n);
  std::vector<Instance> out;
  if (is_tree_kind(kind)) {
    const LabelDist dist = seed % 2 == 0 ? LabelDist::uniform : LabelDist::zipf;
    for (auto shape : {TreeShape::random, TreeShape::path, TreeShape::star, TreeShape::caterpillar}) {
      out.push_back(identity_instance(workload::make_tree(n, shape, alphabet, dist, rng)));
    }
  } else {
    for (auto dist : {LabelDist::uniform, LabelDist::zipf}) {
      out.push_back(identity_instance(workload::make_list(n, alphabet, dist, rng)));
    }
  }
  return out;
}

// First failing query of one build, or nullopt. Build errors count as
// findings against the full range.
std::optional<FuzzFinding> sweep(IndexKind kind, const BuildParams& params, const Instance& instance,
                                 const FuzzOptions& options, workload::Rng& rng, std::uint64_t& queries) {
  const std::size_t n = instance.size();
  std::optional<AnyIndex> index;
  try {
    index.emplace(build_index(kind, instance, params));
  } catch (const Error& e) {
    return FuzzFinding{kind, params, instance, 1, n, "a built index", std::string("build error: ") + e.what()};
  }
  auto probe = [&](std::uint64_t a, std::uint64_t b) {
    ++queries;
    return check_query(kind, params, *index, instance, a, b);
  };
  if (n <= options.exhaustive_limit) {
    for (std::uint64_t a = 1; a <= n; ++a) {
      for (std::uint64_t b = instance.is_tree() ? 1 : a; b <= n; ++b) {
        if (auto f = probe(a, b)) return f;
      }
    }
    return std::nullopt;
  }
  if (instance.is_tree()) {
    for (auto [u, v] : workload::node_pairs(n, options.sampled_queries, rng)) {
      if (auto f = probe(u + 1, v + 1)) return f;
    }
  } else {
    for (auto r : workload::uniform_ranges(n, options.sampled_queries, rng)) {
      if (auto f = probe(r.i, r.j)) return f;
    }
  }
  return std::nullopt;
}

// Does the single recorded query still fail on this instance?
std::optional<FuzzFinding> still_fails(const FuzzFinding& f, const Instance& instance, std::uint64_t a,
                                       std::uint64_t b) {
  // Same setting, clamped where the smaller instance makes it invalid.
  BuildParams params = f.params;
  params.k = std::min(params.k, instance.size());
  if (params.arity != 0) params.arity = std::min(params.arity, std::max<std::size_t>(instance.size(), 2));
  if (params.blocks != 0) params.blocks = std::min(params.blocks, instance.size());
  try {
    const AnyIndex index = build_index(f.kind, instance, params);
    return check_query(f.kind, params, index, instance, a, b);
  } catch (const Error& e) {
    return FuzzFinding{f.kind, params, instance, a, b, "a built index", std::string("build error: ") + e.what()};
  }
}

Instance list_without(const Instance& instance, std::size_t from, std::size_t count) {
  const auto labels = instance.list().labels();
  std::vector<Label> kept(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(from));
  kept.insert(kept.end(), labels.begin() + static_cast<std::ptrdiff_t>(from + count), labels.end());
  return Instance{LabeledList(std::move(kept)), instance.dictionary};
}

FuzzFinding shrink_list(FuzzFinding f) {
  // Cut the list down to the query range, then drop chunks of halving size
  // while the full-range query keeps failing.
  const auto slice = f.instance.list().slice(ListRange{static_cast<std::size_t>(f.a), static_cast<std::size_t>(f.b)});
  Instance cut{LabeledList(std::vector<Label>(slice.begin(), slice.end())), f.instance.dictionary};
  if (auto g = still_fails(f, cut, 1, cut.size())) f = *g;
  if (f.a != 1 || f.b != f.instance.size()) return f;
  for (std::size_t chunk = f.instance.size() / 2; chunk >= 1; chunk /= 2) {
    for (std::size_t from = 0; from + chunk <= f.instance.size() && f.instance.size() > chunk;) {
      const Instance smaller = list_without(f.instance, from, chunk);
      if (auto g = still_fails(f, smaller, 1, smaller.size())) {
        f = *g;
      } else {
        from += chunk;
      }
    }
  }
  return f;
}

// Tree minus leaf w, ids above w shifted down by one.
Instance tree_without_leaf(const Instance& instance, NodeId w) {
  const auto& t = instance.tree();
  std::vector<NodeId> parent;
  std::vector<Label> labels;
  for (NodeId v = 0; v < t.size(); ++v) {
    if (v == w) continue;
    const NodeId p = t.parent(v);
    parent.push_back(p == kNilNode ? kNilNode : p - (p > w ? 1 : 0));
    labels.push_back(t.label(v));
  }
  return Instance{LabeledTree::from_parents(std::move(parent), std::move(labels)), instance.dictionary};
}

FuzzFinding shrink_tree(FuzzFinding f) {
  // The u-v path alone, rooted at u, often keeps the failure.
  {
    const auto& t = f.instance.tree();
    const auto nodes = oracle::path(t, static_cast<NodeId>(f.a - 1), static_cast<NodeId>(f.b - 1));
    std::vector<NodeId> parent(nodes.size());
    std::vector<Label> labels(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      parent[k] = k == 0 ? kNilNode : static_cast<NodeId>(k - 1);
      labels[k] = t.label(nodes[k]);
    }
    const Instance path{LabeledTree::from_parents(std::move(parent), std::move(labels)), f.instance.dictionary};
    if (auto g = still_fails(f, path, 1, path.size())) f = *g;
  }
  constexpr std::size_t kLeafPruneLimit = 400;
  if (f.instance.size() > kLeafPruneLimit) return f;
  for (bool changed = true; changed;) {
    changed = false;
    const auto& t = f.instance.tree();
    for (NodeId w = t.size(); w-- > 0;) {
      if (!t.children(w).empty() || w == t.root() || w + 1 == f.a || w + 1 == f.b) continue;
      const Instance smaller = tree_without_leaf(f.instance, w);
      const auto shift = [w](std::uint64_t id) { return id - (id > w + 1 ? 1 : 0); };
      if (auto g = still_fails(f, smaller, shift(f.a), shift(f.b))) {
        f = *g;
        changed = true;
        break;
      }
    }
  }
  return f;
}

}  // namespace

std::vector<BuildParams> fuzz_configs(IndexKind kind, std::size_t n) {
  const std::size_t arity_cap = std::max<std::size_t>(n, 2);
  auto with_k = [&](std::size_t k) {
    BuildParams p;
    p.k = std::min(k, n);
    return p;
  };
  auto with_arity = [&](std::size_t b) {
    BuildParams p;
    p.arity = std::min(b, arity_cap);
    return p;
  };
  auto with_epsilon = [](double e) {
    BuildParams p;
    p.epsilon = e;
    return p;
  };
  switch (kind) {
    case IndexKind::mode_tradeoff:
    case IndexKind::mode_tree:
      return {with_epsilon(0.5), with_epsilon(0.25)};
    case IndexKind::mode_constant:
    case IndexKind::median_constant:
      return {with_k(0), with_k(1), with_k(3)};
    case IndexKind::median_block:
      return {with_arity(2), with_arity(3), with_arity(arity_cap)};
    case IndexKind::median_range_tree:
      return {with_arity(2), with_arity(4), with_arity(16)};
    case IndexKind::median_tree:
      return {BuildParams{}};
  }
  return {};
}

std::optional<FuzzFinding> check_query(IndexKind kind, const BuildParams& params, const AnyIndex& index,
                                       const Instance& instance, std::uint64_t a, std::uint64_t b) {
  const auto labels = query_labels(instance, a, b);
  std::string expected;
  bool ok = false;
  Answer got;
  try {
    got = answer(index, a, b);
  } catch (const Error& e) {
    return FuzzFinding{kind, params, instance, a, b, "an answer", std::string("query error: ") + e.what()};
  }
  if (is_mode_kind(kind)) {
    const auto want = oracle::mode(labels);
    expected = show(instance, kind, want.value, want.frequency);
    ok = got.witness == want.frequency && oracle::count(labels, got.value) == want.frequency;
  } else {
    const auto want = oracle::median(labels);
    expected = show(instance, kind, want.value, want.rank);
    ok = got.value == want.value && got.witness == want.rank;
  }
  if (ok) return std::nullopt;
  return FuzzFinding{kind, params, instance, a, b, expected, show(instance, kind, got.value, got.witness)};
}

FuzzReport run_fuzz(const FuzzOptions& options) {
  const std::vector<IndexKind> kinds =
      options.kinds.empty() ? std::vector<IndexKind>(kAllKinds.begin(), kAllKinds.end()) : options.kinds;
  FuzzReport report;
  std::ostringstream text;
  for (IndexKind kind : kinds) {
    for (std::size_t n : options.sizes) {
      if (n == 0) continue;
      for (std::uint64_t seed : options.seeds) {
        std::uint64_t queries = 0;
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(n), 17u};
        workload::Rng rng(seq);
        std::optional<FuzzFinding> finding;
        const auto instances = instances_for(kind, n, seed);
        const auto configs = fuzz_configs(kind, n);
        for (const auto& instance : instances) {
          for (const auto& params : configs) {
            finding = sweep(kind, params, instance, options, rng, queries);
            if (finding) break;
          }
          if (finding) break;
        }
        report.queries += queries;
        text << to_string(kind) << " n=" << n << " seed=" << seed << " instances=" << instances.size()
             << " configs=" << configs.size() << " queries=" << queries;
        if (!finding) {
          text << " ok\n";
          continue;
        }
        text << " MISMATCH " << describe(kind, finding->params) << " query " << finding->a << ' ' << finding->b
             << ": expected " << finding->expected << ", got " << finding->got << '\n';
        FuzzFinding small = finding->instance.is_tree() ? shrink_tree(*finding) : shrink_list(*finding);
        text << "minimized to n=" << small.instance.size() << " query " << small.a << ' ' << small.b
             << ": expected " << small.expected << ", got " << small.got << '\n';
        text << "result: FAIL after " << report.queries << " queries\n";
        report.passed = false;
        report.finding = std::move(small);
        report.text = text.str();
        return report;
      }
    }
  }
  text << "result: PASS (" << report.queries << " queries)\n";
  report.text = text.str();
  return report;
}

void write_reproducer(std::ostream& out, const FuzzFinding& f) {
  out << "# kind " << to_string(f.kind) << ' ' << describe(f.kind, f.params) << '\n';
  out << "# query " << f.a << ' ' << f.b << '\n';
  out << "# expected " << f.expected << '\n';
  out << "# got " << f.got << '\n';
  write_instance(out, f.instance);
}

}  // namespace rqk
