#include "rqk/workload.hpp"

#include <cmath>

namespace rqk::workload {

std::vector<Label> make_labels(std::size_t n, std::size_t alphabet, LabelDist dist, Rng& rng, double s) {
  alphabet = std::max<std::size_t>(alphabet, 1);
  std::vector<Label> out(n);
  if (dist == LabelDist::uniform) {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(alphabet - 1));
    for (auto& l : out) l = Label{pick(rng)};
    return out;
  }
  std::vector<double> weights(alphabet);
  for (std::size_t r = 0; r < alphabet; ++r) weights[r] = 1.0 / std::pow(static_cast<double>(r + 1), s);
  std::discrete_distribution<std::uint32_t> pick(weights.begin(), weights.end());
  for (auto& l : out) l = Label{pick(rng)};
  return out;
}

LabeledList make_list(std::size_t n, std::size_t alphabet, LabelDist dist, Rng& rng) {
  return LabeledList(make_labels(n, alphabet, dist, rng));
}

std::vector<NodeId> make_parents(std::size_t n, TreeShape shape, Rng& rng) {
  std::vector<NodeId> parent(n, kNilNode);
  for (std::size_t v = 1; v < n; ++v) {
    switch (shape) {
      case TreeShape::random: {
        std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(v - 1));
        parent[v] = pick(rng);
        break;
      }
      case TreeShape::path:
        parent[v] = static_cast<NodeId>(v - 1);
        break;
      case TreeShape::star:
        parent[v] = 0;
        break;
      case TreeShape::caterpillar: {
        // Even ids form the spine, odd ids are legs.
        parent[v] = static_cast<NodeId>(v % 2 == 0 ? v - 2 : v - 1);
        break;
      }
    }
  }
  return parent;
}

LabeledTree make_tree(std::size_t n, TreeShape shape, std::size_t alphabet, LabelDist dist, Rng& rng) {
  auto parent = make_parents(n, shape, rng);
  return LabeledTree::from_parents(std::move(parent), make_labels(n, alphabet, dist, rng));
}

std::size_t sqrt_alphabet(std::size_t n) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(n)))));
}

std::vector<ListRange> uniform_ranges(std::size_t n, std::size_t count, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(1, n);
  std::vector<ListRange> out(count);
  for (auto& r : out) {
    std::size_t a = pick(rng);
    std::size_t b = pick(rng);
    if (a > b) std::swap(a, b);
    r = ListRange{a, b};
  }
  return out;
}

std::vector<ListRange> short_ranges(std::size_t n, std::size_t count, std::size_t max_length, Rng& rng) {
  std::uniform_int_distribution<std::size_t> start(1, n);
  std::uniform_int_distribution<std::size_t> length(1, std::max<std::size_t>(max_length, 1));
  std::vector<ListRange> out(count);
  for (auto& r : out) {
    const std::size_t i = start(rng);
    r = ListRange{i, std::min(n, i + length(rng) - 1)};
  }
  return out;
}

std::vector<std::pair<NodeId, NodeId>> node_pairs(std::size_t n, std::size_t count, Rng& rng) {
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  std::vector<std::pair<NodeId, NodeId>> out(count);
  for (auto& p : out) {
    const NodeId u = pick(rng);
    p = {u, pick(rng)};
  }
  return out;
}

const char* to_string(LabelDist d) noexcept { return d == LabelDist::uniform ? "uniform" : "zipf"; }

const char* to_string(TreeShape s) noexcept {
  switch (s) {
    case TreeShape::random: return "random";
    case TreeShape::path: return "path";
    case TreeShape::star: return "star";
    case TreeShape::caterpillar: return "caterpillar";
  }
  return "?";
}

LabelDist parse_label_dist(const std::string& s) {
  if (s == "uniform") return LabelDist::uniform;
  if (s == "zipf") return LabelDist::zipf;
  throw Error(Errc::bad_params, "unknown label distribution '" + s + "'");
}

TreeShape parse_tree_shape(const std::string& s) {
  if (s == "random") return TreeShape::random;
  if (s == "path") return TreeShape::path;
  if (s == "star") return TreeShape::star;
  if (s == "caterpillar") return TreeShape::caterpillar;
  throw Error(Errc::bad_params, "unknown tree shape '" + s + "'");
}

}  // namespace rqk::workload
