#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rqk/core.hpp"

namespace rqk::workload {

using Rng = std::mt19937_64;

enum class LabelDist { uniform, zipf };
enum class TreeShape { random, path, star, caterpillar };

/// Labels uniform over `alphabet` values, or Zipf-distributed with exponent s.
std::vector<Label> make_labels(std::size_t n, std::size_t alphabet, LabelDist dist, Rng& rng, double s = 1.2);
LabeledList make_list(std::size_t n, std::size_t alphabet, LabelDist dist, Rng& rng);

/// Parent arrays rooted at node 0. random: parent of v uniform over [0, v).
/// caterpillar: a spine of about n/2 nodes with one leaf hanging off each.
std::vector<NodeId> make_parents(std::size_t n, TreeShape shape, Rng& rng);
LabeledTree make_tree(std::size_t n, TreeShape shape, std::size_t alphabet, LabelDist dist, Rng& rng);

/// Alphabet used by the fuzzer and acceptance sweeps: about sqrt(n) labels.
std::size_t sqrt_alphabet(std::size_t n);

std::vector<ListRange> uniform_ranges(std::size_t n, std::size_t count, Rng& rng);
/// Ranges of length at most `max_length`.
std::vector<ListRange> short_ranges(std::size_t n, std::size_t count, std::size_t max_length, Rng& rng);
std::vector<std::pair<NodeId, NodeId>> node_pairs(std::size_t n, std::size_t count, Rng& rng);

const char* to_string(LabelDist d) noexcept;
const char* to_string(TreeShape s) noexcept;
LabelDist parse_label_dist(const std::string& s);
TreeShape parse_tree_shape(const std::string& s);

}  // namespace rqk::workload
