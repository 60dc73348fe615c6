#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rqk/core.hpp"

// Brute-force ground truth. Every index in the library is checked against
// these routines; they deliberately share no code with the indexes.
namespace rqk::oracle {

/// Simple path u..v inclusive, found by walking parent chains.
std::vector<NodeId> path(const LabeledTree& tree, NodeId u, NodeId v);
std::vector<Label> path_labels(const LabeledTree& tree, NodeId u, NodeId v);

/// Maximum-frequency label; ties go to the smallest label id.
ModeAnswer mode(std::span<const Label> multiset);
Label select(std::span<const Label> multiset, std::size_t rank);
MedianAnswer median(std::span<const Label> multiset);
std::size_t count(std::span<const Label> multiset, Label x);

/// Ancestor-or-self test by parent-chain walk.
bool is_ancestor(const LabeledTree& tree, NodeId ancestor, NodeId v);
NodeId lca(const LabeledTree& tree, NodeId u, NodeId v);

}  // namespace rqk::oracle
