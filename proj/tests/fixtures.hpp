#pragma once

#include <vector>

#include "rqk/core.hpp"

namespace rqk::testing {

// L1 = [3,1,4,1,5,9,2,6,5,3,5]; label ids equal the raw values.
inline LabeledList list_l1() { return LabeledList(to_labels({3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5})); }

// T1 with nodes numbered 1..7: 1(3) -> 2(1), 3(5); 2 -> 4(5), 5(1); 3 -> 6(5);
// 6 -> 7(3). Node k has id k - 1.
inline LabeledTree tree_t1() {
  return LabeledTree::from_parents({kNilNode, 0, 0, 1, 1, 2, 5}, to_labels({3, 1, 5, 5, 1, 5, 3}));
}

constexpr NodeId N(unsigned k) { return static_cast<NodeId>(k - 1); }

inline std::vector<Label> ids(std::initializer_list<std::uint32_t> v) { return to_labels(v); }

}  // namespace rqk::testing
