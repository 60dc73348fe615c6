#include "rqk/binary_io.hpp"

namespace rqk {

void save_list(BinaryWriter& w, const LabeledList& list) {
  w.put(static_cast<std::uint64_t>(list.size()));
  for (Label l : list.labels()) w.put(l);
}

LabeledList load_list(BinaryReader& r) {
  return LabeledList(r.get_vector<Label>());
}

void save_tree(BinaryWriter& w, const LabeledTree& tree) {
  w.put(static_cast<std::uint64_t>(tree.size()));
  for (NodeId p : tree.parents()) w.put(p);
  w.put(static_cast<std::uint64_t>(tree.size()));
  for (Label l : tree.labels()) w.put(l);
}

LabeledTree load_tree(BinaryReader& r) {
  auto parents = r.get_vector<NodeId>();
  auto labels = r.get_vector<Label>();
  return LabeledTree::from_parents(std::move(parents), std::move(labels));
}

}  // namespace rqk
