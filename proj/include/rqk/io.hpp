#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rqk/core.hpp"

namespace rqk {

/// A normalized input: the list or tree over dense ids plus the raw value of
/// every id.
struct Instance {
  std::variant<LabeledList, LabeledTree> data;
  std::vector<std::int64_t> dictionary;

  bool is_tree() const noexcept { return std::holds_alternative<LabeledTree>(data); }
  const LabeledList& list() const { return std::get<LabeledList>(data); }
  const LabeledTree& tree() const { return std::get<LabeledTree>(data); }
  std::size_t size() const noexcept;
  std::int64_t raw(Label l) const;
};

/// Wraps an instance that already uses label ids; raw values equal the ids.
Instance identity_instance(LabeledList list);
Instance identity_instance(LabeledTree tree);

// Text formats. Blank lines and lines starting with '#' are ignored.
//   list: one integer label per line
//   tree: "n root", then n lines "node_id parent_id label"; ids are 1-based
//         and the root's parent is 0
// Malformed input throws parse_error with the offending line number.
Instance parse_list(std::istream& in);
Instance parse_tree(std::istream& in);
/// Tree if the first data line holds two integers, list otherwise.
Instance parse_instance(std::istream& in);
Instance read_instance(const std::string& path);

void write_instance(std::ostream& out, const Instance& instance);

/// "a b" with two non-negative integers; anything else is malformed_query.
std::pair<std::uint64_t, std::uint64_t> parse_query(std::string_view line);
/// True for blank lines and '#' comments.
bool skippable_line(std::string_view line) noexcept;

}  // namespace rqk
