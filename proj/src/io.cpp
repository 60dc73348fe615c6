#include "rqk/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace rqk {

namespace {

std::string_view trim(std::string_view s) noexcept {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Whitespace-separated signed integers; false on any other token.
bool split_integers(std::string_view line, std::vector<std::int64_t>& out) {
  out.clear();
  std::size_t p = 0;
  while (p < line.size()) {
    while (p < line.size() && (line[p] == ' ' || line[p] == '\t' || line[p] == '\r')) ++p;
    if (p == line.size()) break;
    std::int64_t v = 0;
    const auto [end, ec] = std::from_chars(line.data() + p, line.data() + line.size(), v);
    if (ec != std::errc{}) return false;
    p = static_cast<std::size_t>(end - line.data());
    if (p < line.size() && line[p] != ' ' && line[p] != '\t' && line[p] != '\r') return false;
    out.push_back(v);
  }
  return true;
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
  throw Error(Errc::parse_error, "line " + std::to_string(line_no) + ": " + why);
}

// Reads data lines with their 1-based line numbers.
struct LineSource {
  explicit LineSource(std::istream& source) : in(source) {}

  std::istream& in;
  std::size_t line_no = 0;
  std::string line;

  bool next() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!skippable_line(line)) return true;
    }
    return false;
  }
};

}  // namespace

bool skippable_line(std::string_view line) noexcept {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::size_t Instance::size() const noexcept {
  return std::visit([](const auto& d) { return d.size(); }, data);
}

std::int64_t Instance::raw(Label l) const {
  if (l.id >= dictionary.size()) throw Error(Errc::unknown_label, "label id " + std::to_string(l.id) + " has no raw value");
  return dictionary[l.id];
}

namespace {

std::vector<std::int64_t> identity_dictionary(std::size_t bound) {
  std::vector<std::int64_t> dict(bound);
  for (std::size_t k = 0; k < bound; ++k) dict[k] = static_cast<std::int64_t>(k);
  return dict;
}

}  // namespace

Instance identity_instance(LabeledList list) {
  auto dict = identity_dictionary(list.label_bound());
  return Instance{std::move(list), std::move(dict)};
}

Instance identity_instance(LabeledTree tree) {
  auto dict = identity_dictionary(tree.label_bound());
  return Instance{std::move(tree), std::move(dict)};
}

Instance parse_list(std::istream& in) {
  LineSource src(in);
  std::vector<std::int64_t> raw, fields;
  while (src.next()) {
    if (!split_integers(src.line, fields) || fields.size() != 1) bad_line(src.line_no, "expected one integer label");
    raw.push_back(fields[0]);
  }
  if (raw.empty()) throw Error(Errc::empty_input, "list file has no labels");
  auto [list, dict] = normalize_list(std::span<const std::int64_t>(raw));
  return Instance{std::move(list), std::move(dict)};
}

Instance parse_tree(std::istream& in) {
  LineSource src(in);
  std::vector<std::int64_t> fields;
  if (!src.next()) throw Error(Errc::empty_input, "tree file has no header");
  if (!split_integers(src.line, fields) || fields.size() != 2) bad_line(src.line_no, "expected header \"n root\"");
  const std::int64_t n = fields[0], root = fields[1];
  if (n < 1 || n >= static_cast<std::int64_t>(kNilNode)) bad_line(src.line_no, "node count out of range");
  if (root < 1 || root > n) bad_line(src.line_no, "root id out of range");

  const auto count = static_cast<std::size_t>(n);
  std::vector<NodeId> parent(count, kNilNode);
  std::vector<std::int64_t> raw(count);
  std::vector<char> seen(count, 0);
  for (std::size_t k = 0; k < count; ++k) {
    if (!src.next()) throw Error(Errc::parse_error, "tree file ends after " + std::to_string(k) + " of " + std::to_string(n) + " nodes");
    if (!split_integers(src.line, fields) || fields.size() != 3) bad_line(src.line_no, "expected \"node_id parent_id label\"");
    const std::int64_t id = fields[0], p = fields[1];
    if (id < 1 || id > n) bad_line(src.line_no, "node id out of range");
    if (seen[id - 1]) bad_line(src.line_no, "duplicate node id");
    seen[id - 1] = 1;
    if (p < 0 || p > n) bad_line(src.line_no, "parent id out of range");
    if ((p == 0) != (id == root)) bad_line(src.line_no, "only the root has parent 0");
    parent[id - 1] = p == 0 ? kNilNode : static_cast<NodeId>(p - 1);
    raw[id - 1] = fields[2];
  }
  if (src.next()) bad_line(src.line_no, "trailing data after the last node");
  try {
    auto [tree, dict] = normalize_tree(std::move(parent), std::span<const std::int64_t>(raw));
    return Instance{std::move(tree), std::move(dict)};
  } catch (const Error& e) {
    throw Error(Errc::parse_error, e.what());
  }
}

Instance parse_instance(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::istringstream probe(text);
  LineSource src(probe);
  std::vector<std::int64_t> fields;
  const bool tree = src.next() && split_integers(src.line, fields) && fields.size() == 2;
  std::istringstream body(text);
  return tree ? parse_tree(body) : parse_list(body);
}

Instance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open " + path);
  return parse_instance(in);
}

void write_instance(std::ostream& out, const Instance& instance) {
  if (instance.is_tree()) {
    const auto& t = instance.tree();
    out << t.size() << ' ' << t.root() + 1 << '\n';
    for (NodeId v = 0; v < t.size(); ++v) {
      const NodeId p = t.parent(v);
      out << v + 1 << ' ' << (p == kNilNode ? 0 : p + 1) << ' ' << instance.raw(t.label(v)) << '\n';
    }
  } else {
    for (Label l : instance.list().labels()) out << instance.raw(l) << '\n';
  }
  if (!out) throw Error(Errc::io_error, "write failed");
}

std::pair<std::uint64_t, std::uint64_t> parse_query(std::string_view line) {
  std::vector<std::int64_t> fields;
  if (!split_integers(line, fields) || fields.size() != 2 || fields[0] < 0 || fields[1] < 0) {
    throw Error(Errc::malformed_query, "expected two non-negative integers, got \"" + std::string(trim(line)) + "\"");
  }
  return {static_cast<std::uint64_t>(fields[0]), static_cast<std::uint64_t>(fields[1])};
}

}  // namespace rqk
