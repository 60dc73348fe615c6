#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rqk/io.hpp"
#include "rqk/median_list.hpp"
#include "rqk/median_tree.hpp"
#include "rqk/mode_list.hpp"
#include "rqk/mode_tree.hpp"

namespace rqk {

enum class IndexKind : std::uint32_t {
  mode_tradeoff = 1,
  mode_constant = 2,
  median_block = 3,
  median_range_tree = 4,
  median_constant = 5,
  mode_tree = 6,
  median_tree = 7,
};

inline constexpr std::array<IndexKind, 7> kAllKinds{
    IndexKind::mode_tradeoff,   IndexKind::mode_constant, IndexKind::median_block, IndexKind::median_range_tree,
    IndexKind::median_constant, IndexKind::mode_tree,     IndexKind::median_tree,
};

std::string_view to_string(IndexKind kind) noexcept;
/// Accepts the names printed by to_string; throws bad_params otherwise.
IndexKind parse_kind(std::string_view name);
bool is_tree_kind(IndexKind kind) noexcept;
bool is_mode_kind(IndexKind kind) noexcept;

/// Zero means "use the kind's default". epsilon applies to the tradeoff
/// kinds unless blocks is set; k to the constant kinds; arity to median-block
/// and the range tree.
struct BuildParams {
  double epsilon = 0.5;
  std::size_t blocks = 0;
  std::size_t k = 0;
  std::size_t arity = 0;
};

/// Short human-readable summary of the parameters a kind actually uses.
std::string describe(IndexKind kind, const BuildParams& params);

using AnyIndex = std::variant<ModeTradeoffIndex, ModeConstantIndex, MedianBlockIndex, RangeTreeIndex,
                              MedianConstantIndex, TreeModeIndex, TreeMedianIndex>;

/// Throws bad_params when the instance shape does not fit the kind, and the
/// structure's own errors for invalid parameters.
AnyIndex build_index(IndexKind kind, const Instance& instance, const BuildParams& params);
IndexKind kind_of(const AnyIndex& index) noexcept;
std::size_t words_of(const AnyIndex& index) noexcept;

/// witness is the frequency for mode kinds and the selected rank for median
/// kinds.
struct Answer {
  Label value;
  std::uint32_t witness = 0;
  std::uint64_t probes = 0;
};

/// a, b are 1-based list positions or 1-based tree node ids, as in the text
/// formats.
Answer answer(const AnyIndex& index, std::uint64_t a, std::uint64_t b);

inline constexpr std::array<char, 4> kSnapshotMagic{'R', 'Q', 'K', '1'};
inline constexpr std::uint32_t kSnapshotVersion = 1;

struct Snapshot {
  AnyIndex index;
  std::vector<std::int64_t> dictionary;
};

/// Layout: magic, u32 version, u32 kind, payload, raw-label dictionary.
void write_snapshot(std::ostream& out, const Snapshot& snapshot);
Snapshot read_snapshot(std::istream& in);

}  // namespace rqk
