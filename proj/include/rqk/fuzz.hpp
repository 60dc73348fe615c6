#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rqk/snapshot.hpp"

namespace rqk {

struct FuzzOptions {
  std::vector<IndexKind> kinds;  // empty means every kind
  std::vector<std::size_t> sizes;
  std::vector<std::uint64_t> seeds;
  /// Instances up to this size are swept over every query pair.
  std::size_t exhaustive_limit = 200;
  std::size_t sampled_queries = 2000;
};

/// One query whose answer disagrees with the oracle.
struct FuzzFinding {
  IndexKind kind{};
  BuildParams params;
  Instance instance;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::string expected;
  std::string got;
};

struct FuzzReport {
  bool passed = true;
  std::uint64_t queries = 0;
  std::string text;  // byte-identical for identical options
  std::optional<FuzzFinding> finding;  // minimized
};

/// Builds every kind with a few parameter settings over seeded random
/// instances and compares each answer with the oracle. Stops at the first
/// mismatch, which is then shrunk while it keeps failing.
FuzzReport run_fuzz(const FuzzOptions& options);

/// Parameter settings swept for a kind, already clamped to be valid at n.
std::vector<BuildParams> fuzz_configs(IndexKind kind, std::size_t n);

/// Oracle comparison of a single query; nullopt when the answer is right.
std::optional<FuzzFinding> check_query(IndexKind kind, const BuildParams& params, const AnyIndex& index,
                                       const Instance& instance, std::uint64_t a, std::uint64_t b);

/// Instance in its text format, preceded by '#' lines naming the kind,
/// parameters, query and both answers.
void write_reproducer(std::ostream& out, const FuzzFinding& finding);

}  // namespace rqk
