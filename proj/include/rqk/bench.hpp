#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rqk/snapshot.hpp"

namespace rqk {

struct BenchOptions {
  std::vector<IndexKind> kinds;
  std::vector<std::size_t> sizes;
  BuildParams params;
  std::size_t queries = 1000;
  std::uint64_t seed = 1;
};

/// Space and probes come from the indexes' own counters; times are wall clock.
struct MeasurementRow {
  IndexKind kind{};
  std::size_t n = 0;
  std::string parameter;
  double build_ms = 0;
  std::size_t words = 0;
  double mean_probes = 0;
  std::uint64_t max_probes = 0;
  double mean_query_us = 0;
  /// Against the previous row of the same kind; unset on a kind's first row.
  std::optional<double> n_ratio;
  std::optional<double> probe_ratio;
  std::optional<double> words_ratio;
};

/// Rows in kind-major, size-minor order of the options. Lists use uniform
/// labels over sqrt(n) values and uniform ranges; trees are random-shaped with
/// uniformly drawn node pairs.
std::vector<MeasurementRow> run_bench(const BenchOptions& options);

void write_bench_csv(std::ostream& out, const std::vector<MeasurementRow>& rows);

}  // namespace rqk
