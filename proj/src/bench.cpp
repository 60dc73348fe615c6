#include "rqk/bench.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <random>

#include "rqk/workload.hpp"

namespace rqk {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

std::vector<MeasurementRow> run_bench(const BenchOptions& options) {
  std::vector<MeasurementRow> rows;
  for (IndexKind kind : options.kinds) {
    std::optional<std::size_t> previous;  // row index; rows may reallocate
    for (std::size_t n : options.sizes) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(n),
                        static_cast<std::uint32_t>(kind)};
      workload::Rng rng(seq);
      const std::size_t alphabet = workload::sqrt_alphabet(n);
      const Instance instance =
          is_tree_kind(kind)
              ? identity_instance(workload::make_tree(n, workload::TreeShape::random, alphabet,
                                                      workload::LabelDist::uniform, rng))
              : identity_instance(workload::make_list(n, alphabet, workload::LabelDist::uniform, rng));

      std::vector<std::pair<std::uint64_t, std::uint64_t>> queries;
      if (is_tree_kind(kind)) {
        for (auto [u, v] : workload::node_pairs(n, options.queries, rng)) queries.emplace_back(u + 1, v + 1);
      } else {
        for (auto r : workload::uniform_ranges(n, options.queries, rng)) queries.emplace_back(r.i, r.j);
      }

      MeasurementRow row;
      row.kind = kind;
      row.n = n;
      row.parameter = describe(kind, options.params);
      const auto build_start = Clock::now();
      const AnyIndex index = build_index(kind, instance, options.params);
      row.build_ms = elapsed_ms(build_start);
      row.words = words_of(index);

      std::uint64_t probes = 0;
      const auto query_start = Clock::now();
      for (auto [a, b] : queries) {
        const auto p = answer(index, a, b).probes;
        probes += p;
        row.max_probes = std::max(row.max_probes, p);
      }
      const double query_ms = elapsed_ms(query_start);
      if (!queries.empty()) {
        row.mean_probes = static_cast<double>(probes) / static_cast<double>(queries.size());
        row.mean_query_us = query_ms * 1000.0 / static_cast<double>(queries.size());
      }
      if (previous) {
        const MeasurementRow& p = rows[*previous];
        row.n_ratio = static_cast<double>(n) / static_cast<double>(p.n);
        if (p.mean_probes > 0) row.probe_ratio = row.mean_probes / p.mean_probes;
        if (p.words > 0) row.words_ratio = static_cast<double>(row.words) / static_cast<double>(p.words);
      }
      previous = rows.size();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<MeasurementRow>& rows) {
  out << "kind,n,parameter,build_ms,words,mean_probes,max_probes,mean_query_us,n_ratio,probe_ratio,words_ratio\n";
  auto opt = [&](const std::optional<double>& v) {
    if (v) out << std::setprecision(4) << *v;
  };
  for (const auto& r : rows) {
    out << to_string(r.kind) << ',' << r.n << ',' << r.parameter << ',' << std::fixed << std::setprecision(3)
        << r.build_ms << ',' << r.words << ',' << std::setprecision(4) << r.mean_probes << ',' << r.max_probes << ','
        << std::setprecision(3) << r.mean_query_us << ',';
    opt(r.n_ratio);
    out << ',';
    opt(r.probe_ratio);
    out << ',';
    opt(r.words_ratio);
    out << '\n' << std::defaultfloat;
  }
  if (!out) throw Error(Errc::io_error, "write failed");
}

}  // namespace rqk
