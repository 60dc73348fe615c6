#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rqk/bench.hpp"
#include "rqk/fault.hpp"
#include "rqk/fuzz.hpp"
#include "rqk/io.hpp"
#include "rqk/snapshot.hpp"
#include "rqk/workload.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFinding = 1;
constexpr int kUsage = 2;

struct ParamFlags {
  double epsilon = 0.5;
  std::size_t blocks = 0;
  std::size_t k = 0;
  std::size_t arity = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--epsilon", epsilon, "tradeoff exponent, 0 < epsilon <= 0.5")->capture_default_str();
    cmd->add_option("--blocks", blocks, "explicit block or component count (overrides --epsilon)");
    cmd->add_option("--k", k, "block size of the constant-time kinds (0 = default)");
    cmd->add_option("--arity", arity, "branching of median-block / median-range-tree (0 = 2)");
  }
  rqk::BuildParams params() const { return rqk::BuildParams{epsilon, blocks, k, arity}; }
};

// Writes to the named file, or stdout for "" or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.emplace(path, std::ios::binary);
      if (!*file_) throw rqk::Error(rqk::Errc::io_error, "cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? static_cast<std::ostream&>(*file_) : std::cout; }

 private:
  std::optional<std::ofstream> file_;
};

std::vector<rqk::IndexKind> parse_kinds(const std::vector<std::string>& names) {
  std::vector<rqk::IndexKind> kinds;
  for (const auto& name : names) {
    if (name == "all") return {rqk::kAllKinds.begin(), rqk::kAllKinds.end()};
    kinds.push_back(rqk::parse_kind(name));
  }
  return kinds;
}

int run_build(const std::string& input, const std::string& kind, const ParamFlags& flags, const std::string& out) {
  const rqk::Instance instance = rqk::read_instance(input);
  rqk::Snapshot snapshot{rqk::build_index(rqk::parse_kind(kind), instance, flags.params()), instance.dictionary};
  std::ofstream file(out, std::ios::binary);
  if (!file) throw rqk::Error(rqk::Errc::io_error, "cannot open " + out + " for writing");
  rqk::write_snapshot(file, snapshot);
  return kOk;
}

int run_query(const std::string& snapshot_path, const std::string& queries_path, const std::string& out) {
  std::ifstream file(snapshot_path, std::ios::binary);
  if (!file) throw rqk::Error(rqk::Errc::io_error, "cannot open " + snapshot_path);
  const rqk::Snapshot snapshot = rqk::read_snapshot(file);

  std::optional<std::ifstream> query_file;
  if (!queries_path.empty() && queries_path != "-") {
    query_file.emplace(queries_path);
    if (!*query_file) throw rqk::Error(rqk::Errc::io_error, "cannot open " + queries_path);
  }
  std::istream& in = query_file ? static_cast<std::istream&>(*query_file) : std::cin;
  Output sink(out);
  std::string line;
  while (std::getline(in, line)) {
    if (rqk::skippable_line(line)) continue;
    const auto [a, b] = rqk::parse_query(line);
    const auto ans = rqk::answer(snapshot.index, a, b);
    const auto raw = ans.value.id < snapshot.dictionary.size() ? snapshot.dictionary[ans.value.id]
                                                               : static_cast<std::int64_t>(ans.value.id);
    sink.stream() << raw << '\t' << ans.witness << '\t' << ans.probes << '\n';
  }
  return kOk;
}

int run_fuzz(const std::vector<std::string>& kinds, const std::vector<std::size_t>& sizes,
             const std::vector<std::uint64_t>& seeds, bool mutate, std::size_t exhaustive, std::size_t sampled,
             const std::string& reproducer, const std::string& report_path) {
  rqk::FuzzOptions options;
  options.kinds = parse_kinds(kinds);
  options.sizes = sizes;
  options.seeds = seeds;
  options.exhaustive_limit = exhaustive;
  options.sampled_queries = sampled;
  if (mutate) rqk::fault::inject(rqk::fault::Fault::range_count_off_by_one);
  const rqk::FuzzReport report = rqk::run_fuzz(options);
  rqk::fault::inject(rqk::fault::Fault::none);
  Output(report_path).stream() << report.text;
  if (report.finding) {
    std::ofstream file(reproducer);
    if (!file) throw rqk::Error(rqk::Errc::io_error, "cannot open " + reproducer + " for writing");
    rqk::write_reproducer(file, *report.finding);
    std::cerr << "reproducer written to " << reproducer << '\n';
  }
  return report.passed ? kOk : kFinding;
}

int run_bench(const std::vector<std::string>& kinds, const std::vector<std::size_t>& sizes, const ParamFlags& flags,
              std::uint64_t seed, std::size_t queries, const std::string& out) {
  rqk::BenchOptions options;
  options.kinds = parse_kinds(kinds);
  options.sizes = sizes;
  options.params = flags.params();
  options.seed = seed;
  options.queries = queries;
  const auto rows = rqk::run_bench(options);
  Output sink(out);
  rqk::write_bench_csv(sink.stream(), rows);
  return kOk;
}

int run_gen(std::size_t n, std::uint64_t seed, const std::string& shape, const std::string& labels,
            std::size_t alphabet, const std::string& out) {
  if (n == 0) throw rqk::Error(rqk::Errc::bad_params, "--n must be positive");
  rqk::workload::Rng rng(seed);
  const auto dist = rqk::workload::parse_label_dist(labels);
  if (alphabet == 0) alphabet = rqk::workload::sqrt_alphabet(n);
  const rqk::Instance instance =
      shape == "list" ? rqk::identity_instance(rqk::workload::make_list(n, alphabet, dist, rng))
                      : rqk::identity_instance(
                            rqk::workload::make_tree(n, rqk::workload::parse_tree_shape(shape), alphabet, dist, rng));
  Output sink(out);
  rqk::write_instance(sink.stream(), instance);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Range and path mode / median query indexes"};
  app.require_subcommand(1);

  std::string input, kind, out, snapshot, queries_path, reproducer = "fuzz-reproducer.txt";
  std::string shape = "list", labels = "uniform";
  std::vector<std::string> fuzz_kinds, bench_kinds;
  std::vector<std::size_t> fuzz_sizes, bench_sizes;
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t seed = 1;
  std::size_t n = 0, alphabet = 0, query_count = 1000, exhaustive = 200, sampled = 2000;
  bool mutate = false;
  ParamFlags flags;

  auto* build = app.add_subcommand("build", "build an index from a list or tree file and write a snapshot");
  build->add_option("input", input, "list or tree file")->required();
  build->add_option("--kind", kind, "index kind")->required();
  build->add_option("--out", out, "snapshot path")->required();
  flags.attach(build);

  auto* query = app.add_subcommand("query", "answer \"a b\" lines against a snapshot");
  query->add_option("snapshot", snapshot, "snapshot path")->required();
  query->add_option("queries", queries_path, "query file (default: stdin)");
  query->add_option("--out", out, "answer file (default: stdout)");

  auto* fuzz = app.add_subcommand("fuzz", "compare every index with the oracle on random instances");
  fuzz->add_option("--kind", fuzz_kinds, "kinds to fuzz, or all")->default_val(std::vector<std::string>{"all"});
  fuzz->add_option("--n", fuzz_sizes, "instance sizes")->default_val(std::vector<std::size_t>{1, 2, 3, 7, 16, 33, 64});
  fuzz->add_option("--seed", seeds, "seeds");
  fuzz->add_option("--exhaustive", exhaustive, "sweep every pair up to this size")->capture_default_str();
  fuzz->add_option("--sampled", sampled, "queries per larger instance")->capture_default_str();
  fuzz->add_flag("--mutate", mutate, "inject an off-by-one into list range counting");
  fuzz->add_option("--out", reproducer, "reproducer path")->capture_default_str();
  fuzz->add_option("--report", out, "report path (default: stdout)");

  auto* bench = app.add_subcommand("bench", "measure words, probes and time; CSV to --out or stdout");
  bench->add_option("--kind", bench_kinds, "kinds to measure, or all")->default_val(std::vector<std::string>{"mode-tradeoff"});
  bench->add_option("--n", bench_sizes, "sizes; none gives a header-only CSV");
  bench->add_option("--seed", seed)->capture_default_str();
  bench->add_option("--queries", query_count, "queries per size")->capture_default_str();
  bench->add_option("--out", out, "CSV path (default: stdout)");
  flags.attach(bench);

  auto* gen = app.add_subcommand("gen", "write a random list or tree file");
  gen->add_option("--n", n, "size")->required();
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("--shape", shape, "list, random, path, star or caterpillar")->capture_default_str();
  gen->add_option("--labels", labels, "uniform or zipf")->capture_default_str();
  gen->add_option("--alphabet", alphabet, "distinct labels (0 = about sqrt(n))");
  gen->add_option("--out", out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*build) return run_build(input, kind, flags, out);
    if (*query) return run_query(snapshot, queries_path, out);
    if (*fuzz) return run_fuzz(fuzz_kinds, fuzz_sizes, seeds, mutate, exhaustive, sampled, reproducer, out);
    if (*bench) return run_bench(bench_kinds, bench_sizes, flags, seed, query_count, out);
    if (*gen) return run_gen(n, seed, shape, labels, alphabet, out);
  } catch (const rqk::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
