#include "rqk/median_list.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "fenwick.hpp"
#include "rqk/selection.hpp"

namespace rqk {

namespace {

void require_branching(const LabeledList& list, std::size_t b) {
  if (list.empty()) throw Error(Errc::empty_input, "median index over an empty list");
  if (b < 2 || b > std::max<std::size_t>(list.size(), 2)) {
    throw Error(Errc::bad_branching, "branching factor must satisfy 2 <= b <= n, got " + std::to_string(b));
  }
}

Label select_directly(std::span<const Label> slice, std::size_t rank, QueryStats* stats) {
  std::vector<Label> copy(slice.begin(), slice.end());
  std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(rank - 1), copy.end());
  if (stats) stats->probes += copy.size();
  return copy[rank - 1];
}

// Middle multiset with a rank window around its median: the whole middle when
// it has at most 4s + 1 elements, else ranks c - 2s .. c + 2s, c = M/2 + 1.
struct MiddleWindow {
  std::size_t first_rank = 1;
  std::size_t last_rank = 0;
  std::size_t omitted_low() const noexcept { return first_rank - 1; }
};

MiddleWindow middle_window(std::size_t middle, std::size_t s) {
  if (middle <= 4 * s + 1) return MiddleWindow{1, middle};
  const std::size_t c = median_rank(middle);
  return MiddleWindow{c - 2 * s, c + 2 * s};
}

// Incrementally maintained middle multiset over label ids.
class MiddleCounts {
 public:
  explicit MiddleCounts(std::size_t labels) : fenwick_(labels) {}
  void add(Label x) noexcept {
    fenwick_.add(x.id, 1);
    ++size_;
  }
  void remove(Label x) noexcept {
    fenwick_.add(x.id, -1);
    --size_;
  }
  std::size_t size() const noexcept { return size_; }
  void extract(MiddleWindow w, std::vector<Label>& out) const {
    for (std::size_t r = w.first_rank; r <= w.last_rank; ++r) {
      out.push_back(Label{static_cast<std::uint32_t>(fenwick_.kth(static_cast<std::int64_t>(r)))});
    }
  }

 private:
  detail::Fenwick fenwick_;
  std::size_t size_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// MedianBlockIndex

MedianBlockIndex MedianBlockIndex::build(const LabeledList& list, std::size_t b) {
  require_branching(list, b);
  MedianBlockIndex idx;
  idx.list_ = list;
  idx.b_ = b;
  idx.pair_offsets_.push_back(0);
  idx.segments_.push_back(Segment{1, static_cast<std::uint32_t>(list.size()), 0, 0, 0, 0, 0});
  for (std::size_t id = 0; id < idx.segments_.size(); ++id) idx.build_segment(id);
  return idx;
}

void MedianBlockIndex::build_segment(std::size_t id) {
  Segment s = segments_[id];
  if (s.length <= base_size()) return;
  s.block = static_cast<std::uint32_t>((s.length + b_ - 1) / b_);
  s.blocks = (s.length + s.block - 1) / s.block;
  s.first_child = static_cast<std::uint32_t>(segments_.size());
  s.roots = roots_.size();
  s.pairs = omitted_low_.size();

  for (std::uint32_t t = 0; t < s.blocks; ++t) {
    const std::uint32_t start = s.lo + t * s.block;
    const std::uint32_t len = std::min(s.block, s.lo + s.length - start);
    const std::size_t base = roots_.size();
    roots_.resize(base + 2 * (std::size_t{s.block} + 1), kNilRef);
    VersionHandle v = store_.empty_version();
    for (std::uint32_t y = 0; y < len; ++y) {
      v = store_.insert(v, list_.at(start + y));
      roots_[base + y + 1] = v.root;
    }
    v = store_.empty_version();
    for (std::uint32_t c = 0; c < len; ++c) {
      v = store_.insert(v, list_.at(start + len - 1 - c));
      roots_[base + s.block + 1 + c + 1] = v.root;
    }
  }

  MiddleCounts middle(list_.label_bound());
  for (std::uint32_t bi = 0; bi < s.blocks; ++bi) {
    for (std::uint32_t bj = bi + 1; bj < s.blocks; ++bj) {
      if (bj >= bi + 2) {
        const std::uint32_t start = s.lo + (bj - 1) * s.block;
        for (std::uint32_t p = start; p < start + s.block; ++p) middle.add(list_.at(p));
      }
      const MiddleWindow w = middle_window(middle.size(), s.block);
      middle.extract(w, windows_);
      pair_offsets_.push_back(windows_.size());
      omitted_low_.push_back(static_cast<std::uint32_t>(w.omitted_low()));
    }
    for (std::uint32_t p = s.lo + (bi + 1) * s.block; p < s.lo + std::max(bi + 1, s.blocks - 1) * s.block; ++p) {
      middle.remove(list_.at(p));
    }
  }

  for (std::uint32_t t = 0; t < s.blocks; ++t) {
    const std::uint32_t start = s.lo + t * s.block;
    segments_.push_back(Segment{start, std::min(s.block, s.lo + s.length - start), 0, 0, 0, 0, 0});
  }
  segments_[id] = s;
}

VersionHandle MedianBlockIndex::prefix_version(const Segment& s, std::size_t block, std::size_t y) const noexcept {
  return store_.handle(roots_[s.roots + block * 2 * (std::size_t{s.block} + 1) + y + 1]);
}

VersionHandle MedianBlockIndex::suffix_version(const Segment& s, std::size_t block, std::size_t x) const noexcept {
  const std::size_t start = s.lo + block * s.block;
  const std::size_t len = std::min<std::size_t>(s.block, s.lo + s.length - start);
  return store_.handle(roots_[s.roots + block * 2 * (std::size_t{s.block} + 1) + s.block + 1 + (len - x)]);
}

MedianAnswer MedianBlockIndex::query(ListRange r, QueryStats* stats) const {
  list_.check_range(r);
  const std::size_t m = r.length();
  const std::size_t rank = median_rank(m);
  const Segment* s = &segments_[0];
  for (;;) {
    if (s->block == 0) {
      return MedianAnswer{select_directly(list_.slice(r), rank, stats), static_cast<std::uint32_t>(rank)};
    }
    const std::size_t bi = (r.i - s->lo) / s->block;
    const std::size_t bj = (r.j - s->lo) / s->block;
    if (stats) ++stats->probes;
    if (bi == bj) {
      s = &segments_[s->first_child + bi];
      continue;
    }
    const std::size_t x = r.i - (s->lo + bi * s->block);
    const std::size_t y = r.j - (s->lo + bj * s->block);
    const std::size_t slot = pair_slot(*s, bi, bj);
    const std::span<const Label> window(windows_.data() + pair_offsets_[slot], pair_offsets_[slot + 1] - pair_offsets_[slot]);
    SelectionCursor cursors[3] = {SelectionCursor::over_tree(suffix_version(*s, bi, x)),
                                  SelectionCursor::over_array(window),
                                  SelectionCursor::over_tree(prefix_version(*s, bj, y))};
    const Label v = select_union(cursors, rank - omitted_low_[slot], stats);
    return MedianAnswer{v, static_cast<std::uint32_t>(rank)};
  }
}

std::size_t MedianBlockIndex::depth() const noexcept {
  std::vector<std::size_t> level(segments_.size(), 1);
  std::size_t deepest = 1;
  for (std::size_t id = 0; id < segments_.size(); ++id) {
    const Segment& s = segments_[id];
    deepest = std::max(deepest, level[id]);
    if (s.block == 0) continue;
    for (std::size_t t = 0; t < s.blocks; ++t) level[s.first_child + t] = level[id] + 1;
  }
  return deepest;
}

std::size_t MedianBlockIndex::words() const noexcept {
  return list_.size() + store_.words() + roots_.size() + 2 * pair_offsets_.size() + omitted_low_.size() +
         windows_.size() + segments_.size() * sizeof(Segment) / 4;
}

std::vector<Label> MedianBlockIndex::top_suffix(std::size_t block, std::size_t x) const {
  return pbst_in_order(suffix_version(segments_[0], block, x));
}

std::vector<Label> MedianBlockIndex::top_prefix(std::size_t block, std::size_t y) const {
  return pbst_in_order(prefix_version(segments_[0], block, y));
}

std::span<const Label> MedianBlockIndex::top_window(std::size_t bi, std::size_t bj) const {
  const std::size_t slot = pair_slot(segments_[0], bi, bj);
  return std::span(windows_).subspan(pair_offsets_[slot], pair_offsets_[slot + 1] - pair_offsets_[slot]);
}

std::uint32_t MedianBlockIndex::top_omitted_low(std::size_t bi, std::size_t bj) const {
  return omitted_low_[pair_slot(segments_[0], bi, bj)];
}

void MedianBlockIndex::save(BinaryWriter& w) const {
  save_list(w, list_);
  w.put(static_cast<std::uint64_t>(b_));
  store_.save(w);
  w.put(static_cast<std::uint64_t>(segments_.size()));
  for (const Segment& s : segments_) {
    w.put(s.lo);
    w.put(s.length);
    w.put(s.block);
    w.put(s.blocks);
    w.put(s.first_child);
    w.put(s.roots);
    w.put(s.pairs);
  }
  w.put_vector(roots_);
  w.put_vector(pair_offsets_);
  w.put_vector(omitted_low_);
  w.put_vector(windows_);
}

MedianBlockIndex MedianBlockIndex::load(BinaryReader& r) {
  MedianBlockIndex idx;
  idx.list_ = load_list(r);
  idx.b_ = static_cast<std::size_t>(r.get<std::uint64_t>());
  idx.store_ = PersistentTreeStore::load(r);
  const auto count = r.get<std::uint64_t>();
  for (std::uint64_t k = 0; k < count; ++k) {
    Segment s;
    s.lo = r.get<std::uint32_t>();
    s.length = r.get<std::uint32_t>();
    s.block = r.get<std::uint32_t>();
    s.blocks = r.get<std::uint32_t>();
    s.first_child = r.get<std::uint32_t>();
    s.roots = r.get<std::uint64_t>();
    s.pairs = r.get<std::uint64_t>();
    idx.segments_.push_back(s);
  }
  idx.roots_ = r.get_vector<NodeRef>();
  idx.pair_offsets_ = r.get_vector<std::uint64_t>();
  idx.omitted_low_ = r.get_vector<std::uint32_t>();
  idx.windows_ = r.get_vector<Label>();
  return idx;
}

// ---------------------------------------------------------------------------
// RangeTreeIndex

RangeTreeIndex RangeTreeIndex::build(const LabeledList& list, std::size_t b) {
  require_branching(list, b);
  RangeTreeIndex idx;
  idx.n_ = list.size();
  idx.b_ = b;
  idx.levels_.emplace_back(list.labels().begin(), list.labels().end());
  for (std::size_t chunk = b; chunk / b < idx.n_; chunk *= b) {
    std::vector<Label> level = idx.levels_.back();
    for (std::size_t lo = 0; lo < idx.n_; lo += chunk) {
      const auto first = level.begin() + static_cast<std::ptrdiff_t>(lo);
      std::sort(first, level.begin() + static_cast<std::ptrdiff_t>(std::min(idx.n_, lo + chunk)));
    }
    idx.levels_.push_back(std::move(level));
  }
  return idx;
}

std::vector<std::span<const Label>> RangeTreeIndex::canonical_decomposition(ListRange r) const {
  if (r.i < 1 || r.i > r.j || r.j > n_) throw Error(Errc::malformed_query, "range outside the list");
  std::vector<std::span<const Label>> out;
  std::vector<std::span<const Label>> right;
  std::size_t lo = r.i - 1;  // half-open [lo, hi)
  std::size_t hi = r.j;
  std::size_t chunk = 1;
  for (std::size_t h = 0; h < levels_.size() && lo < hi; ++h, chunk *= b_) {
    const std::span<const Label> level(levels_[h]);
    const std::size_t parent = chunk * b_;
    const bool top = h + 1 == levels_.size();
    while (lo < hi && (top || lo % parent != 0)) {
      const std::size_t end = std::min(lo + chunk, hi);
      out.push_back(level.subspan(lo, end - lo));
      lo = end;
    }
    while (lo < hi && hi % parent != 0 && hi != n_) {
      right.push_back(level.subspan(hi - chunk, chunk));
      hi -= chunk;
    }
  }
  out.insert(out.end(), right.rbegin(), right.rend());
  return out;
}

MedianAnswer RangeTreeIndex::query(ListRange r, QueryStats* stats) const {
  const auto parts = canonical_decomposition(r);
  const std::size_t rank = median_rank(r.length());
  if (stats) stats->probes += parts.size();
  return MedianAnswer{select_sorted_arrays(parts, rank, stats, false), static_cast<std::uint32_t>(rank)};
}

void RangeTreeIndex::save(BinaryWriter& w) const {
  w.put(static_cast<std::uint64_t>(n_));
  w.put(static_cast<std::uint64_t>(b_));
  w.put(static_cast<std::uint64_t>(levels_.size()));
  for (const auto& level : levels_) w.put_vector(level);
}

RangeTreeIndex RangeTreeIndex::load(BinaryReader& r) {
  RangeTreeIndex idx;
  idx.n_ = static_cast<std::size_t>(r.get<std::uint64_t>());
  idx.b_ = static_cast<std::size_t>(r.get<std::uint64_t>());
  const auto count = r.get<std::uint64_t>();
  for (std::uint64_t h = 0; h < count; ++h) {
    idx.levels_.push_back(r.get_vector<Label>());
    if (idx.levels_.back().size() != idx.n_) throw Error(Errc::parse_error, "range tree level size mismatch");
  }
  if (idx.levels_.empty()) throw Error(Errc::parse_error, "range tree without levels");
  return idx;
}

// ---------------------------------------------------------------------------
// MedianConstantIndex

std::size_t MedianConstantIndex::default_block_size(std::size_t n) noexcept {
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 1)));
  const double lglg = lg > 1.0 ? std::log2(lg) : 0.0;
  if (lglg <= 0.0) return 1;
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::floor(std::sqrt(lg / lglg))), 1,
                                 std::max<std::size_t>(n, 1));
}

MedianConstantIndex MedianConstantIndex::build(const LabeledList& list, std::size_t block_size) {
  if (list.empty()) throw Error(Errc::empty_input, "median index over an empty list");
  if (block_size == 0) block_size = default_block_size(list.size());
  if (block_size > list.size()) throw Error(Errc::bad_params, "block size must satisfy 1 <= k <= n");
  if (6 * block_size + 1 > 0xFFFF) throw Error(Errc::bad_params, "block size too large for 16-bit candidate codes");

  MedianConstantIndex idx;
  idx.list_ = list;
  idx.k_ = block_size;
  idx.block_count_ = (list.size() + block_size - 1) / block_size;
  idx.build_in_block();
  idx.build_pairs();
  idx.tables_.freeze();
  return idx;
}

void MedianConstantIndex::build_in_block() {
  in_block_.assign(block_count_ * k_ * k_, Label{});
  std::vector<Label> run;
  for (std::size_t b = 0; b < block_count_; ++b) {
    const std::size_t start = block_start(b);
    for (std::size_t x = 0; x < block_length(b); ++x) {
      run.clear();
      for (std::size_t y = x; y < block_length(b); ++y) {
        const Label v = list_.at(start + y);
        run.insert(std::upper_bound(run.begin(), run.end(), v), v);
        in_block_[b * k_ * k_ + x * k_ + y] = run[median_rank(run.size()) - 1];
      }
    }
  }
}

void MedianConstantIndex::build_pairs() {
  const std::size_t b = block_count_;
  tables_ = TableStore(k_ * k_);
  table_of_pair_.assign(b * (b - 1) / 2, 0);
  candidate_offsets_.assign(1, 0);
  candidate_offsets_.reserve(table_of_pair_.size() + 1);

  MiddleCounts middle(list_.label_bound());
  std::vector<Label> window;
  // (value, source, offset): source 0 = left block, 1 = middle window,
  // 2 = right block, matching list order among equal values.
  std::vector<std::tuple<Label, int, std::size_t>> items;
  std::vector<std::uint16_t> left_slot(k_), right_slot(k_), first_equal;
  std::vector<std::uint16_t> cells(k_ * k_);

  for (std::size_t bi = 0; bi + 1 < b; ++bi) {
    const std::size_t left_start = block_start(bi);
    const std::size_t left_len = block_length(bi);
    for (std::size_t bj = bi + 1; bj < b; ++bj) {
      if (bj >= bi + 2) {
        const std::size_t start = block_start(bj - 1);
        for (std::size_t p = start; p < start + k_; ++p) middle.add(list_.at(p));
      }
      const std::size_t right_start = block_start(bj);
      const std::size_t right_len = block_length(bj);
      const MiddleWindow w = middle_window(middle.size(), k_);
      window.clear();
      middle.extract(w, window);

      items.clear();
      for (std::size_t x = 0; x < left_len; ++x) items.emplace_back(list_.at(left_start + x), 0, x);
      for (std::size_t t = 0; t < window.size(); ++t) items.emplace_back(window[t], 1, t);
      for (std::size_t y = 0; y < right_len; ++y) items.emplace_back(list_.at(right_start + y), 2, y);
      std::sort(items.begin(), items.end());
      first_equal.resize(items.size());
      for (std::size_t c = 0; c < items.size(); ++c) {
        const auto& [value, source, offset] = items[c];
        candidates_.push_back(value);
        first_equal[c] = static_cast<std::uint16_t>(
            c > 0 && std::get<0>(items[c - 1]) == value ? first_equal[c - 1] : c);
        if (source == 0) left_slot[offset] = static_cast<std::uint16_t>(c);
        if (source == 2) right_slot[offset] = static_cast<std::uint16_t>(c);
      }
      candidate_offsets_.push_back(candidates_.size());

      detail::Fenwick active(items.size());
      for (std::size_t c = 0; c < items.size(); ++c) {
        if (std::get<1>(items[c]) == 1) active.add(c, 1);
      }
      std::fill(cells.begin(), cells.end(), std::uint16_t{0});
      for (std::size_t x = left_len; x-- > 0;) {
        active.add(left_slot[x], 1);
        for (std::size_t y = 0; y < right_len; ++y) {
          active.add(right_slot[y], 1);
          const std::size_t m = (left_len - x) + middle.size() + (y + 1);
          const std::size_t local = median_rank(m) - w.omitted_low();
          cells[x * k_ + y] = first_equal[active.kth(static_cast<std::int64_t>(local))];
        }
        for (std::size_t y = 0; y < right_len; ++y) active.add(right_slot[y], -1);
      }
      table_of_pair_[pair_slot(bi, bj)] = tables_.intern(cells);
    }
    for (std::size_t blk = bi + 1; blk + 1 < b; ++blk) {
      const std::size_t start = block_start(blk);
      for (std::size_t p = start; p < start + k_; ++p) middle.remove(list_.at(p));
    }
  }
}

MedianAnswer MedianConstantIndex::query(ListRange r, QueryStats* stats) const {
  list_.check_range(r);
  const auto rank = static_cast<std::uint32_t>(median_rank(r.length()));
  const std::size_t bi = (r.i - 1) / k_;
  const std::size_t bj = (r.j - 1) / k_;
  const std::size_t x = (r.i - 1) % k_;
  const std::size_t y = (r.j - 1) % k_;
  if (bi == bj) {
    if (stats) stats->probes += 2;
    return MedianAnswer{in_block_[bi * k_ * k_ + x * k_ + y], rank};
  }
  // Pair entry, table cell, candidate.
  if (stats) stats->probes += 3;
  const std::size_t slot = pair_slot(bi, bj);
  const std::uint16_t code = tables_.at(table_of_pair_[slot], x * k_ + y);
  return MedianAnswer{candidates_[candidate_offsets_[slot] + code], rank};
}

std::span<const Label> MedianConstantIndex::candidates(std::size_t bi, std::size_t bj) const noexcept {
  const std::size_t slot = pair_slot(bi, bj);
  return std::span(candidates_).subspan(candidate_offsets_[slot], candidate_offsets_[slot + 1] - candidate_offsets_[slot]);
}

std::size_t MedianConstantIndex::words() const noexcept {
  return list_.size() + table_of_pair_.size() + 2 * candidate_offsets_.size() + candidates_.size() + tables_.words() +
         in_block_.size();
}

void MedianConstantIndex::save(BinaryWriter& w) const {
  save_list(w, list_);
  w.put(static_cast<std::uint64_t>(k_));
  w.put(static_cast<std::uint64_t>(block_count_));
  w.put_vector(table_of_pair_);
  w.put_vector(candidate_offsets_);
  w.put_vector(candidates_);
  tables_.save(w);
  w.put_vector(in_block_);
}

MedianConstantIndex MedianConstantIndex::load(BinaryReader& r) {
  MedianConstantIndex idx;
  idx.list_ = load_list(r);
  idx.k_ = static_cast<std::size_t>(r.get<std::uint64_t>());
  idx.block_count_ = static_cast<std::size_t>(r.get<std::uint64_t>());
  idx.table_of_pair_ = r.get_vector<std::uint32_t>();
  idx.candidate_offsets_ = r.get_vector<std::uint64_t>();
  idx.candidates_ = r.get_vector<Label>();
  idx.tables_ = TableStore::load(r);
  idx.in_block_ = r.get_vector<Label>();
  return idx;
}

}  // namespace rqk
