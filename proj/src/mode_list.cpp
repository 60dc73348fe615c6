#include "rqk/mode_list.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "rqk/fault.hpp"

namespace rqk {

namespace fault {
namespace {
std::atomic<Fault> g_fault{Fault::none};
}
void inject(Fault f) noexcept { g_fault.store(f); }
Fault active() noexcept { return g_fault.load(std::memory_order_relaxed); }
}  // namespace fault

// ---------------------------------------------------------------------------
// OccurrenceIndex

OccurrenceIndex::OccurrenceIndex(const LabeledList& list) {
  if (list.empty()) throw Error(Errc::empty_input, "occurrence index over an empty list");
  const std::size_t bound = list.label_bound();
  offsets_.assign(bound + 1, 0);
  for (Label l : list.labels()) ++offsets_[l.id + 1];
  for (std::size_t x = 0; x < bound; ++x) offsets_[x + 1] += offsets_[x];
  positions_.resize(list.size());
  std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t p = 1; p <= list.size(); ++p) positions_[fill[list.at(p).id]++] = static_cast<std::uint32_t>(p);
}

std::span<const std::uint32_t> OccurrenceIndex::positions(Label x) const noexcept {
  if (x.id >= label_bound()) return {};
  return std::span(positions_).subspan(offsets_[x.id], offsets_[x.id + 1] - offsets_[x.id]);
}

std::size_t OccurrenceIndex::count(Label x, ListRange r, QueryStats* stats) const {
  if (stats) ++stats->probes;
  const auto a = positions(x);
  const auto lo = std::lower_bound(a.begin(), a.end(), r.i);
  const auto hi = std::upper_bound(lo, a.end(), r.j);
  auto c = static_cast<std::size_t>(hi - lo);
  if (fault::active() == fault::Fault::range_count_off_by_one && c > 0 && r.j > r.i) --c;
  return c;
}

void OccurrenceIndex::save(BinaryWriter& w) const {
  w.put_vector(offsets_);
  w.put_vector(positions_);
}

OccurrenceIndex OccurrenceIndex::load(BinaryReader& r) {
  OccurrenceIndex idx;
  idx.offsets_ = r.get_vector<std::uint32_t>();
  idx.positions_ = r.get_vector<std::uint32_t>();
  return idx;
}

namespace {

ModeAnswer sort_and_scan(std::span<const Label> slice, QueryStats* stats) {
  std::vector<Label> sorted(slice.begin(), slice.end());
  std::sort(sorted.begin(), sorted.end());
  if (stats) stats->probes += sorted.size();
  ModeAnswer best{sorted[0], 0};
  std::size_t run_start = 0;
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    if (k == sorted.size() || sorted[k] != sorted[run_start]) {
      const auto run = static_cast<std::uint32_t>(k - run_start);
      if (run > best.frequency) best = ModeAnswer{sorted[run_start], run};
      run_start = k;
    }
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// ModeTradeoffIndex

ModeTradeoffIndex ModeTradeoffIndex::build(const LabeledList& list, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) {
    throw Error(Errc::bad_epsilon, "epsilon must lie in (0, 1/2], got " + std::to_string(epsilon));
  }
  if (list.empty()) throw Error(Errc::empty_input, "mode index over an empty list");
  const double target = std::pow(static_cast<double>(list.size()), 1.0 - epsilon);
  const auto blocks = static_cast<std::size_t>(std::max(1.0, std::ceil(target - 1e-9)));
  return with_blocks(list, blocks);
}

ModeTradeoffIndex ModeTradeoffIndex::with_blocks(const LabeledList& list, std::size_t blocks) {
  if (list.empty()) throw Error(Errc::empty_input, "mode index over an empty list");
  if (blocks < 1 || blocks > list.size()) throw Error(Errc::bad_params, "block count must satisfy 1 <= b <= n");
  return ModeTradeoffIndex(list, (list.size() + blocks - 1) / blocks);
}

ModeTradeoffIndex ModeTradeoffIndex::with_block_size(const LabeledList& list, std::size_t block_size) {
  if (list.empty()) throw Error(Errc::empty_input, "mode index over an empty list");
  if (block_size < 1 || block_size > list.size()) throw Error(Errc::bad_params, "block size must satisfy 1 <= s <= n");
  return ModeTradeoffIndex(list, block_size);
}

ModeTradeoffIndex::ModeTradeoffIndex(const LabeledList& list, std::size_t block_size)
    : list_(list), occ_(list), block_size_(block_size), block_count_((list.size() + block_size - 1) / block_size) {
  const std::size_t n = list_.size();
  const std::size_t b = block_count_;
  middle_.assign(b * (b - 1) / 2, ModeAnswer{});
  for (std::size_t bi = 0; bi + 2 < b; ++bi) {
    ModeAnswer current{};
    const std::size_t from = (bi + 1) * block_size_ + 1;
    for (std::size_t bj = bi + 2; bj < b; ++bj) {
      // Extend the middle by block bj - 1; only its elements and the old mode
      // can be the new mode.
      const ListRange span{from, bj * block_size_};
      if (current.frequency > 0) current.frequency = static_cast<std::uint32_t>(occ_.count(current.value, span));
      for (std::size_t p = (bj - 1) * block_size_ + 1; p <= std::min(n, bj * block_size_); ++p) {
        const Label x = list_.at(p);
        const auto c = static_cast<std::uint32_t>(occ_.count(x, span));
        if (c > current.frequency) current = ModeAnswer{x, c};
      }
      middle_[pair_slot(bi, bj)] = current;
    }
  }
}

std::optional<ModeAnswer> ModeTradeoffIndex::middle_mode(std::size_t bi, std::size_t bj) const {
  const ModeAnswer& m = middle_[pair_slot(bi, bj)];
  if (m.frequency == 0) return std::nullopt;
  return m;
}

ModeAnswer ModeTradeoffIndex::query(ListRange r, QueryStats* stats) const {
  list_.check_range(r);
  const std::size_t bi = (r.i - 1) / block_size_;
  const std::size_t bj = (r.j - 1) / block_size_;
  if (bi == bj) return sort_and_scan(list_.slice(r), stats);

  if (stats) ++stats->probes;
  ModeAnswer best{};
  auto consider = [&](Label x) {
    if (stats) ++stats->candidates;
    const auto c = static_cast<std::uint32_t>(occ_.count(x, r, stats));
    if (c > best.frequency) best = ModeAnswer{x, c};
  };
  const ModeAnswer& middle = middle_[pair_slot(bi, bj)];
  if (middle.frequency > 0) consider(middle.value);
  for (std::size_t p = r.i; p <= (bi + 1) * block_size_; ++p) consider(list_.at(p));
  for (std::size_t p = bj * block_size_ + 1; p <= r.j; ++p) consider(list_.at(p));
  return best;
}

std::size_t ModeTradeoffIndex::words() const noexcept {
  return list_.size() + occ_.words() + 2 * middle_.size() + 2;
}

void ModeTradeoffIndex::save(BinaryWriter& w) const {
  save_list(w, list_);
  occ_.save(w);
  w.put(static_cast<std::uint64_t>(block_size_));
  w.put(static_cast<std::uint64_t>(block_count_));
  w.put(static_cast<std::uint64_t>(middle_.size()));
  for (const auto& m : middle_) {
    w.put(m.value);
    w.put(m.frequency);
  }
}

ModeTradeoffIndex ModeTradeoffIndex::load(BinaryReader& r) {
  ModeTradeoffIndex idx(LabeledList(std::vector<Label>{Label{}}), 1);
  idx.list_ = load_list(r);
  idx.occ_ = OccurrenceIndex::load(r);
  idx.block_size_ = static_cast<std::size_t>(r.get<std::uint64_t>());
  idx.block_count_ = static_cast<std::size_t>(r.get<std::uint64_t>());
  const auto entries = r.get<std::uint64_t>();
  idx.middle_.clear();
  idx.middle_.reserve(static_cast<std::size_t>(entries));
  for (std::uint64_t e = 0; e < entries; ++e) {
    ModeAnswer m;
    m.value = r.get<Label>();
    m.frequency = r.get<std::uint32_t>();
    idx.middle_.push_back(m);
  }
  return idx;
}

// ---------------------------------------------------------------------------
// ModeConstantIndex

namespace {

// Number of indices idx in [lo, lo + width) for which `pred` holds, where
// pred is true on a prefix of the window. The probe count depends only on
// width, never on the data.
template <class Pred>
std::int64_t count_true_prefix(std::int64_t lo, std::int64_t width, Pred pred, QueryStats* stats) {
  std::int64_t base = lo;
  std::int64_t n = width;
  while (n > 1) {
    const std::int64_t half = n / 2;
    if (stats) ++stats->probes;
    if (pred(base + half)) base += half;
    n -= half;
  }
  if (stats) ++stats->probes;
  return (pred(base) ? 1 : 0) + base - lo;
}

}  // namespace

std::size_t ModeConstantIndex::default_block_size(std::size_t n) noexcept {
  const double lg = std::log2(static_cast<double>(std::max<std::size_t>(n, 1)));
  const double lglg = lg > 1.0 ? std::log2(lg) : 0.0;
  if (lglg <= 0.0) return 1;
  const auto k = static_cast<std::size_t>(std::floor(std::sqrt(lg / lglg)));
  return std::clamp<std::size_t>(k, 1, std::max<std::size_t>(n, 1));
}

ModeConstantIndex ModeConstantIndex::build(const LabeledList& list, std::size_t block_size) {
  if (list.empty()) throw Error(Errc::empty_input, "mode index over an empty list");
  if (block_size == 0) block_size = default_block_size(list.size());
  if (block_size > list.size()) throw Error(Errc::bad_params, "block size must satisfy 1 <= k <= n");
  if (2 * block_size > 0xFFFF) throw Error(Errc::bad_params, "block size too large for 16-bit outcome codes");

  ModeConstantIndex idx;
  idx.list_ = list;
  idx.occ_ = OccurrenceIndex(list);
  idx.k_ = block_size;
  idx.block_count_ = (list.size() + block_size - 1) / block_size;
  idx.position_rank_.resize(list.size() + 1, 0);
  for (std::size_t x = 0; x < list.label_bound(); ++x) {
    const auto a = idx.occ_.positions(Label{static_cast<std::uint32_t>(x)});
    for (std::size_t t = 0; t < a.size(); ++t) idx.position_rank_[a[t]] = static_cast<std::uint32_t>(t);
  }
  idx.build_in_block();
  idx.build_pairs();
  idx.tables_.freeze();
  return idx;
}

void ModeConstantIndex::build_in_block() {
  in_block_.assign(block_count_ * k_ * k_, ModeAnswer{});
  std::vector<std::uint32_t> count(list_.label_bound(), 0);
  for (std::size_t b = 0; b < block_count_; ++b) {
    const std::size_t start = block_start(b);
    const std::size_t len = block_length(b);
    for (std::size_t x = 0; x < len; ++x) {
      ModeAnswer best{};
      for (std::size_t y = x; y < len; ++y) {
        const Label l = list_.at(start + y);
        if (++count[l.id] > best.frequency) best = ModeAnswer{l, count[l.id]};
        in_block_[b * k_ * k_ + x * k_ + y] = best;
      }
      for (std::size_t y = x; y < len; ++y) --count[list_.at(start + y).id];
    }
  }
}

void ModeConstantIndex::build_pairs() {
  const std::size_t b = block_count_;
  const std::size_t width = k_ * k_;
  pairs_.assign(b * (b - 1) / 2, PairEntry{});
  tables_ = TableStore(width);
  std::vector<std::uint32_t> count(list_.label_bound(), 0);
  std::vector<std::uint16_t> scratch(width);

  // Winner bookkeeping: `code` is the outcome code of the current best label.
  struct Best {
    std::uint32_t frequency;
    std::uint16_t code;
  };

  for (std::size_t bi = 0; bi + 1 < b; ++bi) {
    Label mode{};
    std::uint32_t mode_freq = 0;
    const std::size_t left_start = block_start(bi);
    const std::size_t left_len = block_length(bi);
    for (std::size_t bj = bi + 1; bj < b; ++bj) {
      if (bj >= bi + 2) {
        const std::size_t s = block_start(bj - 1);
        for (std::size_t p = s; p < s + block_length(bj - 1); ++p) {
          const Label l = list_.at(p);
          if (++count[l.id] > mode_freq) {
            mode_freq = count[l.id];
            mode = l;
          }
        }
      }
      const std::size_t right_start = block_start(bj);
      const std::size_t right_len = block_length(bj);
      std::fill(scratch.begin(), scratch.end(), std::uint16_t{0});

      Best best{mode_freq, 0};
      for (std::size_t x = left_len; x-- > 0;) {
        const Label l = list_.at(left_start + x);
        if (++count[l.id] > best.frequency) best = Best{count[l.id], static_cast<std::uint16_t>(1 + x)};
        const Best saved = best;
        for (std::size_t y = 0; y < right_len; ++y) {
          const Label r = list_.at(right_start + y);
          if (++count[r.id] > best.frequency) best = Best{count[r.id], static_cast<std::uint16_t>(k_ + 1 + y)};
          scratch[x * k_ + y] = best.code;
        }
        for (std::size_t y = 0; y < right_len; ++y) --count[list_.at(right_start + y).id];
        best = saved;
      }
      for (std::size_t x = 0; x < left_len; ++x) --count[list_.at(left_start + x).id];

      PairEntry& e = pairs_[pair_slot(bi, bj)];
      e.table = tables_.intern(scratch);
      e.mode = mode;
      e.frequency = mode_freq;
    }
    for (std::size_t blk = bi + 1; blk + 1 < b; ++blk) {
      const std::size_t s = block_start(blk);
      for (std::size_t p = s; p < s + block_length(blk); ++p) --count[list_.at(p).id];
    }
  }
}

ModeAnswer ModeConstantIndex::query(ListRange r, QueryStats* stats) const {
  list_.check_range(r);
  const std::size_t bi = (r.i - 1) / k_;
  const std::size_t bj = (r.j - 1) / k_;
  const std::size_t x = (r.i - 1) % k_;
  const std::size_t y = (r.j - 1) % k_;
  if (bi == bj) {
    if (stats) stats->probes += 2;
    return in_block_[bi * k_ * k_ + x * k_ + y];
  }

  // Pair entry, table cell, decode.
  if (stats) stats->probes += 3;
  const PairEntry& e = pairs_[pair_slot(bi, bj)];
  const std::uint16_t code = tables_.at(e.table, x * k_ + y);
  if (code == 0) return ModeAnswer{e.mode, e.frequency};

  // A left code names the winner's first occurrence in the range, a right
  // code its last one. Its frequency exceeds the middle mode's by 1..2k, so
  // the other end of its run lies in a window of 2k slots of A_winner.
  const auto window = static_cast<std::int64_t>(2 * k_);
  const auto f = static_cast<std::int64_t>(e.frequency);
  if (code <= k_) {
    const std::size_t p = block_start(bi) + code - 1;
    const Label w = list_.at(p);
    const auto a = occ_.positions(w);
    const auto size = static_cast<std::int64_t>(a.size());
    const std::int64_t first = position_rank_[p];
    const std::int64_t lo = first + f;
    const std::int64_t last =
        lo - 1 + count_true_prefix(lo, window, [&](std::int64_t t) {
          return t < size && a[static_cast<std::size_t>(t)] <= r.j;
        }, stats);
    return ModeAnswer{w, static_cast<std::uint32_t>(last - first + 1)};
  }
  const std::size_t p = block_start(bj) + (code - k_ - 1);
  const Label w = list_.at(p);
  const auto a = occ_.positions(w);
  const std::int64_t last = position_rank_[p];
  const std::int64_t lo = last - f - window + 1;
  const std::int64_t first =
      lo + count_true_prefix(lo, window, [&](std::int64_t t) {
        return t < 0 || a[static_cast<std::size_t>(t)] < r.i;
      }, stats);
  return ModeAnswer{w, static_cast<std::uint32_t>(last - first + 1)};
}

std::size_t ModeConstantIndex::words() const noexcept {
  return list_.size() + occ_.words() + position_rank_.size() + 3 * pairs_.size() + tables_.words() +
         2 * in_block_.size() + 2;
}

void ModeConstantIndex::save(BinaryWriter& w) const {
  save_list(w, list_);
  occ_.save(w);
  w.put_vector(position_rank_);
  w.put(static_cast<std::uint64_t>(k_));
  w.put(static_cast<std::uint64_t>(block_count_));
  w.put(static_cast<std::uint64_t>(pairs_.size()));
  for (const auto& e : pairs_) {
    w.put(e.table);
    w.put(e.mode);
    w.put(e.frequency);
  }
  tables_.save(w);
  w.put(static_cast<std::uint64_t>(in_block_.size()));
  for (const auto& m : in_block_) {
    w.put(m.value);
    w.put(m.frequency);
  }
}

ModeConstantIndex ModeConstantIndex::load(BinaryReader& r) {
  ModeConstantIndex idx;
  idx.list_ = load_list(r);
  idx.occ_ = OccurrenceIndex::load(r);
  idx.position_rank_ = r.get_vector<std::uint32_t>();
  idx.k_ = static_cast<std::size_t>(r.get<std::uint64_t>());
  idx.block_count_ = static_cast<std::size_t>(r.get<std::uint64_t>());
  const auto pairs = r.get<std::uint64_t>();
  idx.pairs_.reserve(static_cast<std::size_t>(pairs));
  for (std::uint64_t p = 0; p < pairs; ++p) {
    PairEntry e;
    e.table = r.get<std::uint32_t>();
    e.mode = r.get<Label>();
    e.frequency = r.get<std::uint32_t>();
    idx.pairs_.push_back(e);
  }
  idx.tables_ = TableStore::load(r);
  const auto cells = r.get<std::uint64_t>();
  idx.in_block_.reserve(static_cast<std::size_t>(cells));
  for (std::uint64_t c = 0; c < cells; ++c) {
    ModeAnswer m;
    m.value = r.get<Label>();
    m.frequency = r.get<std::uint32_t>();
    idx.in_block_.push_back(m);
  }
  return idx;
}

}  // namespace rqk
