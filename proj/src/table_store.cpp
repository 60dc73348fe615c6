#include "rqk/table_store.hpp"

#include <algorithm>
#include <unordered_set>

#include "rqk/error.hpp"

namespace rqk {

namespace {

struct TableHash {
  const std::vector<std::uint16_t>* cells;
  std::size_t width;
  std::size_t operator()(std::uint32_t id) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    const auto* p = cells->data() + std::size_t{id} * width;
    for (std::size_t k = 0; k < width; ++k) {
      h ^= p[k];
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct TableEqual {
  const std::vector<std::uint16_t>* cells;
  std::size_t width;
  bool operator()(std::uint32_t a, std::uint32_t b) const noexcept {
    const auto* p = cells->data();
    return std::equal(p + std::size_t{a} * width, p + (std::size_t{a} + 1) * width, p + std::size_t{b} * width);
  }
};

}  // namespace

struct TableStore::Lookup {
  std::unordered_set<std::uint32_t, TableHash, TableEqual> ids;
  Lookup(const std::vector<std::uint16_t>* cells, std::size_t width)
      : ids(64, TableHash{cells, width}, TableEqual{cells, width}) {}
};

TableStore::TableStore(std::size_t width) : width_(std::max<std::size_t>(width, 1)) {
  lookup_ = std::make_unique<Lookup>(&cells_, width_);
}

TableStore::TableStore(TableStore&& other) noexcept
    : width_(other.width_), cells_(std::move(other.cells_)), lookup_(std::move(other.lookup_)) {
  // The hash functors point at the owning vector; rebuild rather than alias.
  if (lookup_) {
    lookup_ = std::make_unique<Lookup>(&cells_, width_);
    for (std::uint32_t id = 0; id < count(); ++id) lookup_->ids.insert(id);
  }
}

TableStore& TableStore::operator=(TableStore&& other) noexcept {
  if (this != &other) {
    width_ = other.width_;
    cells_ = std::move(other.cells_);
    lookup_.reset();
    if (other.lookup_) {
      lookup_ = std::make_unique<Lookup>(&cells_, width_);
      for (std::uint32_t id = 0; id < count(); ++id) lookup_->ids.insert(id);
    }
    other.lookup_.reset();
  }
  return *this;
}

TableStore::~TableStore() = default;

std::uint32_t TableStore::intern(std::span<const std::uint16_t> table) {
  if (!lookup_) throw Error(Errc::bad_params, "table store is frozen");
  const auto candidate = static_cast<std::uint32_t>(count());
  cells_.insert(cells_.end(), table.begin(), table.end());
  auto [it, inserted] = lookup_->ids.insert(candidate);
  if (!inserted) cells_.resize(cells_.size() - width_);
  return *it;
}

void TableStore::freeze() noexcept {
  lookup_.reset();
  cells_.shrink_to_fit();
}

void TableStore::save(BinaryWriter& w) const {
  w.put(static_cast<std::uint64_t>(width_));
  w.put_vector(cells_);
}

TableStore TableStore::load(BinaryReader& r) {
  TableStore out(static_cast<std::size_t>(r.get<std::uint64_t>()));
  out.cells_ = r.get_vector<std::uint16_t>();
  if (out.cells_.size() % out.width_ != 0) throw Error(Errc::parse_error, "table store size mismatch");
  out.lookup_.reset();
  return out;
}

}  // namespace rqk
