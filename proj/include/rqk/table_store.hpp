#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "rqk/binary_io.hpp"

namespace rqk {

/// Content-addressed pool of fixed-width uint16 tables. Interning a table
/// that is already stored returns the existing id.
class TableStore {
 public:
  TableStore() : TableStore(1) {}
  explicit TableStore(std::size_t width);
  TableStore(TableStore&&) noexcept;
  TableStore& operator=(TableStore&&) noexcept;
  ~TableStore();

  std::uint32_t intern(std::span<const std::uint16_t> table);
  std::uint16_t at(std::uint32_t id, std::size_t cell) const noexcept { return cells_[std::size_t{id} * width_ + cell]; }
  std::span<const std::uint16_t> table(std::uint32_t id) const noexcept {
    return std::span(cells_).subspan(std::size_t{id} * width_, width_);
  }
  std::size_t width() const noexcept { return width_; }
  std::size_t count() const noexcept { return cells_.size() / width_; }
  /// 32-bit words of table content.
  std::size_t words() const noexcept { return (cells_.size() + 1) / 2; }
  /// Drops the lookup hash; interning afterwards is not allowed.
  void freeze() noexcept;

  void save(BinaryWriter& w) const;
  static TableStore load(BinaryReader& r);

 private:
  struct Lookup;
  std::size_t width_;
  std::vector<std::uint16_t> cells_;
  std::unique_ptr<Lookup> lookup_;
};

}  // namespace rqk
