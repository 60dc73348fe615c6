#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "rqk/core.hpp"

namespace rqk {

// Little-endian primitive encoding shared by every snapshot payload.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  template <class T>
    requires std::is_integral_v<T> || std::is_floating_point_v<T>
  void put(T value) {
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out_.write(bytes.data(), bytes.size());
    if (!out_) throw Error(Errc::io_error, "write failed");
  }

  void put(Label l) { put(l.id); }

  template <class T>
  void put_vector(const std::vector<T>& values) {
    put(static_cast<std::uint64_t>(values.size()));
    if constexpr (std::is_arithmetic_v<T> && std::endian::native == std::endian::little) {
      put_bytes(reinterpret_cast<const char*>(values.data()), values.size() * sizeof(T));
    } else {
      for (const auto& v : values) put(v);
    }
  }

  void put_bytes(const char* data, std::size_t size) {
    out_.write(data, static_cast<std::streamsize>(size));
    if (!out_) throw Error(Errc::io_error, "write failed");
  }

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  template <class T>
    requires std::is_integral_v<T> || std::is_floating_point_v<T> || std::is_same_v<T, Label>
  T get() {
    if constexpr (std::is_same_v<T, Label>) {
      return Label{get<std::uint32_t>()};
    } else {
      std::array<char, sizeof(T)> bytes;
      in_.read(bytes.data(), bytes.size());
      if (!in_) throw Error(Errc::io_error, "snapshot truncated");
      if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
      T value;
      std::memcpy(&value, bytes.data(), sizeof(T));
      return value;
    }
  }

  template <class T>
  std::vector<T> get_vector() {
    const auto n = get<std::uint64_t>();
    if (n > (std::uint64_t{1} << 34)) throw Error(Errc::io_error, "implausible vector length in snapshot");
    std::vector<T> out;
    if constexpr (std::is_arithmetic_v<T> && std::endian::native == std::endian::little) {
      // Grow in bounded steps so a corrupt length fails on truncation, not allocation.
      constexpr std::uint64_t kChunk = std::uint64_t{1} << 20;
      for (std::uint64_t done = 0; done < n;) {
        const auto step = std::min(kChunk, n - done);
        out.resize(static_cast<std::size_t>(done + step));
        get_bytes(reinterpret_cast<char*>(out.data() + done), static_cast<std::size_t>(step) * sizeof(T));
        done += step;
      }
    } else {
      for (std::uint64_t k = 0; k < n; ++k) out.push_back(get<T>());
    }
    return out;
  }

  void get_bytes(char* data, std::size_t size) {
    in_.read(data, static_cast<std::streamsize>(size));
    if (!in_) throw Error(Errc::io_error, "snapshot truncated");
  }

 private:
  std::istream& in_;
};

void save_list(BinaryWriter& w, const LabeledList& list);
LabeledList load_list(BinaryReader& r);
void save_tree(BinaryWriter& w, const LabeledTree& tree);
LabeledTree load_tree(BinaryReader& r);

}  // namespace rqk
