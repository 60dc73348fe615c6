#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rqk {

enum class Errc {
  empty_input,
  empty_range,
  rank_out_of_range,
  unknown_node,
  unknown_label,
  unsorted_input,
  single_node,
  invalid_tree,
  bad_epsilon,
  bad_branching,
  bad_params,
  parse_error,
  io_error,
  version_mismatch,
  malformed_query,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace rqk
