#pragma once

namespace rqk::fault {

// Deliberate defects for mutation runs of the fuzzer. Never enabled outside
// `rqk fuzz --mutate` and the tests that check the fuzzer catches them.
enum class Fault {
  none,
  range_count_off_by_one,
};

void inject(Fault f) noexcept;
Fault active() noexcept;

}  // namespace rqk::fault
