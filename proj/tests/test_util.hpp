#pragma once

#include <optional>
#include <utility>

#include "hirsch/error.hpp"

namespace hirsch_test {

// Runs the callable and reports the hirsch error code it threw, if any.
// Lets assertions pin the exact code instead of just "something threw".
template <class F>
std::optional<hirsch::Errc> thrown_code(F&& f) {
  try {
    std::forward<F>(f)();
  } catch (const hirsch::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace hirsch_test
