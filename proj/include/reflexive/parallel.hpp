#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace reflexive {

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path kept for testing; `parallel` distributes independent indices over
/// OpenMP threads.
enum class Exec { serial, parallel };

/// Calls fn(i) for i in [0, n). Iterations must be independent and write only
/// to slot i of their outputs. The first exception (lowest index) is rethrown
/// after the loop so both policies fail identically.
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (long long i = 0; i < count; ++i) {
      try {
        fn(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace reflexive
