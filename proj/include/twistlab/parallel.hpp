#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace twistlab {

enum class Execution { Parallel, Serial };

/// Runs body(i) for every i in [0, count). Exceptions are captured per index
/// and the lowest-index one is rethrown after the loop, so parallel and serial
/// runs fail identically.
template <class Body>
void for_each_index_serial(std::size_t count, Body&& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

template <class Body>
void for_each_index_parallel(std::size_t count, Body&& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <class Body>
void for_each_index(std::size_t count, Body&& body, Execution exec = Execution::Parallel) {
  if (exec == Execution::Serial) for_each_index_serial(count, body);
  else for_each_index_parallel(count, body);
}

}  // namespace twistlab
