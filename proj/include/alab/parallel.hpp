#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace alab {

// Runs body(i) for i in [0, n) on up to `threads` workers. Each index is
// handled by exactly one worker; callers write results into slot i and
// aggregate afterwards in index order, so the outcome does not depend on
// the thread count.
template <typename Body>
void parallel_for(std::size_t n, int threads, Body&& body) {
  const std::size_t workers =
      std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace alab
