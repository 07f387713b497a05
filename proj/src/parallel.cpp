#include "sclab/parallel.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sclab::par {

namespace {
#ifdef _OPENMP
bool g_enabled = true;
#else
bool g_enabled = false;
#endif
} // namespace

bool enabled() { return g_enabled; }

void set_enabled(bool on) {
#ifdef _OPENMP
  g_enabled = on;
#else
  (void)on;
  g_enabled = false;
#endif
}

bool compiled_with_openmp() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

std::optional<std::size_t> first_failure_serial(std::size_t n,
                                                const std::function<bool(std::size_t)>& failing) {
  for (std::size_t i = 0; i < n; ++i) {
    if (failing(i)) return i;
  }
  return std::nullopt;
}

void for_each_index_serial(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

std::optional<std::size_t> first_failure(std::size_t n,
                                         const std::function<bool(std::size_t)>& failing) {
  if (!g_enabled || n < 2) return first_failure_serial(n, failing);
#ifdef _OPENMP
  std::atomic<std::size_t> best{n};
  // Iterations here are coarse (a whole program or pair check each), so
  // single-iteration chunks balance better than blocks.
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (idx >= best.load(std::memory_order_relaxed)) continue;
    if (!failing(idx)) continue;
    // Keep the minimum failing index.
    std::size_t cur = best.load(std::memory_order_relaxed);
    while (idx < cur && !best.compare_exchange_weak(cur, idx, std::memory_order_relaxed)) {
    }
  }
  const std::size_t found = best.load(std::memory_order_relaxed);
  if (found < n) return found;
  return std::nullopt;
#else
  return first_failure_serial(n, failing);
#endif
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body) {
  if (!g_enabled || n < 2) {
    for_each_index_serial(n, body);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
  for (long long i = 0; i < static_cast<long long>(n); ++i) {
    body(static_cast<std::size_t>(i));
  }
#else
  for_each_index_serial(n, body);
#endif
}

} // namespace sclab::par
