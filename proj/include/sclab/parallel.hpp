#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace sclab::par {

// Process-wide switch between the OpenMP kernels and the serial reference
// loops. Defaults to parallel when the binary was built with OpenMP.
// Both paths produce identical results, including witness indices.
bool enabled();
void set_enabled(bool on);

// True when the binary was compiled with OpenMP support.
bool compiled_with_openmp();

// Smallest index i in [0, n) with failing(i) == true, or nullopt.
// The parallel kernel prunes work past the best index found so far but
// still returns the minimum, so witnesses are deterministic.
std::optional<std::size_t> first_failure(std::size_t n,
                                         const std::function<bool(std::size_t)>& failing);

// Runs body(i) for every i in [0, n). Iterations must be independent.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

// Serial reference implementations, callable directly from tests and the
// benchmark regardless of the global switch.
std::optional<std::size_t> first_failure_serial(std::size_t n,
                                                const std::function<bool(std::size_t)>& failing);
void for_each_index_serial(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace sclab::par
