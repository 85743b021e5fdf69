#pragma once

#include <cstddef>
#include <functional>

namespace dcc {

/// How the row-parallel kernels run. `serial` is the reference path used by the tests.
enum class execution { serial, parallel };

/**
 * Calls `body(i)` for every i in [0, n).
 *
 * Iterations must only write state owned by index i; under that rule both
 * paths give identical results. The exception of the lowest failing index is
 * rethrown after the loop.
 */
void for_each_index(std::size_t n, execution exec, const std::function<void(std::size_t)> &body);

/// Number of threads the parallel path may use.
int max_threads();

}  // namespace dcc
