#pragma once

#include <cstddef>
#include <functional>

namespace rnncover {

/// Runs fn(i) for every i in [0, n) on up to `threads` workers with a
/// static stride partition. Callers write results into index-addressed
/// slots and derive per-index RNG substreams, so output is identical
/// for any thread count. Exceptions from workers are rethrown (first
/// one wins).
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

} // namespace rnncover
