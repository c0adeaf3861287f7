#pragma once

#include <cstddef>
#include <functional>

namespace hgcl {

/// Worker cap: min(hardware concurrency, HGCL_THREADS). At least 1.
std::size_t max_threads();

/// Runs fn(begin, end) over a block partition of [0, n). Each block must
/// write only its own output slots; results are then identical for any
/// thread count. Nested calls run serially on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace hgcl
