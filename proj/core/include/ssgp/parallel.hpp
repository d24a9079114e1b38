#pragma once

#include <cstddef>
#include <functional>

namespace ssgp {

/// Worker count: SSGP_THREADS if set and positive, otherwise the hardware
/// concurrency (SSGP_THREADS=0 also means automatic).
unsigned thread_count();

/// Runs body(i) for i in [0, n). Indices are dealt out in contiguous blocks;
/// callers write results into per-index slots so the outcome does not depend
/// on scheduling. The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ssgp
