// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace hybridfb {

// Run fn(0..n-1) on up to `threads` workers. Callers write results into
// preallocated slots indexed by i and reduce in fixed order afterwards, so
// results do not depend on the thread count.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

// Pin BLAS to one thread per call; invoked once from every entry point
// before the first linear-algebra call.
void pin_blas_single_thread();

} // namespace hybridfb
