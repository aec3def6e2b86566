#pragma once

#include <cstddef>
#include <functional>
#include <span>

namespace addcomb {

// Process-wide worker count for the pure kernels. Defaults to the hardware
// concurrency; the CLI overrides it from --threads.
void set_thread_count(std::size_t n);
std::size_t thread_count();

// Runs body(i) for i in [0, n). Indices are split into contiguous chunks, one
// per worker. body must only write to state owned by index i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Pairwise (cascade) summation with a fixed reduction tree, so the result
// depends only on the input order and never on the thread count.
double pairwise_sum(std::span<const double> values);

}  // namespace addcomb
