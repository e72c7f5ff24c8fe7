#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace nct {

/// Worker count for grid sweeps: hardware concurrency, capped by NCT_THREADS.
std::size_t thread_count();

/// Runs body(i) for i in [0, n). Iterations must write disjoint outputs; the
/// result never depends on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> xs);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs);

}  // namespace nct
