#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an OpenMP
// version; both produce bit-identical results (no reductions that depend on
// the thread schedule), which the test suite checks.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <vector>

namespace dynkin::kernels {

/// Trinomial chain on a node grid. Interior node i moves to i-1, i, i+1 with
/// probabilities down[i], mid[i], up[i]. Boundary nodes are either absorbing
/// (value fixed at the payoff) or reflecting (the outward move is mirrored).
struct TrinomialChain {
    std::vector<double> up;
    std::vector<double> mid;
    std::vector<double> down;
    double discount = 1.0;
    bool reflecting = false;
};

/// One Jacobi Bellman sweep: next = max(payoff, discount * P current).
/// Returns the sup-norm change.
double bellman_sweep_serial(const TrinomialChain& chain, std::span<const double> payoff,
                            std::span<const double> current, std::span<double> next);
double bellman_sweep_omp(const TrinomialChain& chain, std::span<const double> payoff,
                         std::span<const double> current, std::span<double> next);

/// Fill out[i] = f(first + i) for every slot; f must be pure in its index.
template <class T>
using IndexedFn = std::function<T(std::uint64_t)>;

template <class T>
void map_indexed_serial(std::uint64_t first, std::span<T> out, const IndexedFn<T>& f) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(first + i);
}

/// An exception escaping f is rethrown after the loop; when several slots
/// fail, the one with the lowest index wins, as in the serial version.
template <class T>
void map_indexed_omp(std::uint64_t first, std::span<T> out, const IndexedFn<T>& f) {
    const auto n = static_cast<std::int64_t>(out.size());
    std::exception_ptr error;
    std::int64_t error_at = n;
#pragma omp parallel for schedule(dynamic, 1024)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            out[i] = f(first + static_cast<std::uint64_t>(i));
        } catch (...) {
#pragma omp critical(dynkin_map_indexed_error)
            if (i < error_at) {
                error_at = i;
                error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
}

/// Pairwise (cascade) summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> xs);

}  // namespace dynkin::kernels
