#include "dynkin/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace dynkin::kernels {

namespace {

// Continuation value at node i; boundary nodes mirror the outward neighbour.
inline double continuation(const TrinomialChain& c, std::span<const double> v, std::size_t i) {
    const std::size_t n = v.size();
    const double left = i == 0 ? v[1] : v[i - 1];
    const double right = i + 1 == n ? v[n - 2] : v[i + 1];
    return c.discount * (c.up[i] * right + c.mid[i] * v[i] + c.down[i] * left);
}

inline double update(const TrinomialChain& c, std::span<const double> g,
                     std::span<const double> v, std::size_t i) {
    const bool edge = i == 0 || i + 1 == v.size();
    if (edge && !c.reflecting) return g[i];
    return std::max(g[i], continuation(c, v, i));
}

}  // namespace

double bellman_sweep_serial(const TrinomialChain& chain, std::span<const double> payoff,
                            std::span<const double> current, std::span<double> next) {
    double change = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) {
        next[i] = update(chain, payoff, current, i);
        change = std::max(change, std::abs(next[i] - current[i]));
    }
    return change;
}

double bellman_sweep_omp(const TrinomialChain& chain, std::span<const double> payoff,
                         std::span<const double> current, std::span<double> next) {
    const auto n = static_cast<std::int64_t>(current.size());
    double change = 0.0;
#pragma omp parallel for reduction(max : change) if (n > 4096)
    for (std::int64_t k = 0; k < n; ++k) {
        const auto i = static_cast<std::size_t>(k);
        next[i] = update(chain, payoff, current, i);
        change = std::max(change, std::abs(next[i] - current[i]));
    }
    return change;
}

double pairwise_sum(std::span<const double> xs) {
    constexpr std::size_t kLeaf = 64;
    if (xs.size() <= kLeaf) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace dynkin::kernels
