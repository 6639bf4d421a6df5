#include "dynkin/regions.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "dynkin/error.hpp"
#include "format.hpp"

namespace dynkin {

std::string_view to_string(Region region) noexcept {
    switch (region) {
        case Region::continuation_bar: return "ContinuationBar";
        case Region::action_prime: return "ActionPrime";
        case Region::stop: return "Stop";
    }
    return "?";
}

double boundary_b(const ValueOracle& oracle, double x) {
    const double v = oracle.value(x);
    const double g = oracle.payoff(x);
    if (g == 0.0) return 1.0;  // also covers V = 0 at an absorbing edge node
    if (!(v > 0.0)) throw Error(Errc::corrupt_oracle, "V(x) <= 0 at x=" + fmt_full(x));
    return std::clamp(1.0 - g / v, 0.0, 1.0);
}

double boundary_c(const ValueOracle& oracle, double x) {
    const double v = oracle.value(x);
    const double g = oracle.payoff(x);
    if (g == 0.0) return 1.0;
    if (!(v > 0.5 * g) || !(v > 0.0)) {
        throw Error(Errc::corrupt_oracle, "V(x) <= g(x)/2 at x=" + fmt_full(x));
    }
    return std::clamp((v - g) / (v - 0.5 * g), 0.0, 1.0);
}

Region classify(const ValueOracle& oracle, BeliefPoint point) {
    if (point.p <= boundary_b(oracle, point.x) + kBoundaryTol) return Region::continuation_bar;
    if (point.p >= boundary_c(oracle, point.x) - kBoundaryTol) return Region::stop;
    return Region::action_prime;
}

double safety_level(const ValueOracle& oracle, BeliefPoint point) {
    return std::max((1.0 - point.p) * oracle.value(point.x),
                    (1.0 - 0.5 * point.p) * oracle.payoff(point.x));
}

namespace {

// Bisection for a decreasing f on [lo, hi] with f(lo) >= y >= f(hi); runs
// until the bracket collapses to adjacent doubles.
template <class F>
double bisect_decreasing(F&& f, double lo, double hi, double y) {
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == y) return mid;
        if (fm > y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::abs(f(lo) - y) <= std::abs(f(hi) - y) ? lo : hi;
}

}  // namespace

double b_inverse(const ValueOracle& oracle, double y) {
    if (!(y > 0.0 && y < 1.0)) {
        throw Error(Errc::not_invertible, "b_inverse needs y in (0,1), got " + fmt_full(y));
    }
    const auto b = [&](double x) { return boundary_b(oracle, x); };

    double lo = 0.0;
    double hi = 0.0;
    if (const GbmModel* m = oracle.model()) {
        lo = m->strike();
        hi = m->threshold();
    } else {
        const auto& xs = oracle.nodes();
        std::vector<double> bs(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) bs[i] = b(xs[i]);
        std::optional<std::size_t> cell;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            if (bs[i] < y && bs[i + 1] >= y) {
                throw Error(Errc::not_invertible,
                            "tabulated b crosses level " + fmt_full(y) + " upward near x=" +
                                fmt_full(xs[i]));
            }
            if (bs[i] >= y && bs[i + 1] < y) {
                if (cell) {
                    throw Error(Errc::not_invertible,
                                "tabulated b crosses level " + fmt_full(y) + " more than once");
                }
                cell = i;
            }
        }
        if (!cell) {
            throw Error(Errc::not_invertible,
                        "tabulated b never falls below " + fmt_full(y) + " on the grid");
        }
        lo = xs[*cell];
        hi = xs[*cell + 1];
    }

    const double x = bisect_decreasing(b, lo, hi, y);
    if (std::abs(b(x) - y) > 1e-10) {
        throw Error(Errc::not_invertible, "bisection residual above 1e-10 for y=" + fmt_full(y));
    }
    return x;
}

}  // namespace dynkin
