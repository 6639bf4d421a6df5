#pragma once

#include <string_view>

#include "dynkin/stopping.hpp"

namespace dynkin {

/// A prior/belief about the opponent's existence paired with the state.
struct BeliefPoint {
    double p = 0.0;
    double x = 0.0;
};

/// Partition of (belief, state) space.
///   continuation_bar: p <= b(x)        no action, beliefs reflect off b
///   action_prime:     b(x) < p < c(x)  an initial stopping atom, then reflection
///   stop:             p >= c(x)        immediate stop
enum class Region { continuation_bar, action_prime, stop };

std::string_view to_string(Region region) noexcept;

/// Absolute tolerance applied when comparing beliefs against b and c.
inline constexpr double kBoundaryTol = 1e-12;

/// b(x) = 1 - g(x)/V(x): the largest belief at which waiting still beats
/// stopping alone. 0 on the one-player stop region, 1 where g = 0 (even if
/// V = 0 there, as at an absorbing edge of a solved table).
double boundary_b(const ValueOracle& oracle, double x);

/// c(x) = (V - g)/(V - g/2): the belief at which a split immediate stop
/// matches the discounted waiting value.
double boundary_c(const ValueOracle& oracle, double x);

Region classify(const ValueOracle& oracle, BeliefPoint point);

/// max{(1-p)V(x), (1-p/2)g(x)}: what a player can guarantee regardless of
/// the opponent.
double safety_level(const ValueOracle& oracle, BeliefPoint point);

/// State x with b(x) = y for y in (0,1), by bisection. For the closed form the
/// bracket is (K, B), where b is strictly decreasing. For tabulated oracles the
/// level must be crossed exactly once, downward; otherwise not_invertible.
double b_inverse(const ValueOracle& oracle, double y);

}  // namespace dynkin
