#include "dynkin/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "dynkin/error.hpp"
#include "format.hpp"

namespace dynkin {

RandomizedStopRule RandomizedStopRule::immediate() { return {1.0, 1.0, 1.0, false}; }

RandomizedStopRule RandomizedStopRule::one_player() { return {0.0, 1.0, 0.0, true}; }

double RandomizedStopRule::intensity(double z) const {
    if (scale == atom0) return atom0;
    const double zz = std::min(z, q);
    const double reflected = zz >= 1.0 ? 0.0 : (q - zz) / (q * (1.0 - zz));
    return atom0 + (scale - atom0) * std::clamp(reflected, 0.0, 1.0);
}

double RandomizedStopRule::intensity_after_stop_region() const {
    return terminal_jump ? 1.0 : scale;
}

double RandomizedStopRule::jump_at_stop_region() const { return terminal_jump ? 1.0 - scale : 0.0; }

Trigger RandomizedStopRule::trigger(double u) const {
    if (u < atom0) return {Trigger::Kind::immediate, 0.0};
    if (u >= scale) {
        return {terminal_jump ? Trigger::Kind::one_player : Trigger::Kind::never, 0.0};
    }
    const double w = (u - atom0) / (scale - atom0);
    return {Trigger::Kind::belief_level, q * (1.0 - w) / (1.0 - q * w)};
}

InitialJump initial_jump(const ValueOracle& oracle, double p1, double x) {
    if (!(p1 > 0.0 && p1 < 1.0)) {
        throw Error(Errc::invalid_argument, "initial jump needs p1 in (0,1)");
    }
    const Region region = classify(oracle, {p1, x});
    if (region == Region::stop) {
        throw Error(Errc::wrong_region, "(p1, x) lies in the stop region; no initial jump");
    }
    if (region == Region::continuation_bar) return {0.0, p1};
    const double v = oracle.value(x);
    const double g = oracle.payoff(x);
    const double gamma0 = (2.0 / p1) * std::max(0.0, 1.0 - (1.0 - p1) * v / g);
    return {gamma0, p1 * (1.0 - gamma0) / (1.0 - p1 * gamma0)};
}

EquilibriumProfile build_profile(const ValueOracle& oracle, double p1, double p2, double x) {
    if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) {
        throw Error(Errc::invalid_argument, "priors must lie in [0,1]");
    }
    if (!(x > 0.0)) throw Error(Errc::nonpositive_state, "starting state must be positive");

    EquilibriumProfile out;
    if (p1 > p2) {
        std::swap(p1, p2);
        out.relabeled = true;
    }
    out.p1 = p1;
    out.p2 = p2;
    out.x = x;

    const double v = oracle.value(x);
    const double g = oracle.payoff(x);

    if (p1 == 0.0) {
        if (p2 > 0.0) {
            throw Error(Errc::no_equilibrium,
                        "one player is sure the opponent is absent (prior 0) while the other "
                        "is not; the latter would preempt the one-player stop just before it "
                        "happens, which no randomized stopping time achieves, so no "
                        "equilibrium exists");
        }
        out.kind = ProfileKind::no_competition;
        out.region = Region::continuation_bar;
        out.value1 = out.value2 = v;
        out.rule1 = out.rule2 = RandomizedStopRule::one_player();
        return out;
    }
    if (p1 == 1.0) {
        out.kind = ProfileKind::certain_competition;
        out.region = Region::stop;
        out.value1 = out.value2 = 0.5 * g;
        out.rule1 = out.rule2 = RandomizedStopRule::immediate();
        return out;
    }

    out.region = classify(oracle, {p1, x});
    if (out.region == Region::stop) {
        out.kind = ProfileKind::immediate_stop;
        out.value1 = (1.0 - 0.5 * p1) * g;
        out.value2 = (1.0 - 0.5 * p2) * g;
        out.rule1 = out.rule2 = RandomizedStopRule::immediate();
        return out;
    }

    const InitialJump jump = initial_jump(oracle, p1, x);
    const double ratio = p1 / p2;
    out.kind = ProfileKind::reflection;
    out.gamma0_star = jump.gamma0_star;
    out.q1 = jump.q1;
    out.value1 = out.value2 = (1.0 - p1) * v;
    out.rule2 = {jump.gamma0_star, jump.q1, 1.0, false};
    out.rule1 = {ratio * jump.gamma0_star, jump.q1, ratio, true};
    return out;
}

std::pair<double, double> jump_structure(const EquilibriumProfile& profile, double t,
                                         bool at_tau_v) {
    if (at_tau_v) {
        return {profile.rule1.jump_at_stop_region(), profile.rule2.jump_at_stop_region()};
    }
    if (t == 0.0) return {profile.rule1.atom0, profile.rule2.atom0};
    return {0.0, 0.0};
}

std::pair<double, double> belief_evolution(const EquilibriumProfile& profile, double z) {
    if (profile.kind != ProfileKind::reflection) {
        throw Error(Errc::wrong_region, "belief evolution is defined for reflection profiles");
    }
    const double p1 = profile.p1;
    const double p2 = profile.p2;
    return {z, ((1.0 - p2) * z + p2 - p1) / (1.0 - p1)};
}

}  // namespace dynkin
