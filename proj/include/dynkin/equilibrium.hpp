#pragma once

#include <utility>

#include "dynkin/regions.hpp"
#include "dynkin/stopping.hpp"

namespace dynkin {

/// What a player's randomized time does for a given uniform draw u.
struct Trigger {
    enum class Kind {
        immediate,     // stop at t = 0
        belief_level,  // stop when the reflected belief Z first drops below `belief`
        one_player,    // stop on entering the one-player stop region {V = g}
        never,
    };
    Kind kind = Kind::immediate;
    double belief = 0.0;
};

/// Intensity process of the form
///
///     Gamma_t = atom0 + (scale - atom0) * G_t        for t < tau_V,
///     Gamma_t = 1                                    for t >= tau_V if terminal_jump,
///
/// where G_t = (q - Z_t)/(q (1 - Z_t)) and Z_t = q ^ inf_{s<=t} b(X_s) is the
/// belief reflected off b, started from q. Requires 0 <= atom0 <= scale <= 1.
/// Equilibrium rules additionally have atom0 < 1 and 0 < q <= b(x).
struct RandomizedStopRule {
    double atom0 = 0.0;
    double q = 1.0;
    double scale = 1.0;
    bool terminal_jump = false;

    /// Stops at t = 0 with certainty.
    static RandomizedStopRule immediate();
    /// The one-player rule: stop on first entry to {V = g}.
    static RandomizedStopRule one_player();

    /// Gamma given the current reflected belief, for 0 <= t < tau_V.
    double intensity(double z) const;
    /// Gamma on {t >= tau_V}.
    double intensity_after_stop_region() const;
    /// Size of the jump at tau_V.
    double jump_at_stop_region() const;

    Trigger trigger(double u) const;
};

enum class ProfileKind {
    certain_competition,  // p1 = p2 = 1: both stop at once
    no_competition,       // p1 = p2 = 0: both play the one-player rule
    reflection,           // (p1, x) in ContinuationBar or ActionPrime
    immediate_stop,       // (p1, x) in Stop
};

struct InitialJump {
    double gamma0_star = 0.0;  // stopping atom of player 2 at t = 0
    double q1 = 0.0;           // player 1's belief after the atom
};

/// Equilibrium strategies and values, with players ordered so p1 <= p2.
/// `relabeled` is set when the caller's players were swapped to get there.
struct EquilibriumProfile {
    ProfileKind kind = ProfileKind::reflection;
    Region region = Region::continuation_bar;
    double p1 = 0.0;
    double p2 = 0.0;
    double x = 0.0;
    double gamma0_star = 0.0;
    double q1 = 0.0;
    double value1 = 0.0;
    double value2 = 0.0;
    RandomizedStopRule rule1;
    RandomizedStopRule rule2;
    bool relabeled = false;

    double prior(int player) const { return player == 1 ? p1 : p2; }
    double value(int player) const { return player == 1 ? value1 : value2; }
    const RandomizedStopRule& rule(int player) const { return player == 1 ? rule1 : rule2; }
    const RandomizedStopRule& opponent_rule(int player) const {
        return player == 1 ? rule2 : rule1;
    }
};

/// Gamma*_0 = (2/p1)(1 - (1-p1)V/g)^+ and q1 = p1(1-Gamma*_0)/(1-p1 Gamma*_0).
/// wrong_region if (p1, x) lies in Stop.
InitialJump initial_jump(const ValueOracle& oracle, double p1, double x);

/// no_equilibrium when one prior is 0 and the other is positive.
EquilibriumProfile build_profile(const ValueOracle& oracle, double p1, double p2, double x);

/// (jump of Gamma^1, jump of Gamma^2) at time t, or at tau_V when the flag is set.
std::pair<double, double> jump_structure(const EquilibriumProfile& profile, double t,
                                         bool at_tau_v);

/// (Pi^1, Pi^2) when player 1's post-atom belief equals z:
/// Pi^2 = ((1-p2) Pi^1 + p2 - p1)/(1 - p1).
std::pair<double, double> belief_evolution(const EquilibriumProfile& profile, double z);

}  // namespace dynkin
