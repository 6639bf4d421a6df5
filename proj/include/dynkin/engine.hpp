#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dynkin/equilibrium.hpp"
#include "dynkin/rng.hpp"

namespace dynkin {

enum class SimMode {
    semi_analytic,  // draw U and theta, settle with expected hitting discounts (GBM only)
    path,           // draw U and theta, sample exact GBM first-passage times
    stepped,        // time-stepped GBM, Gamma read off the sampled running minimum of b
};

std::string_view to_string(SimMode mode) noexcept;
SimMode sim_mode_from_string(std::string_view name);

struct SimConfig {
    std::uint64_t n_paths = 100000;
    std::uint64_t seed = 42;
    double dt = 0.01;
    double t_max = 250.0;
    SimMode mode = SimMode::semi_analytic;
    // Replace the theta draws by their expectation (semi-analytic mode only).
    bool integrate_theta = false;
    // Process driving path and stepped modes; defaults to the oracle's model.
    std::optional<GbmModel> dynamics;

    void validate() const;
};

enum class Stopper { player1, player2, both, neither };
std::string_view to_string(Stopper stopper) noexcept;

/// One simulated game. Stop times are in calendar time for path and stepped
/// modes and are replaced by trigger levels in semi-analytic mode; a level at
/// or below the start means time 0. Infinite entries mean the player never stops.
struct OutcomeRecord {
    std::uint64_t path_id = 0;
    double u1 = 0.0;
    double u2 = 0.0;
    bool theta1 = false;
    bool theta2 = false;
    double stop1 = 0.0;
    double stop2 = 0.0;
    Stopper stopper = Stopper::neither;
    double t_or_level = 0.0;  // time or level of the first effective stop
    double r1 = 0.0;          // discounted payoffs
    double r2 = 0.0;
};

/// Expected payoff of the pure strategy "stop on first reaching L" (L <= x
/// means stop at once) against an opponent playing `rule`, for a player with
/// prior p. Requires the closed-form GBM oracle (non_gbm_oracle otherwise).
double payoff_vs_rule(const ValueOracle& oracle, const RandomizedStopRule& rule, double p,
                      double level, double x);

/// Upper hitting level equivalent to the trigger for draw u under `rule`,
/// or +inf when the player never stops. Returns x for an immediate stop.
double trigger_level(const ValueOracle& oracle, const RandomizedStopRule& rule, double u,
                     double x);

OutcomeRecord sample_outcome(const ValueOracle& oracle, const EquilibriumProfile& profile,
                             const SimConfig& config, std::uint64_t path_id);

std::vector<OutcomeRecord> simulate_outcomes_serial(const ValueOracle& oracle,
                                                    const EquilibriumProfile& profile,
                                                    const SimConfig& config);
std::vector<OutcomeRecord> simulate_outcomes(const ValueOracle& oracle,
                                             const EquilibriumProfile& profile,
                                             const SimConfig& config);

struct Estimate {
    int player = 1;
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    SimMode mode = SimMode::semi_analytic;
};

/// Sample mean and standard error of a per-path statistic.
Estimate summarize(std::span<const double> samples);

Estimate estimate_value(const ValueOracle& oracle, const EquilibriumProfile& profile,
                        int player, const SimConfig& config);

/// Left Riemann sum over the u-grid {0, 1/n, ..., (n-1)/n} of the payoff of
/// the player's own u-level time against the opponent's rule.
double integrate_over_levels(const ValueOracle& oracle, const EquilibriumProfile& profile,
                             int player, std::size_t n_grid = 1000);
double integrate_over_levels(const ValueOracle& oracle, const EquilibriumProfile& profile,
                             int player, std::span<const double> u_grid);

void write_outcome_csv(std::ostream& os, std::span<const OutcomeRecord> outcomes);

}  // namespace dynkin
