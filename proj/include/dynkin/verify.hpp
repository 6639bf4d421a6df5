#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dynkin/engine.hpp"

namespace dynkin {

/// Outcome of one check. Deterministic checks pass when
/// |estimate - target| <= tolerance; stochastic ones carry a standard error
/// and use tolerance = 3 * std_error.
struct EvalReport {
    std::string check;
    std::string target_source;
    double target = 0.0;
    double estimate = 0.0;
    std::optional<double> std_error;
    double tolerance = 0.0;
    bool pass = false;
    double runtime_ms = 0.0;
    std::string detail;
};

inline constexpr double kRelTol = 1e-9;

/// Deviation payoffs over n_levels evenly spaced thresholds on [x, B] plus the
/// immediate stop. Passes when none beats the equilibrium value by more than
/// kRelTol (relative) and the best of them attains it.
EvalReport best_response_sweep(const ValueOracle& oracle, const EquilibriumProfile& profile,
                               int player, std::size_t n_levels = 200);

/// Payoff of each u-level time u = k/n_grid, k < n_grid, against the
/// opponent's rule, compared with the equilibrium value. Reflection profiles only.
EvalReport indifference_check(const ValueOracle& oracle, const EquilibriumProfile& profile,
                              int player, std::size_t n_grid = 101);

struct IdentityOptions {
    std::uint64_t n_paths = 1000;
    std::uint64_t seed = 42;
    double dt = 0.01;
    double horizon = 25.0;
    std::uint64_t n_gating = 100000;  // outcomes for the theta-gating comparison
};

/// Belief identities along time-stepped GBM paths, the jump identities at
/// t = 0 and the gated-payoff scaling Jhat_i = p_{3-i} J_i.
std::vector<EvalReport> identity_suite(const ValueOracle& oracle,
                                       const EquilibriumProfile& profile,
                                       const IdentityOptions& options = {});

struct SafetyPoint {
    double p1, p2, x;
};

/// Equilibrium values against the safety level max{(1-p)V, (1-p/2)g} at
/// every grid point; points with exactly one zero prior are skipped.
EvalReport safety_dominance(const ValueOracle& oracle, const std::vector<SafetyPoint>& grid);

std::vector<SafetyPoint> default_safety_grid();

struct SuiteConfig {
    double mu = 0.0;
    double sigma = 0.2;
    double rate = 0.04;
    double strike = 1.0;
    double x = 1.5;
    double p1 = 0.15;
    double p2 = 0.15;
    std::uint64_t seed = 42;
    std::uint64_t n_paths = 1000;
};

/// suite is one of all, br, indiff, ids, safety.
std::vector<EvalReport> run_suite(const std::string& suite, const SuiteConfig& config);

bool all_pass(const std::vector<EvalReport>& reports);

void print_report_table(std::ostream& os, const std::vector<EvalReport>& reports);

}  // namespace dynkin
