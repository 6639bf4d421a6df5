#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dynkin/stopping.hpp"

namespace dynkin {

/// Conditional probability that the opponent exists, given prior p and that
/// the opponent's stopping intensity has accumulated to gamma without a stop:
/// p(1-gamma)/(1-p gamma).
double pi_from_gamma(double p, double gamma);

/// Inverse of pi_from_gamma: (p - pi)/(p(1 - pi)). Requires 0 <= pi <= p < 1.
double gamma_from_pi(double p, double pi);

/// Running minimum of sampled b values capped at p: Z_k = min(p, b_0, ..., b_k).
std::vector<double> z_path(double p, std::span<const double> b_values);

/// Intensity generated by a nonincreasing belief path, (p - Z)/(p(1 - Z)).
std::vector<double> gamma_path(double p, std::span<const double> z);

/// Belief level below which the u-level time triggers: Gamma_t > u exactly
/// when Z_t < p(1-u)/(1-pu).
double trigger_belief(double p, double u);

/// {x : b(x) < z(u)}. When b is invertible around the level the set is the
/// half-line above `threshold` and the trigger time is a first passage.
struct TriggerSet {
    double p = 0.0;
    double u = 0.0;
    double belief_level = 0.0;
    std::optional<double> threshold;

    bool contains(const ValueOracle& oracle, double x) const;
};

TriggerSet level_time_set(const ValueOracle& oracle, double p, double u);

/// Belief path sampled at discrete times. Z is the running minimum of b(X)
/// over the samples only; the continuous infimum between samples is not
/// interpolated.
struct BeliefPath {
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> b;
    std::vector<double> z;
    std::vector<double> gamma;
    std::vector<double> pi;
};

BeliefPath trace_beliefs(const ValueOracle& oracle, double p, std::span<const double> times,
                         std::span<const double> states);

/// CSV with header t,x,b,z,gamma,pi.
void write_belief_csv(std::ostream& os, const BeliefPath& path);

}  // namespace dynkin
