#include "dynkin/belief.hpp"

#include <algorithm>
#include <ostream>

#include "dynkin/error.hpp"
#include "dynkin/regions.hpp"
#include "format.hpp"

namespace dynkin {

double pi_from_gamma(double p, double gamma) {
    if (!(p >= 0.0 && p <= 1.0) || !(gamma >= 0.0 && gamma <= 1.0)) {
        throw Error(Errc::invalid_argument, "pi_from_gamma needs p, gamma in [0,1]");
    }
    if (p == 1.0) return gamma < 1.0 ? 1.0 : 0.0;
    return p * (1.0 - gamma) / (1.0 - p * gamma);
}

double gamma_from_pi(double p, double pi) {
    if (!(p > 0.0 && p < 1.0) || !(pi >= 0.0)) {
        throw Error(Errc::invalid_argument, "gamma_from_pi needs p in (0,1) and pi >= 0");
    }
    if (pi > p) {
        throw Error(Errc::belief_above_prior,
                    "belief " + fmt_full(pi) + " exceeds prior " + fmt_full(p));
    }
    return (p - pi) / (p * (1.0 - pi));
}

std::vector<double> z_path(double p, std::span<const double> b_values) {
    std::vector<double> z(b_values.size());
    double running = p;
    for (std::size_t i = 0; i < b_values.size(); ++i) {
        running = std::min(running, b_values[i]);
        z[i] = running;
    }
    return z;
}

std::vector<double> gamma_path(double p, std::span<const double> z) {
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = gamma_from_pi(p, z[i]);
    return out;
}

double trigger_belief(double p, double u) {
    if (!(u >= 0.0 && u < 1.0)) throw Error(Errc::invalid_argument, "u must be in [0,1)");
    return p * (1.0 - u) / (1.0 - p * u);
}

bool TriggerSet::contains(const ValueOracle& oracle, double x) const {
    if (threshold) return x > *threshold;
    return boundary_b(oracle, x) < belief_level;
}

TriggerSet level_time_set(const ValueOracle& oracle, double p, double u) {
    TriggerSet set{p, u, trigger_belief(p, u), std::nullopt};
    if (set.belief_level > 0.0 && set.belief_level < 1.0) {
        try {
            set.threshold = b_inverse(oracle, set.belief_level);
        } catch (const Error& e) {
            if (e.code() != Errc::not_invertible) throw;
        }
    }
    return set;
}

BeliefPath trace_beliefs(const ValueOracle& oracle, double p, std::span<const double> times,
                         std::span<const double> states) {
    if (times.size() != states.size()) {
        throw Error(Errc::invalid_argument, "times and states differ in length");
    }
    BeliefPath path;
    path.t.assign(times.begin(), times.end());
    path.x.assign(states.begin(), states.end());
    path.b.reserve(states.size());
    for (double x : states) path.b.push_back(boundary_b(oracle, x));
    path.z = z_path(p, path.b);
    path.gamma = gamma_path(p, path.z);
    path.pi.reserve(states.size());
    for (double g : path.gamma) path.pi.push_back(pi_from_gamma(p, g));
    return path;
}

void write_belief_csv(std::ostream& os, const BeliefPath& path) {
    os << "t,x,b,z,gamma,pi\n";
    for (std::size_t i = 0; i < path.t.size(); ++i) {
        os << fmt_full(path.t[i]) << ',' << fmt_full(path.x[i]) << ',' << fmt_full(path.b[i])
           << ',' << fmt_full(path.z[i]) << ',' << fmt_full(path.gamma[i]) << ','
           << fmt_full(path.pi[i]) << '\n';
    }
}

}  // namespace dynkin
