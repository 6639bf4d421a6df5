#include "dynkin/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "dynkin/error.hpp"
#include "dynkin/kernels.hpp"
#include "dynkin/regions.hpp"
#include "format.hpp"

namespace dynkin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const GbmModel& require_gbm(const ValueOracle& oracle) {
    if (oracle.kind() != ValueOracle::Kind::closed_form_gbm) {
        throw Error(Errc::non_gbm_oracle,
                    "semi-analytic evaluation needs the closed-form GBM oracle");
    }
    return *oracle.model();
}

bool same_level(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, b); }

// Share of g a player receives when stopping at `own` while the opponent's
// effective stop is at `other` (both times or both levels).
double share(double own, double other) {
    if (own < other) return 1.0;
    if (own == other) return 0.5;
    return 0.0;
}


// Inverse Gaussian draw (Michael, Schucany and Haas 1976) with mean m and
// shape lambda. The smaller root is written as 4 lambda m^2 y/(s + m y)^2 so it
// stays accurate when m*y >> lambda (near-zero drift).
double inverse_gaussian(PathStream& rng, double m, double lambda) {
    const double n = rng.normal();
    const double a = m * n * n;
    const double s = std::sqrt(a * (4.0 * lambda + a));
    const double root = 4.0 * lambda * m * a / ((s + a) * (s + a));
    if (!(root > 0.0)) return m;
    return rng.uniform() <= m / (m + root) ? root : m * m / root;
}

// First passage time of GBM from `from` up to `to`; +inf when never reached.
double first_passage(PathStream& rng, const GbmModel& model, double from, double to) {
    if (to <= from) return 0.0;
    const double a = std::log(to / from);
    const double s2 = model.sigma() * model.sigma();
    const double nu = model.mu() - 0.5 * s2;
    if (nu == 0.0) {
        const double n = rng.normal();
        return a * a / (s2 * n * n);
    }
    if (nu < 0.0 && !rng.bernoulli(std::exp(2.0 * nu * a / s2))) return kInf;
    return inverse_gaussian(rng, a / std::abs(nu), a * a / s2);
}

const GbmModel& dynamics_of(const ValueOracle& oracle, const SimConfig& config) {
    if (config.dynamics) return *config.dynamics;
    if (const GbmModel* m = oracle.model()) return *m;
    throw Error(Errc::invalid_config, "path simulation needs GBM dynamics for a tabulated oracle");
}

struct Draws {
    double u1, u2;
    bool theta1, theta2;
};

OutcomeRecord settle_outcome(const EquilibriumProfile& profile, const SimConfig& config,
                             std::uint64_t path_id, const Draws& d, double stop1, double stop2,
                             double pay1, double pay2) {
    OutcomeRecord out;
    out.path_id = path_id;
    out.u1 = d.u1;
    out.u2 = d.u2;
    out.theta1 = d.theta1;
    out.theta2 = d.theta2;
    out.stop1 = stop1;
    out.stop2 = stop2;
    if (stop1 == kInf && stop2 == kInf) {
        out.stopper = Stopper::neither;
        out.t_or_level = kInf;
    } else if (stop1 == stop2) {
        out.stopper = Stopper::both;
        out.t_or_level = stop1;
    } else if (stop1 < stop2) {
        out.stopper = Stopper::player1;
        out.t_or_level = stop1;
    } else {
        out.stopper = Stopper::player2;
        out.t_or_level = stop2;
    }
    // The opponent's effective time is +inf when theta = 0; integrating theta
    // averages the two cases with weights 1-p and p.
    const auto factor = [&](double own, double other, bool theta, double p) {
        if (config.integrate_theta) return (1.0 - p) + p * share(own, other);
        return theta ? share(own, other) : 1.0;
    };
    if (stop1 < kInf) out.r1 = pay1 * factor(stop1, stop2, d.theta1, profile.p1);
    if (stop2 < kInf) out.r2 = pay2 * factor(stop2, stop1, d.theta2, profile.p2);
    return out;
}

OutcomeRecord sample_semi_analytic(const ValueOracle& oracle, const EquilibriumProfile& profile,
                                   const SimConfig& config, std::uint64_t path_id,
                                   const Draws& d) {
    const GbmModel& model = require_gbm(oracle);
    const double x = profile.x;
    double l1 = trigger_level(oracle, profile.rule1, d.u1, x);
    double l2 = trigger_level(oracle, profile.rule2, d.u2, x);
    const auto payoff_at = [&](double level) {
        return level == kInf ? 0.0 : model.hitting_discount(x, level) * oracle.payoff(level);
    };
    return settle_outcome(profile, config, path_id, d, l1, l2, payoff_at(l1), payoff_at(l2));
}

OutcomeRecord sample_path(const ValueOracle& oracle, const EquilibriumProfile& profile,
                          const SimConfig& config, std::uint64_t path_id, const Draws& d,
                          PathStream& rng) {
    const GbmModel& model = dynamics_of(oracle, config);
    const double x = profile.x;
    const double l1 = trigger_level(oracle, profile.rule1, d.u1, x);
    const double l2 = trigger_level(oracle, profile.rule2, d.u2, x);

    // Strong Markov: reach the lower level first, then continue to the higher one.
    const double lo = std::min(l1, l2);
    const double hi = std::max(l1, l2);
    double t_lo = lo == kInf ? kInf : first_passage(rng, model, x, lo);
    double t_hi = kInf;
    if (t_lo < kInf && hi < kInf) t_hi = t_lo + first_passage(rng, model, lo, hi);
    if (t_lo > config.t_max) t_lo = kInf;
    if (t_hi > config.t_max) t_hi = kInf;

    const double t1 = l1 <= l2 ? t_lo : t_hi;
    const double t2 = l1 <= l2 ? (l1 == l2 ? t_lo : t_hi) : t_lo;
    const auto payoff_at = [&](double t, double level) {
        return t == kInf ? 0.0 : std::exp(-model.rate() * t) * oracle.payoff(level);
    };
    return settle_outcome(profile, config, path_id, d, t1, t2, payoff_at(t1, l1),
                          payoff_at(t2, l2));
}

OutcomeRecord sample_stepped(const ValueOracle& oracle, const EquilibriumProfile& profile,
                             const SimConfig& config, std::uint64_t path_id, const Draws& d,
                             PathStream& rng) {
    const GbmModel& model = dynamics_of(oracle, config);
    const double lo = oracle.lower();
    const double hi = oracle.upper();
    const double stop_level = oracle.stop_threshold();
    const double drift = (model.mu() - 0.5 * model.sigma() * model.sigma()) * config.dt;
    const double vol = model.sigma() * std::sqrt(config.dt);
    const auto steps = static_cast<std::uint64_t>(std::ceil(config.t_max / config.dt));

    double state = profile.x;
    double z = 1.0;
    double t1 = kInf, t2 = kInf, pay1 = 0.0, pay2 = 0.0;
    for (std::uint64_t k = 0; k <= steps; ++k) {
        if (k > 0) state *= std::exp(drift + vol * rng.normal());
        const double t = static_cast<double>(k) * config.dt;
        z = std::min(z, boundary_b(oracle, std::clamp(state, lo, hi)));
        const bool in_stop = state >= stop_level;
        const auto gamma = [&](const RandomizedStopRule& rule) {
            return in_stop ? rule.intensity_after_stop_region() : rule.intensity(z);
        };
        const auto pay = [&] {
            return std::exp(-model.rate() * t) * oracle.payoff(std::clamp(state, lo, hi));
        };
        if (t1 == kInf && gamma(profile.rule1) > d.u1) {
            t1 = t;
            pay1 = pay();
        }
        if (t2 == kInf && gamma(profile.rule2) > d.u2) {
            t2 = t;
            pay2 = pay();
        }
        if (t1 < kInf && t2 < kInf) break;
    }
    return settle_outcome(profile, config, path_id, d, t1, t2, pay1, pay2);
}

}  // namespace

std::string_view to_string(SimMode mode) noexcept {
    switch (mode) {
        case SimMode::semi_analytic: return "semi-analytic";
        case SimMode::path: return "path";
        case SimMode::stepped: return "stepped";
    }
    return "unknown";
}

SimMode sim_mode_from_string(std::string_view name) {
    if (name == "semi-analytic" || name == "semi_analytic") return SimMode::semi_analytic;
    if (name == "path") return SimMode::path;
    if (name == "stepped") return SimMode::stepped;
    throw Error(Errc::invalid_config, "unknown simulation mode '" + std::string(name) + "'");
}

std::string_view to_string(Stopper stopper) noexcept {
    switch (stopper) {
        case Stopper::player1: return "player1";
        case Stopper::player2: return "player2";
        case Stopper::both: return "both";
        case Stopper::neither: return "neither";
    }
    return "unknown";
}

void SimConfig::validate() const {
    if (n_paths < 1) throw Error(Errc::invalid_config, "n_paths must be at least 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(Errc::invalid_config, "dt must be positive");
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw Error(Errc::invalid_config, "t_max must be positive");
    }
    if (integrate_theta && mode != SimMode::semi_analytic) {
        throw Error(Errc::invalid_config, "theta integration is only offered in semi-analytic mode");
    }
}

double payoff_vs_rule(const ValueOracle& oracle, const RandomizedStopRule& rule, double p,
                      double level, double x) {
    const GbmModel& model = require_gbm(oracle);
    if (!(p >= 0.0 && p <= 1.0)) throw Error(Errc::invalid_argument, "prior must lie in [0,1]");
    if (!(x > 0.0)) throw Error(Errc::nonpositive_state, "starting state must be positive");
    if (std::isnan(level)) throw Error(Errc::invalid_argument, "deviation level is NaN");
    const double big_b = model.threshold();

    if (level <= x) {
        // All of Gamma_0 is a jump at time 0, so ties take half of it.
        const double gamma0 = x >= big_b ? rule.intensity_after_stop_region()
                                         : rule.intensity(boundary_b(oracle, x));
        return model.payoff(x) * (1.0 - 0.5 * p * gamma0);
    }
    if (level == std::numeric_limits<double>::infinity()) return 0.0;
    const double discount = model.hitting_discount(x, level);
    if (same_level(level, big_b)) {
        const double gamma = rule.intensity_after_stop_region();
        return discount * model.payoff(big_b) *
               (1.0 - p * gamma + 0.5 * p * rule.jump_at_stop_region());
    }
    if (level > big_b) {
        return discount * model.payoff(level) * (1.0 - p * rule.intensity_after_stop_region());
    }
    return discount * model.payoff(level) * (1.0 - p * rule.intensity(boundary_b(oracle, level)));
}

double trigger_level(const ValueOracle& oracle, const RandomizedStopRule& rule, double u,
                     double x) {
    const Trigger trig = rule.trigger(u);
    switch (trig.kind) {
        case Trigger::Kind::immediate: return x;
        case Trigger::Kind::never: return std::numeric_limits<double>::infinity();
        case Trigger::Kind::one_player: return std::max(x, oracle.stop_threshold());
        case Trigger::Kind::belief_level: break;
    }
    if (x >= oracle.stop_threshold() || trig.belief > boundary_b(oracle, x)) return x;
    return std::max(x, b_inverse(oracle, trig.belief));
}

OutcomeRecord sample_outcome(const ValueOracle& oracle, const EquilibriumProfile& profile,
                             const SimConfig& config, std::uint64_t path_id) {
    PathStream rng(config.seed, path_id);
    Draws d{};
    d.u1 = rng.uniform();
    d.u2 = rng.uniform();
    d.theta1 = rng.bernoulli(profile.p1);
    d.theta2 = rng.bernoulli(profile.p2);
    switch (config.mode) {
        case SimMode::semi_analytic: return sample_semi_analytic(oracle, profile, config, path_id, d);
        case SimMode::path: return sample_path(oracle, profile, config, path_id, d, rng);
        case SimMode::stepped: return sample_stepped(oracle, profile, config, path_id, d, rng);
    }
    throw Error(Errc::invalid_config, "unknown simulation mode");
}

std::vector<OutcomeRecord> simulate_outcomes_serial(const ValueOracle& oracle,
                                                    const EquilibriumProfile& profile,
                                                    const SimConfig& config) {
    config.validate();
    std::vector<OutcomeRecord> out(config.n_paths);
    kernels::map_indexed_serial<OutcomeRecord>(
        0, out, [&](std::uint64_t id) { return sample_outcome(oracle, profile, config, id); });
    return out;
}

std::vector<OutcomeRecord> simulate_outcomes(const ValueOracle& oracle,
                                             const EquilibriumProfile& profile,
                                             const SimConfig& config) {
    config.validate();
    std::vector<OutcomeRecord> out(config.n_paths);
    kernels::map_indexed_omp<OutcomeRecord>(
        0, out, [&](std::uint64_t id) { return sample_outcome(oracle, profile, config, id); });
    return out;
}

Estimate summarize(std::span<const double> samples) {
    Estimate est;
    est.n = samples.size();
    if (samples.empty()) return est;
    const double n = static_cast<double>(samples.size());
    est.mean = kernels::pairwise_sum(samples) / n;
    if (samples.size() > 1) {
        std::vector<double> sq(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double dev = samples[i] - est.mean;
            sq[i] = dev * dev;
        }
        est.std_error = std::sqrt(kernels::pairwise_sum(sq) / (n - 1.0) / n);
    }
    return est;
}

Estimate estimate_value(const ValueOracle& oracle, const EquilibriumProfile& profile,
                        int player, const SimConfig& config) {
    if (player != 1 && player != 2) throw Error(Errc::invalid_argument, "player must be 1 or 2");
    const auto outcomes = simulate_outcomes(oracle, profile, config);
    std::vector<double> payoffs(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        payoffs[i] = player == 1 ? outcomes[i].r1 : outcomes[i].r2;
    }
    Estimate est = summarize(payoffs);
    est.player = player;
    est.seed = config.seed;
    est.mode = config.mode;
    return est;
}

double integrate_over_levels(const ValueOracle& oracle, const EquilibriumProfile& profile,
                             int player, std::span<const double> u_grid) {
    if (player != 1 && player != 2) throw Error(Errc::invalid_argument, "player must be 1 or 2");
    if (u_grid.empty()) throw Error(Errc::invalid_grid, "u-grid is empty");
    std::vector<double> values(u_grid.size());
    for (std::size_t i = 0; i < u_grid.size(); ++i) {
        const double u = u_grid[i];
        if (!(u >= 0.0 && u < 1.0)) throw Error(Errc::invalid_grid, "u-grid must lie in [0,1)");
        const double level = trigger_level(oracle, profile.rule(player), u, profile.x);
        values[i] = payoff_vs_rule(oracle, profile.opponent_rule(player), profile.prior(player),
                                   level, profile.x);
    }
    return kernels::pairwise_sum(values) / static_cast<double>(values.size());
}

double integrate_over_levels(const ValueOracle& oracle, const EquilibriumProfile& profile,
                             int player, std::size_t n_grid) {
    if (n_grid == 0) throw Error(Errc::invalid_grid, "u-grid is empty");
    std::vector<double> grid(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) {
        grid[i] = static_cast<double>(i) / static_cast<double>(n_grid);
    }
    return integrate_over_levels(oracle, profile, player, grid);
}

void write_outcome_csv(std::ostream& os, std::span<const OutcomeRecord> outcomes) {
    os << "path_id,u1,u2,theta1,theta2,stopper,t_or_level,r1,r2\n";
    for (const auto& o : outcomes) {
        os << o.path_id << ',' << fmt_full(o.u1) << ',' << fmt_full(o.u2) << ','
           << (o.theta1 ? 1 : 0) << ',' << (o.theta2 ? 1 : 0) << ',' << to_string(o.stopper)
           << ',' << fmt_full(o.t_or_level) << ',' << fmt_full(o.r1) << ',' << fmt_full(o.r2)
           << '\n';
    }
}

}  // namespace dynkin
