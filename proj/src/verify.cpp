#include "dynkin/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "dynkin/belief.hpp"
#include "dynkin/error.hpp"
#include "dynkin/kernels.hpp"
#include "dynkin/rng.hpp"
#include "format.hpp"

namespace dynkin {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string label(const EquilibriumProfile& profile) {
    return "p1=" + fmt_short(profile.p1) + " p2=" + fmt_short(profile.p2) +
           " x=" + fmt_short(profile.x);
}

// Stream key for identity paths, kept apart from the outcome streams.
constexpr std::uint64_t kIdentityKey = 0x9E3779B97F4A7C15ull;

struct PathViolations {
    double pi_vs_z = 0.0;
    double alg = 0.0;
    double relation = 0.0;
    double gap_drop = 0.0;   // largest decrease of Pi^2 - Pi^1
    double belief_rise = 0.0;  // largest increase of either belief
    bool reached_stop = false;
};

PathViolations check_path(const ValueOracle& oracle, const EquilibriumProfile& profile,
                          const IdentityOptions& options, std::uint64_t id) {
    const GbmModel& model = *oracle.model();
    const double big_b = model.threshold();
    const double p1 = profile.p1;
    const double p2 = profile.p2;
    const double drift = (model.mu() - 0.5 * model.sigma() * model.sigma()) * options.dt;
    const double vol = model.sigma() * std::sqrt(options.dt);
    const auto steps = static_cast<std::uint64_t>(std::ceil(options.horizon / options.dt));

    PathStream rng(options.seed ^ kIdentityKey, id);
    PathViolations out;
    double state = profile.x;
    double z = profile.q1;
    double prev_pi1 = 0.0, prev_pi2 = 0.0;
    for (std::uint64_t k = 0; k <= steps; ++k) {
        if (k > 0) state *= std::exp(drift + vol * rng.normal());
        z = std::min(z, boundary_b(oracle, std::min(state, big_b)));
        const double gamma1 = profile.rule1.intensity(z);
        const double gamma2 = profile.rule2.intensity(z);
        const double pi1 = pi_from_gamma(p1, gamma2);
        const double pi2 = pi_from_gamma(p2, gamma1);

        out.pi_vs_z = std::max(out.pi_vs_z, std::abs(pi1 - z));
        out.alg = std::max(out.alg, std::abs((1.0 - p1) - (1.0 - p1 * gamma2) * (1.0 - pi1)));
        out.alg = std::max(out.alg, std::abs((1.0 - p2) - (1.0 - p2 * gamma1) * (1.0 - pi2)));
        const double related = ((1.0 - p2) * pi1 + p2 - p1) / (1.0 - p1);
        out.relation = std::max(out.relation, std::abs(pi2 - related));
        if (k > 0) {
            out.gap_drop = std::max(out.gap_drop, (prev_pi2 - prev_pi1) - (pi2 - pi1));
            out.belief_rise = std::max({out.belief_rise, pi1 - prev_pi1, pi2 - prev_pi2});
        }
        prev_pi1 = pi1;
        prev_pi2 = pi2;
        if (state >= big_b) {
            out.reached_stop = true;
            break;
        }
    }
    return out;
}

EvalReport bound_report(std::string check, double worst, double tol, std::string detail,
                        Clock::time_point start) {
    EvalReport r;
    r.check = std::move(check);
    r.target_source = "identity";
    r.target = 0.0;
    r.estimate = worst;
    r.tolerance = tol;
    r.pass = worst <= tol;
    r.detail = std::move(detail);
    r.runtime_ms = elapsed_ms(start);
    return r;
}

}  // namespace

EvalReport best_response_sweep(const ValueOracle& oracle, const EquilibriumProfile& profile,
                               int player, std::size_t n_levels) {
    const auto start = Clock::now();
    if (n_levels < 1) throw Error(Errc::invalid_grid, "sweep needs at least one level");
    const double x = profile.x;
    const double big_b = oracle.stop_threshold();
    const double hi = x < big_b ? big_b : 2.0 * x;
    const double value = profile.value(player);
    const double p = profile.prior(player);
    const RandomizedStopRule& opponent = profile.opponent_rule(player);

    double best = payoff_vs_rule(oracle, opponent, p, x, x);
    double best_level = x;
    for (std::size_t k = 1; k <= n_levels; ++k) {
        const double level =
            k == n_levels ? hi : x + (hi - x) * static_cast<double>(k) / static_cast<double>(n_levels);
        const double pay = payoff_vs_rule(oracle, opponent, p, level, x);
        if (pay > best) {
            best = pay;
            best_level = level;
        }
    }

    EvalReport r;
    r.check = "best-response player " + std::to_string(player) + " " + label(profile);
    r.target_source = "equilibrium value";
    r.target = value;
    r.estimate = best;
    r.tolerance = kRelTol * std::max(std::abs(value), 1e-300);
    r.pass = std::abs(best - value) <= r.tolerance;
    r.detail = std::to_string(n_levels) + " levels on [x, " + fmt_short(hi) +
               "] plus immediate stop; best at L=" + fmt_short(best_level);
    r.runtime_ms = elapsed_ms(start);
    return r;
}

EvalReport indifference_check(const ValueOracle& oracle, const EquilibriumProfile& profile,
                              int player, std::size_t n_grid) {
    const auto start = Clock::now();
    if (profile.kind != ProfileKind::reflection) {
        throw Error(Errc::wrong_region, "indifference only holds for reflection profiles");
    }
    if (n_grid < 1) throw Error(Errc::invalid_grid, "u-grid is empty");
    const double value = profile.value(player);
    double worst = 0.0;
    double worst_pay = value;
    double worst_u = 0.0;
    for (std::size_t k = 0; k < n_grid; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(n_grid);
        const double level = trigger_level(oracle, profile.rule(player), u, profile.x);
        const double pay = payoff_vs_rule(oracle, profile.opponent_rule(player),
                                          profile.prior(player), level, profile.x);
        const double dev = std::abs(pay - value);
        if (dev > worst) {
            worst = dev;
            worst_pay = pay;
            worst_u = u;
        }
    }
    EvalReport r;
    r.check = "indifference player " + std::to_string(player) + " " + label(profile);
    r.target_source = "equilibrium value";
    r.target = value;
    r.estimate = worst_pay;
    r.tolerance = kRelTol * value;
    r.pass = worst <= r.tolerance;
    r.detail = std::to_string(n_grid) + "-point u-grid; largest gap at u=" + fmt_short(worst_u);
    r.runtime_ms = elapsed_ms(start);
    return r;
}

std::vector<EvalReport> identity_suite(const ValueOracle& oracle,
                                       const EquilibriumProfile& profile,
                                       const IdentityOptions& options) {
    if (profile.kind != ProfileKind::reflection) {
        throw Error(Errc::wrong_region, "belief identities need a reflection profile");
    }
    if (oracle.kind() != ValueOracle::Kind::closed_form_gbm) {
        throw Error(Errc::non_gbm_oracle, "identity paths are simulated under the GBM model");
    }
    if (options.n_paths < 1 || !(options.dt > 0.0) || !(options.horizon > 0.0)) {
        throw Error(Errc::invalid_config, "identity suite needs paths, dt > 0 and a horizon");
    }
    const std::string tag = label(profile);
    const double p1 = profile.p1;
    std::vector<EvalReport> out;

    auto start = Clock::now();
    {
        EvalReport r;
        r.check = "jump identity (1-p1 G0)(1-q1)=1-p1 " + tag;
        r.target_source = "identity";
        r.target = 1.0 - p1;
        r.estimate = (1.0 - p1 * profile.gamma0_star) * (1.0 - profile.q1);
        r.tolerance = 1e-12;
        r.pass = std::abs(r.estimate - r.target) <= r.tolerance;
        r.detail = "G0=" + fmt_short(profile.gamma0_star) + " q1=" + fmt_short(profile.q1);
        r.runtime_ms = elapsed_ms(start);
        out.push_back(r);
    }
    if (profile.region == Region::action_prime) {
        start = Clock::now();
        EvalReport r;
        r.check = "atom value (1-p1)V=g(1-p1 G0/2) " + tag;
        r.target_source = "closed form";
        r.target = (1.0 - p1) * oracle.value(profile.x);
        r.estimate = oracle.payoff(profile.x) * (1.0 - 0.5 * p1 * profile.gamma0_star);
        r.tolerance = 1e-12;
        r.pass = std::abs(r.estimate - r.target) <= r.tolerance;
        r.runtime_ms = elapsed_ms(start);
        out.push_back(r);
    }

    start = Clock::now();
    std::vector<PathViolations> paths(options.n_paths);
    kernels::map_indexed_omp<PathViolations>(
        0, paths, [&](std::uint64_t id) { return check_path(oracle, profile, options, id); });
    PathViolations worst;
    std::uint64_t reached = 0;
    for (const auto& v : paths) {
        worst.pi_vs_z = std::max(worst.pi_vs_z, v.pi_vs_z);
        worst.alg = std::max(worst.alg, v.alg);
        worst.relation = std::max(worst.relation, v.relation);
        worst.gap_drop = std::max(worst.gap_drop, v.gap_drop);
        worst.belief_rise = std::max(worst.belief_rise, v.belief_rise);
        reached += v.reached_stop ? 1 : 0;
    }
    const std::string sampled = std::to_string(options.n_paths) + " paths, dt=" +
                                fmt_short(options.dt) + ", " + std::to_string(reached) +
                                " reached the stop region";
    out.push_back(bound_report("belief equals reflected level Pi1=Z " + tag, worst.pi_vs_z, 1e-12,
                               sampled, start));
    out.push_back(bound_report("belief identity (1-pi)=(1-pi G)(1-Pi) " + tag, worst.alg, 1e-12,
                               sampled, start));
    out.push_back(bound_report("belief relation Pi2 vs Pi1 " + tag, worst.relation, 1e-12,
                               sampled, start));
    out.push_back(bound_report("belief gap Pi2-Pi1 nondecreasing " + tag, worst.gap_drop, 1e-12,
                               sampled, start));
    out.push_back(bound_report("beliefs nonincreasing " + tag, worst.belief_rise, 1e-12, sampled,
                               start));

    SimConfig sim;
    sim.n_paths = options.n_gating;
    sim.seed = options.seed;
    sim.mode = SimMode::semi_analytic;
    start = Clock::now();
    const auto outcomes = simulate_outcomes(oracle, profile, sim);
    for (int player = 1; player <= 2; ++player) {
        const double p_other = profile.prior(3 - player);
        std::vector<double> diff(outcomes.size());
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            const auto& o = outcomes[i];
            const double r = player == 1 ? o.r1 : o.r2;
            const bool theta_other = player == 1 ? o.theta2 : o.theta1;
            diff[i] = (theta_other ? r : 0.0) - p_other * r;
        }
        const Estimate est = summarize(diff);
        EvalReport r;
        r.check = "gated payoff scaling player " + std::to_string(player) + " " + tag;
        r.target_source = "identity";
        r.target = 0.0;
        r.estimate = est.mean;
        r.std_error = est.std_error;
        r.tolerance = 3.0 * est.std_error;
        r.pass = std::abs(est.mean) <= r.tolerance;
        r.detail = "mean of gated minus p" + std::to_string(3 - player) +
                   " times ungated payoff over " + std::to_string(sim.n_paths) + " outcomes";
        r.runtime_ms = elapsed_ms(start);
        out.push_back(r);
    }
    return out;
}

EvalReport safety_dominance(const ValueOracle& oracle, const std::vector<SafetyPoint>& grid) {
    const auto start = Clock::now();
    double worst = std::numeric_limits<double>::infinity();
    std::string worst_at;
    std::size_t checked = 0, skipped = 0, strict = 0;
    for (const auto& pt : grid) {
        EquilibriumProfile profile;
        try {
            profile = build_profile(oracle, pt.p1, pt.p2, pt.x);
        } catch (const Error& e) {
            if (e.code() != Errc::no_equilibrium) throw;
            ++skipped;
            continue;
        }
        ++checked;
        for (int i = 1; i <= 2; ++i) {
            const double floor = safety_level(oracle, {profile.prior(i), pt.x});
            const double margin = profile.value(i) - floor;
            if (margin < worst) {
                worst = margin;
                worst_at = label(profile) + " player " + std::to_string(i);
            }
            if (i == 2 && profile.kind == ProfileKind::reflection && profile.p2 > profile.p1 &&
                margin > 0.0) {
                ++strict;
            }
        }
    }
    EvalReport r;
    r.check = "safety-level dominance";
    r.target_source = "bound";
    r.target = 0.0;
    r.estimate = checked ? worst : 0.0;
    r.tolerance = 1e-12;
    r.pass = checked > 0 && worst >= -r.tolerance;
    r.detail = std::to_string(checked) + " points (" + std::to_string(skipped) +
               " without equilibrium skipped); smallest margin at " + worst_at + "; " +
               std::to_string(strict) + " strict margins for the more confident player";
    r.runtime_ms = elapsed_ms(start);
    return r;
}

std::vector<SafetyPoint> default_safety_grid() {
    const double priors[] = {0.0, 0.05, 0.15, 0.25, 0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95, 1.0};
    const double states[] = {0.8, 1.1, 1.3, 1.5, 1.7, 1.9, 2.2};
    std::vector<SafetyPoint> grid;
    for (double p1 : priors) {
        for (double p2 : priors) {
            if (p2 < p1) continue;
            for (double x : states) grid.push_back({p1, p2, x});
        }
    }
    return grid;
}

std::vector<EvalReport> run_suite(const std::string& suite, const SuiteConfig& config) {
    const bool all = suite == "all";
    if (!all && suite != "br" && suite != "indiff" && suite != "ids" && suite != "safety") {
        throw Error(Errc::invalid_config, "unknown suite '" + suite + "'");
    }
    const GbmModel model(config.mu, config.sigma, config.rate, config.strike);
    const ValueOracle oracle = ValueOracle::closed_form(model);
    const double x = config.x;

    const EquilibriumProfile standard = build_profile(oracle, config.p1, config.p2, x);
    std::vector<EquilibriumProfile> reflection = {standard,
                                                  build_profile(oracle, 0.10, 0.10, x),
                                                  build_profile(oracle, 0.15, 0.30, x)};
    std::erase_if(reflection,
                  [](const EquilibriumProfile& p) { return p.kind != ProfileKind::reflection; });

    std::vector<EvalReport> out;
    if (all || suite == "br") {
        std::vector<EquilibriumProfile> profiles = {standard,
                                                    build_profile(oracle, 0.10, 0.10, x),
                                                    build_profile(oracle, 0.15, 0.30, x),
                                                    build_profile(oracle, 0.25, 0.50, x),
                                                    build_profile(oracle, 1.0, 1.0, x),
                                                    build_profile(oracle, 0.0, 0.0, x)};
        for (const auto& profile : profiles) {
            for (int player = 1; player <= 2; ++player) {
                out.push_back(best_response_sweep(oracle, profile, player));
            }
        }
    }
    if (all || suite == "indiff") {
        for (const auto& profile : reflection) {
            for (int player = 1; player <= 2; ++player) {
                out.push_back(indifference_check(oracle, profile, player));
            }
        }
    }
    if (all || suite == "ids") {
        IdentityOptions options;
        options.n_paths = config.n_paths;
        options.seed = config.seed;
        for (const auto& profile : reflection) {
            auto reports = identity_suite(oracle, profile, options);
            out.insert(out.end(), reports.begin(), reports.end());
        }
    }
    if (all || suite == "safety") {
        out.push_back(safety_dominance(oracle, default_safety_grid()));
    }
    return out;
}

bool all_pass(const std::vector<EvalReport>& reports) {
    return std::all_of(reports.begin(), reports.end(), [](const EvalReport& r) { return r.pass; });
}

void print_report_table(std::ostream& os, const std::vector<EvalReport>& reports) {
    char line[256];
    std::snprintf(line, sizeof line, "%-58s %12s %12s %10s %6s %9s\n", "check", "target",
                  "estimate", "tolerance", "result", "ms");
    os << line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%-58.58s %12s %12s %10s %6s %9.1f\n", r.check.c_str(),
                      fmt_short(r.target).c_str(), fmt_short(r.estimate).c_str(),
                      fmt_short(r.tolerance).c_str(), r.pass ? "pass" : "FAIL", r.runtime_ms);
        os << line;
    }
    std::size_t passed = 0;
    for (const auto& r : reports) passed += r.pass ? 1 : 0;
    os << passed << "/" << reports.size() << " checks passed\n";
}

}  // namespace dynkin
