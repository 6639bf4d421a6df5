// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "dynkin/cli.hpp"
#include "dynkin/engine.hpp"
#include "dynkin/error.hpp"
#include "dynkin/regions.hpp"
#include "dynkin/verify.hpp"

using namespace dynkin;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const ValueOracle& standard() {
    static const ValueOracle o = ValueOracle::closed_form(GbmModel(0.0, 0.2, 0.04, 1.0));
    return o;
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr, std::string* err = nullptr) {
    args.insert(args.begin(), "dynkin");
    std::ostringstream o, e;
    const int code = cli::run(args, o, e);
    if (out) *out = o.str();
    if (err) *err = e.str();
    return code;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict boundary_curves() {
    const auto t0 = std::chrono::steady_clock::now();
    std::string csv;
    const int code = run_cli({"boundaries", "--mu", "0", "--sigma", "0.2", "--r", "0.04", "--K",
                              "1", "--xmin", "0.5", "--xmax", "2.5", "--n", "2001"},
                             &csv);
    if (code != 0) return {false, "boundaries exited with " + std::to_string(code)};
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    if (line != "x,b,c") return {false, "unexpected header '" + line + "'"};
    double worst = 0.0;
    int rows = 0;
    bool ends_ok = true;
    while (std::getline(in, line)) {
        double x, b, c;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &b, &c) != 3) return {false, "bad row"};
        ++rows;
        if (x <= 1.0) {
            ends_ok = ends_ok && b == 1.0 && c == 1.0;
        } else if (x >= 2.0) {
            ends_ok = ends_ok && b == 0.0 && c == 0.0;
        } else {
            const double bx = 1.0 - (x - 1.0) * (2.0 / x) * (2.0 / x);
            const double cx = 1.0 - (x - 1.0) / (2.0 * (x / 2.0) * (x / 2.0) - x + 1.0);
            worst = std::max({worst, std::abs(b - bx), std::abs(c - cx)});
        }
    }
    const double secs = seconds_since(t0);
    const bool pass = rows == 2001 && ends_ok && worst <= 1e-10 && secs < 1.0;
    return {pass, "max abs error " + num(worst) + " on (1,2), plateaus exact: " +
                      (ends_ok ? "yes" : "no") + ", " + num(secs) + " s"};
}

Verdict solver_vs_closed_form() {
    const auto t0 = std::chrono::steady_clock::now();
    const GbmModel model(0.0, 0.2, 0.04, 1.0);
    const auto sol = solve_value_chain(DiffusionSpec::gbm(model, 0.05, 20.0),
                                       [](double x) { return std::max(x - 1.0, 0.0); });
    double worst = 0.0;
    for (int i = 0; i <= 4500; ++i) {
        const double x = 0.5 + 0.001 * i;
        worst = std::max(worst, std::abs(sol.oracle.value(x) - model.value(x)) / model.value(x));
    }
    const double secs = seconds_since(t0);
    return {worst <= 5e-3 && secs < 30.0,
            "max relative error " + num(worst) + " on [0.5,5] after " +
                std::to_string(sol.sweeps) + " sweeps, " + num(secs) + " s"};
}

Verdict action_region_value() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto profile = build_profile(standard(), 0.15, 0.15, 1.5);
    const double target = 0.478125;
    const double quad = integrate_over_levels(standard(), profile, 1);
    const double quad_err = std::abs(quad - target) / target;
    SimConfig config;
    config.n_paths = 1000000;
    config.mode = SimMode::path;
    const Estimate est = estimate_value(standard(), profile, 1, config);
    const double z = std::abs(est.mean - target) / est.std_error;
    const double secs = seconds_since(t0);
    return {quad_err <= 1e-9 && z <= 3.0 && secs < 60.0,
            "quadrature rel error " + num(quad_err) + "; path MC " + num(est.mean) + " +- " +
                num(est.std_error) + " (" + num(z) + " se), " + num(secs) + " s"};
}

Verdict indifference() {
    bool pass = true;
    std::string detail;
    for (double p1 : {0.10, 0.15}) {
        const auto profile = build_profile(standard(), p1, p1, 1.5);
        for (int player : {1, 2}) {
            const auto r = indifference_check(standard(), profile, player, 101);
            pass = pass && r.pass;
            detail += to_string(profile.region);
            detail += " player " + std::to_string(player) + ": " + (r.pass ? "flat" : "NOT flat") +
                      "; ";
        }
    }
    return {pass, detail};
}

Verdict best_response() {
    const auto profile = build_profile(standard(), 0.15, 0.15, 1.5);
    bool pass = true;
    for (int player : {1, 2}) pass = pass && best_response_sweep(standard(), profile, player, 200).pass;
    const double off = payoff_vs_rule(standard(), profile.rule2, 0.15, 1.55, 1.5);
    const double gap = profile.value1 - off;
    const double plateau = b_inverse(standard(), profile.q1);
    bool increasing = true;
    double prev = -1.0;
    for (int k = 1; k < 200; ++k) {
        const double level = 1.5 + (plateau - 1.5) * k / 200.0;
        const double v = payoff_vs_rule(standard(), profile.rule2, 0.15, level, 1.5);
        increasing = increasing && v > prev;
        prev = v;
    }
    return {pass && gap >= 1e-3 && increasing,
            "sweep " + std::string(pass ? "passes" : "fails") + "; L=1.55 gives " + num(off) +
                ", gap " + num(gap) + "; strictly increasing below " + num(plateau) + ": " +
                (increasing ? "yes" : "no")};
}

Verdict stop_region_values() {
    const auto profile = build_profile(standard(), 0.25, 0.5, 1.5);
    const bool exact = profile.value1 == 0.4375 && profile.value2 == 0.375;
    bool pass = exact;
    for (int player : {1, 2}) pass = pass && best_response_sweep(standard(), profile, player).pass;
    return {pass, "values (" + num(profile.value1) + ", " + num(profile.value2) +
                      "), no improving threshold deviation: " + (pass ? "yes" : "no")};
}

Verdict jump_interiority() {
    int points = 0;
    bool pass = true;
    double worst_identity = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double x = 1.0 + (i + 0.5) / 50.0;
        const double b = boundary_b(standard(), x);
        const double c = boundary_c(standard(), x);
        for (int j = 0; j < 50; ++j) {
            const double p1 = b + (c - b) * (j + 0.5) / 50.0;
            if (classify(standard(), {p1, x}) != Region::action_prime) continue;
            ++points;
            const auto jump = initial_jump(standard(), p1, x);
            pass = pass && jump.gamma0_star >= 0.0 && jump.gamma0_star < 1.0 && jump.q1 > 0.0 &&
                   jump.q1 < b;
            worst_identity = std::max(
                worst_identity, std::abs((1.0 - p1 * jump.gamma0_star) * (1.0 - jump.q1) - (1.0 - p1)));
        }
    }
    pass = pass && points == 2500 && worst_identity <= 1e-12;
    return {pass, std::to_string(points) + " points in the action region; identity error " +
                      num(worst_identity)};
}

Verdict identities() {
    IdentityOptions options;
    options.n_paths = 1000;
    options.seed = 42;
    int checks = 0, failed = 0;
    std::string first_failure;
    for (auto [p1, p2] : {std::pair{0.15, 0.15}, {0.15, 0.3}}) {
        const auto profile = build_profile(standard(), p1, p2, 1.5);
        for (const auto& r : identity_suite(standard(), profile, options)) {
            ++checks;
            if (!r.pass) {
                ++failed;
                if (first_failure.empty()) first_failure = r.check;
            }
        }
    }
    return {failed == 0, std::to_string(checks - failed) + "/" + std::to_string(checks) +
                             " identity checks over 1000 paths" +
                             (first_failure.empty() ? "" : "; first failure: " + first_failure)};
}

Verdict edge_cases() {
    const double g = 0.5, v = 0.5625;
    const auto certain = build_profile(standard(), 1.0, 1.0, 1.5);
    const auto none = build_profile(standard(), 0.0, 0.0, 1.5);
    SimConfig config;
    config.n_paths = 1000;
    const double certain_mc = estimate_value(standard(), certain, 1, config).mean;
    const double none_quad = integrate_over_levels(standard(), none, 1);
    const bool values = certain.value1 == g / 2 && certain.value2 == g / 2 && certain_mc == g / 2 &&
                        std::abs(none.value1 - v) <= 1e-15 && std::abs(none_quad - v) <= 1e-12;
    std::string err;
    const int code = run_cli({"equilibrium", "--p1", "0", "--p2", "0.3", "--x", "1.5"}, nullptr, &err);
    return {values && code == cli::kNoEquilibrium,
            "certain competition " + num(certain.value1) + ", no competition " + num(none.value1) +
                ", p1=0<p2 exit code " + std::to_string(code)};
}

Verdict determinism() {
    namespace fs = std::filesystem;
    const fs::path a = fs::temp_directory_path() / "dynkin_acceptance_report_a.json";
    const fs::path b = fs::temp_directory_path() / "dynkin_acceptance_report_b.json";
    std::string table;
    const int ca = run_cli({"verify", "--suite", "all", "--seed", "42", "--out", a.string()}, &table);
    const int cb = run_cli({"verify", "--suite", "all", "--seed", "42", "--out", b.string()});
    const std::string ra = slurp(a), rb = slurp(b);
    fs::remove(a);
    fs::remove(b);
    const bool same = !ra.empty() && ra == rb;
    return {ca == 0 && cb == 0 && same, "exit codes " + std::to_string(ca) + "/" +
                                            std::to_string(cb) + ", reports " +
                                            (same ? "byte-identical" : "differ") + " (" +
                                            std::to_string(ra.size()) + " bytes)"};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
        {"boundary curves for eta=2", boundary_curves},
        {"generic solver vs closed form", solver_vs_closed_form},
        {"equilibrium value in the action region", action_region_value},
        {"indifference on the support", indifference},
        {"best-response dominance", best_response},
        {"stop-region values", stop_region_values},
        {"jump interiority", jump_interiority},
        {"belief identity suite", identities},
        {"edge cases", edge_cases},
        {"determinism of verify reports", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failed;
        std::printf("criterion %2zu %s  %s: %s [%.2f s]\n", i + 1, v.pass ? "PASS" : "FAIL",
                    criteria[i].first, v.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
