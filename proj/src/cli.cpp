#include "dynkin/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "dynkin/engine.hpp"
#include "dynkin/error.hpp"
#include "dynkin/regions.hpp"
#include "dynkin/serialize.hpp"
#include "dynkin/verify.hpp"
#include "format.hpp"

namespace dynkin::cli {

namespace {

struct Options {
    double mu = 0.0;
    double sigma = 0.2;
    double r = 0.04;
    double strike = 1.0;
    std::string oracle_file;
    double p1 = 0.15;
    double p2 = 0.15;
    double x = 1.5;
    std::uint64_t seed = 42;
    std::uint64_t n_paths = 100000;
    double dt = 0.01;
    double t_max = 250.0;
    std::string mode = "semi-analytic";
    std::string out;
};

ValueOracle load_oracle(const Options& o) {
    if (!o.oracle_file.empty()) {
        std::ifstream in(o.oracle_file);
        if (!in) throw Error(Errc::io, "cannot read oracle file " + o.oracle_file);
        return read_oracle_csv(in);
    }
    return ValueOracle::closed_form(GbmModel(o.mu, o.sigma, o.r, o.strike));
}

template <class Write>
void emit(const std::string& path, std::ostream& out, Write&& write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(Errc::io, "cannot write " + path);
    write(file);
    if (!file) throw Error(Errc::io, "write to " + path + " failed");
}

int cmd_value(const Options& o, std::ostream& out) {
    const ValueOracle oracle = load_oracle(o);
    out << "V(x) = " << fmt_short(oracle.value(o.x)) << '\n';
    out << "g(x) = " << fmt_short(oracle.payoff(o.x)) << '\n';
    out << "B    = " << fmt_short(oracle.stop_threshold()) << '\n';
    if (const GbmModel* model = oracle.model()) {
        out << "eta  = " << fmt_short(model->eta()) << '\n';
    } else {
        out << "eta  = n/a (tabulated oracle)\n";
    }
    return kOk;
}

int cmd_boundaries(const Options& o, double xmin, double xmax, std::size_t n, std::ostream& out) {
    if (!(xmin > 0.0) || !(xmax > xmin) || n < 2) {
        throw Error(Errc::invalid_config, "boundaries needs 0 < xmin < xmax and n >= 2");
    }
    const ValueOracle oracle = load_oracle(o);
    emit(o.out, out, [&](std::ostream& os) {
        os << "x,b,c\n";
        for (std::size_t k = 0; k < n; ++k) {
            const double x = k + 1 == n ? xmax
                                        : xmin + (xmax - xmin) * static_cast<double>(k) /
                                                     static_cast<double>(n - 1);
            os << fmt_full(x) << ',' << fmt_full(boundary_b(oracle, x)) << ','
               << fmt_full(boundary_c(oracle, x)) << '\n';
        }
    });
    return kOk;
}

int cmd_equilibrium(const Options& o, std::ostream& out) {
    const ValueOracle oracle = load_oracle(o);
    const EquilibriumProfile profile = build_profile(oracle, o.p1, o.p2, o.x);
    emit(o.out, out, [&](std::ostream& os) { os << to_json(profile).dump(2) << '\n'; });
    return kOk;
}

int cmd_simulate(const Options& o, bool integrate_theta, const std::string& outcome_file,
                 std::ostream& out) {
    const ValueOracle oracle = load_oracle(o);
    const EquilibriumProfile profile = build_profile(oracle, o.p1, o.p2, o.x);
    SimConfig config;
    config.n_paths = o.n_paths;
    config.seed = o.seed;
    config.dt = o.dt;
    config.t_max = o.t_max;
    config.mode = sim_mode_from_string(o.mode);
    config.integrate_theta = integrate_theta;
    if (!oracle.model()) config.dynamics = GbmModel(o.mu, o.sigma, o.r, o.strike);
    const auto outcomes = simulate_outcomes(oracle, profile, config);

    Json estimates = Json::array();
    for (int caller = 1; caller <= 2; ++caller) {
        const int internal = profile.relabeled ? 3 - caller : caller;
        std::vector<double> payoffs(outcomes.size());
        for (std::size_t i = 0; i < outcomes.size(); ++i) {
            payoffs[i] = internal == 1 ? outcomes[i].r1 : outcomes[i].r2;
        }
        Estimate est = summarize(payoffs);
        est.player = caller;
        est.seed = config.seed;
        est.mode = config.mode;
        estimates.push_back(to_json(est));
    }
    emit(o.out, out, [&](std::ostream& os) { os << estimates.dump(2) << '\n'; });
    if (!outcome_file.empty()) {
        emit(outcome_file, out, [&](std::ostream& os) { write_outcome_csv(os, outcomes); });
    }
    return kOk;
}

int cmd_verify(const Options& o, const std::string& suite, std::uint64_t paths,
               std::ostream& out) {
    SuiteConfig config;
    config.mu = o.mu;
    config.sigma = o.sigma;
    config.rate = o.r;
    config.strike = o.strike;
    config.x = o.x;
    config.p1 = o.p1;
    config.p2 = o.p2;
    config.seed = o.seed;
    config.n_paths = paths;
    const auto reports = run_suite(suite, config);
    print_report_table(out, reports);
    if (!o.out.empty()) {
        emit(o.out, out, [&](std::ostream& os) { os << to_json(reports).dump(2) << '\n'; });
    }
    return all_pass(reports) ? kOk : kCheckFailed;
}

double number(const std::map<std::string, std::string>& kv, const std::string& key,
              double fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw Error(Errc::invalid_config, "spec key '" + key + "' is not a number");
    }
}

std::string text(const std::map<std::string, std::string>& kv, const std::string& key,
                 const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

int cmd_solve(const Options& o, const std::string& spec_file, std::ostream& out,
              std::ostream& err) {
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(spec_file);
    } catch (const CLI::Error& e) {
        throw Error(Errc::invalid_config, "cannot read spec file " + spec_file + ": " + e.what());
    }
    static const char* const known[] = {"process", "payoff", "mu",        "sigma",
                                        "r",       "K",      "beta",      "lower",
                                        "upper",   "nodes",  "courant",   "tolerance",
                                        "max_sweeps", "boundary"};
    std::map<std::string, std::string> kv;
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        if (std::find(std::begin(known), std::end(known), item.name) == std::end(known)) {
            throw Error(Errc::invalid_config, "unknown spec key '" + item.name + "'");
        }
        kv[item.name] = item.inputs.empty() ? "" : item.inputs.front();
    }

    const std::string process = text(kv, "process", "gbm");
    const std::string payoff_kind = text(kv, "payoff", "call");
    const double mu = number(kv, "mu", 0.0);
    const double sigma = number(kv, "sigma", 0.2);
    const double rate = number(kv, "r", 0.04);
    const double strike = number(kv, "K", 1.0);
    const double beta = number(kv, "beta", 1.0);

    DiffusionSpec spec;
    spec.lower = number(kv, "lower", 0.05);
    spec.upper = number(kv, "upper", 20.0);
    spec.rate = rate;
    if (process == "gbm") {
        spec.drift = [mu](double x) { return mu * x; };
        spec.diffusion = [sigma](double x) { return sigma * x; };
    } else if (process == "cev") {
        spec.drift = [mu](double x) { return mu * x; };
        spec.diffusion = [sigma, beta](double x) { return sigma * std::pow(x, beta); };
    } else {
        throw Error(Errc::invalid_config, "process must be gbm or cev");
    }

    PayoffFn payoff;
    if (payoff_kind == "call") {
        payoff = [strike](double x) { return std::max(x - strike, 0.0); };
    } else if (payoff_kind == "put") {
        payoff = [strike](double x) { return std::max(strike - x, 0.0); };
    } else {
        throw Error(Errc::invalid_config, "payoff must be call or put");
    }

    ChainOptions options;
    const double nodes = number(kv, "nodes", 301);
    const double sweeps = number(kv, "max_sweeps", 100000);
    if (!(nodes >= 3) || !(sweeps >= 1)) throw Error(Errc::invalid_config, "nodes >= 3 and max_sweeps >= 1");
    options.nodes = static_cast<std::size_t>(nodes);
    options.max_sweeps = static_cast<std::size_t>(sweeps);
    options.courant = number(kv, "courant", options.courant);
    options.tolerance = number(kv, "tolerance", options.tolerance);
    const std::string boundary = text(kv, "boundary", "absorbing");
    if (boundary == "absorbing") {
        options.boundary = BoundaryRule::absorbing;
    } else if (boundary == "reflecting") {
        options.boundary = BoundaryRule::reflecting;
    } else {
        throw Error(Errc::invalid_config, "boundary must be absorbing or reflecting");
    }

    const ChainSolution sol = solve_value_chain(spec, payoff, options);
    emit(o.out, out, [&](std::ostream& os) { write_oracle_csv(os, sol.oracle); });
    err << "solved in " << sol.sweeps << " sweeps, residual " << fmt_short(sol.residual)
        << ", dt " << fmt_short(sol.time_step) << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equilibria of a Dynkin game with uncertain competition"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    Options o;
    app.add_option("--mu", o.mu, "drift of the GBM")->capture_default_str();
    app.add_option("--sigma", o.sigma, "volatility")->capture_default_str();
    app.add_option("--r", o.r, "discount rate")->capture_default_str();
    app.add_option("--K", o.strike, "strike of the call payoff")->capture_default_str();
    app.add_option("--oracle", o.oracle_file, "tabulated oracle CSV (x,V,g) instead of the GBM");
    app.add_option("--p1", o.p1, "prior of player 1")->capture_default_str();
    app.add_option("--p2", o.p2, "prior of player 2")->capture_default_str();
    app.add_option("--x", o.x, "starting state")->capture_default_str();
    app.add_option("--seed", o.seed, "master seed")->capture_default_str();
    app.add_option("--n,--n_paths", o.n_paths, "simulated games")->capture_default_str();
    app.add_option("--dt", o.dt, "time step for stepped paths")->capture_default_str();
    app.add_option("--t_max", o.t_max, "simulation horizon")->capture_default_str();
    app.add_option("--mode", o.mode, "semi-analytic, path or stepped")->capture_default_str();
    app.add_option("--out", o.out, "output file (stdout when omitted)");

    auto* value = app.add_subcommand("value", "print V(x), g(x), B and eta");
    value->fallthrough();

    double xmin = 1.0, xmax = 2.0;
    std::size_t grid = 101;
    auto* boundaries = app.add_subcommand("boundaries", "CSV of x,b,c");
    boundaries->fallthrough();
    boundaries->add_option("--xmin", xmin)->capture_default_str();
    boundaries->add_option("--xmax", xmax)->capture_default_str();
    boundaries->add_option("--n", grid, "grid points")->capture_default_str();

    auto* equilibrium = app.add_subcommand("equilibrium", "equilibrium profile as JSON");
    equilibrium->fallthrough();

    bool integrate_theta = false;
    std::string outcome_file;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo value estimates as JSON");
    simulate->fallthrough();
    simulate->add_flag("--integrate-theta", integrate_theta,
                       "average over the existence draws (semi-analytic mode)");
    simulate->add_option("--outcomes", outcome_file, "CSV of individual games");

    std::string suite = "all";
    std::uint64_t paths = 1000;
    auto* verify = app.add_subcommand("verify", "run the equilibrium checks");
    verify->fallthrough();
    verify->add_option("--suite", suite, "all, br, indiff, ids or safety")->capture_default_str();
    verify->add_option("--paths", paths, "sampled paths for the identity checks")
        ->capture_default_str();

    std::string spec_file;
    auto* solve = app.add_subcommand("solve", "tabulated value oracle by value iteration");
    solve->fallthrough();
    solve->add_option("--spec", spec_file, "key=value problem file")->required();

    std::vector<std::string> argv_storage(args);
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidConfig;
    }

    try {
        if (value->parsed()) return cmd_value(o, out);
        if (boundaries->parsed()) return cmd_boundaries(o, xmin, xmax, grid, out);
        if (equilibrium->parsed()) return cmd_equilibrium(o, out);
        if (simulate->parsed()) return cmd_simulate(o, integrate_theta, outcome_file, out);
        if (verify->parsed()) return cmd_verify(o, suite, paths, out);
        if (solve->parsed()) return cmd_solve(o, spec_file, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.code() == Errc::no_equilibrium ? kNoEquilibrium : kInvalidConfig;
    }
    return kInvalidConfig;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace dynkin::cli
