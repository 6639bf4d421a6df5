#include "dynkin/stopping.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "dynkin/error.hpp"
#include "dynkin/kernels.hpp"
#include "format.hpp"

namespace dynkin {

DiffusionSpec DiffusionSpec::gbm(const GbmModel& model, double lower, double upper) {
    const double mu = model.mu();
    const double sigma = model.sigma();
    return DiffusionSpec{
        [mu](double x) { return mu * x; },
        [sigma](double x) { return sigma * x; },
        lower,
        upper,
        model.rate(),
    };
}

namespace {

std::vector<double> log_grid(double lower, double upper, std::size_t n) {
    std::vector<double> xs(n);
    const double a = std::log(lower);
    const double h = (std::log(upper) - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) xs[i] = std::exp(a + h * static_cast<double>(i));
    xs.front() = lower;
    xs.back() = upper;
    return xs;
}

bool at_stop(double v, double g, double tol) { return v - g <= tol * std::max(1.0, v); }

}  // namespace

ValueOracle ValueOracle::closed_form(const GbmModel& model, double lower, double upper,
                                     std::size_t nodes) {
    if (!(lower > 0.0) || !(upper > lower) || nodes < 2) {
        throw Error(Errc::invalid_grid, "closed-form tabulation needs 0 < lower < upper, n >= 2");
    }
    ValueOracle o;
    o.kind_ = Kind::closed_form_gbm;
    o.model_ = model;
    o.nodes_ = log_grid(lower, upper, nodes);
    o.values_.reserve(nodes);
    o.payoffs_.reserve(nodes);
    for (double x : o.nodes_) {
        o.values_.push_back(model.value(x));
        o.payoffs_.push_back(model.payoff(x));
    }
    return o;
}

ValueOracle ValueOracle::tabulated(std::vector<double> nodes, std::vector<double> values,
                                   std::vector<double> payoffs) {
    const std::size_t n = nodes.size();
    if (n < 2 || values.size() != n || payoffs.size() != n) {
        throw Error(Errc::invalid_grid, "tabulated oracle needs >= 2 nodes and matching columns");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(nodes[i]) || !std::isfinite(values[i]) || !std::isfinite(payoffs[i])) {
            throw Error(Errc::invalid_grid, "non-finite entry at row " + std::to_string(i));
        }
        if (i > 0 && !(nodes[i] > nodes[i - 1])) {
            throw Error(Errc::invalid_grid, "nodes must be strictly increasing");
        }
        if (payoffs[i] < 0.0 || values[i] < payoffs[i] - 1e-12 * std::max(1.0, payoffs[i])) {
            throw Error(Errc::corrupt_oracle, "need V >= g >= 0 at row " + std::to_string(i));
        }
    }
    ValueOracle o;
    o.kind_ = Kind::tabulated;
    o.nodes_ = std::move(nodes);
    o.values_ = std::move(values);
    o.payoffs_ = std::move(payoffs);
    return o;
}

double ValueOracle::interpolate(const std::vector<double>& ys, double x) const {
    const double lo = nodes_.front();
    const double hi = nodes_.back();
    const double slack = 1e-12 * std::max(1.0, std::abs(hi));
    if (!(x >= lo - slack && x <= hi + slack)) {
        std::ostringstream os;
        os << "x=" << x << " outside tabulated range [" << lo << ", " << hi << "]";
        throw Error(Errc::out_of_domain, os.str());
    }
    if (x <= lo) return ys.front();
    if (x >= hi) return ys.back();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
    const auto j = static_cast<std::size_t>(it - nodes_.begin());
    const std::size_t i = j - 1;
    const double w = (x - nodes_[i]) / (nodes_[j] - nodes_[i]);
    return ys[i] + w * (ys[j] - ys[i]);
}

double ValueOracle::value(double x) const {
    if (model_) return model_->value(x);
    return interpolate(values_, x);
}

double ValueOracle::payoff(double x) const {
    if (model_) return model_->payoff(x);
    return interpolate(payoffs_, x);
}

double ValueOracle::stop_threshold() const {
    if (model_) return model_->threshold();
    std::size_t i = nodes_.size();
    while (i > 0 && at_stop(values_[i - 1], payoffs_[i - 1], 1e-9)) --i;
    if (i == nodes_.size()) return std::numeric_limits<double>::infinity();
    return nodes_[i];
}

ChainSolution solve_value_chain(const DiffusionSpec& spec, const PayoffFn& payoff,
                                const ChainOptions& options) {
    const std::size_t n = options.nodes;
    if (n < 3) throw Error(Errc::invalid_grid, "need at least 3 nodes");
    if (!(spec.lower > 0.0) || !(spec.upper > spec.lower) || !std::isfinite(spec.upper)) {
        throw Error(Errc::invalid_grid, "need 0 < lower < upper < inf for a log grid");
    }
    if (!(options.courant > 0.0 && options.courant <= 1.0) || !(options.tolerance > 0.0)) {
        throw Error(Errc::invalid_grid, "courant must be in (0,1] and tolerance > 0");
    }
    if (!(spec.rate >= 0.0)) throw Error(Errc::invalid_argument, "discount rate must be >= 0");

    const std::vector<double> xs = log_grid(spec.lower, spec.upper, n);
    const double h = (std::log(spec.upper) - std::log(spec.lower)) / static_cast<double>(n - 1);

    // Moments of d(log X) per unit time at each node.
    std::vector<double> mean(n), var(n);
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = xs[i];
        const double s = spec.diffusion(x);
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw Error(Errc::invalid_grid,
                        "diffusion coefficient must be positive at x=" + fmt_full(x));
        }
        mean[i] = spec.drift(x) / x - 0.5 * s * s / (x * x);
        var[i] = s * s / (x * x);
        const double m2 = mean[i] * mean[i];
        // Largest dt keeping the middle probability nonnegative.
        const double stable = m2 > 0.0
                                  ? (-var[i] + std::sqrt(var[i] * var[i] + 4.0 * m2 * h * h)) /
                                        (2.0 * m2)
                                  : h * h / var[i];
        dt = std::min(dt, stable);
    }
    dt *= options.courant;

    kernels::TrinomialChain chain;
    chain.up.resize(n);
    chain.mid.resize(n);
    chain.down.resize(n);
    chain.discount = std::exp(-spec.rate * dt);
    chain.reflecting = options.boundary == BoundaryRule::reflecting;
    for (std::size_t i = 0; i < n; ++i) {
        const double second = (var[i] * dt + mean[i] * mean[i] * dt * dt) / (2.0 * h * h);
        const double first = mean[i] * dt / (2.0 * h);
        chain.up[i] = second + first;
        chain.down[i] = second - first;
        chain.mid[i] = 1.0 - chain.up[i] - chain.down[i];
        if (chain.up[i] < 0.0 || chain.down[i] < 0.0 || chain.mid[i] < -1e-14) {
            throw Error(Errc::invalid_grid,
                        "negative transition probability; refine the grid (drift dominates at x=" +
                            fmt_full(xs[i]) + ")");
        }
        chain.mid[i] = std::max(chain.mid[i], 0.0);
    }

    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = payoff(xs[i]);
        if (!(g[i] >= 0.0) || !std::isfinite(g[i])) {
            throw Error(Errc::invalid_argument, "payoff must be finite and >= 0");
        }
    }

    std::vector<double> current = g;
    std::vector<double> next(n);
    std::size_t sweeps = 0;
    double change = std::numeric_limits<double>::infinity();
    while (sweeps < options.max_sweeps) {
        change = kernels::bellman_sweep_omp(chain, g, current, next);
        current.swap(next);
        ++sweeps;
        if (change < options.tolerance) break;
    }
    if (!(change < options.tolerance)) {
        throw Error(Errc::non_convergence, "value iteration stopped after " +
                                               std::to_string(sweeps) +
                                               " sweeps, residual " + fmt_full(change));
    }
    const double residual = kernels::bellman_sweep_omp(chain, g, current, next);

    return ChainSolution{ValueOracle::tabulated(xs, std::move(current), std::move(g)), sweeps,
                         residual, dt};
}

std::vector<std::size_t> stop_region(const ValueOracle& oracle, double tol) {
    std::vector<std::size_t> out;
    const auto& v = oracle.values();
    const auto& g = oracle.payoffs();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (at_stop(v[i], g[i], tol)) out.push_back(i);
    }
    return out;
}

void write_oracle_csv(std::ostream& os, const ValueOracle& oracle) {
    os << "x,V,g\n";
    for (std::size_t i = 0; i < oracle.nodes().size(); ++i) {
        os << fmt_full(oracle.nodes()[i]) << ',' << fmt_full(oracle.values()[i]) << ','
           << fmt_full(oracle.payoffs()[i]) << '\n';
    }
}

ValueOracle read_oracle_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error(Errc::io, "empty oracle CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,V,g") throw Error(Errc::io, "oracle CSV header must be x,V,g");
    std::vector<double> xs, vs, gs;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c)) {
            throw Error(Errc::io, "malformed oracle CSV row " + std::to_string(row));
        }
        try {
            xs.push_back(std::stod(a));
            vs.push_back(std::stod(b));
            gs.push_back(std::stod(c));
        } catch (const std::exception&) {
            throw Error(Errc::io, "non-numeric oracle CSV row " + std::to_string(row));
        }
    }
    return ValueOracle::tabulated(std::move(xs), std::move(vs), std::move(gs));
}

}  // namespace dynkin
