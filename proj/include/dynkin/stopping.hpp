#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "dynkin/model.hpp"

namespace dynkin {

/// One-dimensional diffusion dX = drift(X) dt + diffusion(X) dW on (lower, upper),
/// killed at rate `rate`. The interval is a truncation of the natural state space;
/// the solver works on a log-uniform grid so `lower` must be positive.
struct DiffusionSpec {
    std::function<double(double)> drift;
    std::function<double(double)> diffusion;
    double lower = 0.0;
    double upper = 0.0;
    double rate = 0.0;

    static DiffusionSpec gbm(const GbmModel& model, double lower, double upper);
};

using PayoffFn = std::function<double(double)>;

enum class BoundaryRule {
    absorbing,   // truncation nodes pay g and stop
    reflecting,  // mass leaving the grid is mirrored back
};

struct ChainOptions {
    std::size_t nodes = 301;
    double courant = 0.9;  // fraction of the largest stable time step
    double tolerance = 1e-10;
    std::size_t max_sweeps = 100000;
    BoundaryRule boundary = BoundaryRule::absorbing;
};

/// Single-player value V together with the payoff g, either from the GBM
/// closed form or tabulated on an increasing node grid (linear interpolation
/// of both V and g, which keeps V >= g between nodes).
class ValueOracle {
public:
    enum class Kind { closed_form_gbm, tabulated };

    /// Closed form; the node grid is log-uniform on [lower, upper] and only
    /// used for tabulation and region scans.
    static ValueOracle closed_form(const GbmModel& model, double lower = 0.05,
                                   double upper = 20.0, std::size_t nodes = 401);

    /// Validates finite entries, increasing nodes and V >= g >= 0 at every node.
    static ValueOracle tabulated(std::vector<double> nodes, std::vector<double> values,
                                 std::vector<double> payoffs);

    Kind kind() const noexcept { return kind_; }
    const GbmModel* model() const noexcept { return model_ ? &*model_ : nullptr; }

    const std::vector<double>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<double>& payoffs() const noexcept { return payoffs_; }

    double lower() const noexcept { return nodes_.front(); }
    double upper() const noexcept { return nodes_.back(); }

    double value(double x) const;
    double payoff(double x) const;

    /// Lowest state of the one-player stopping region {V = g}: B for the
    /// closed form, the first stop node of the last stop run for tables.
    double stop_threshold() const;

private:
    ValueOracle() = default;
    double interpolate(const std::vector<double>& ys, double x) const;

    Kind kind_ = Kind::tabulated;
    std::optional<GbmModel> model_;
    std::vector<double> nodes_;
    std::vector<double> values_;
    std::vector<double> payoffs_;
};

struct ChainSolution {
    ValueOracle oracle;
    std::size_t sweeps = 0;
    double residual = 0.0;   // sup-norm Bellman residual at exit
    double time_step = 0.0;
};

/// Value iteration V <- max(g, e^{-r dt} P V) on a trinomial chain whose
/// transition probabilities match the first two moments of log X over dt.
/// Throws non_convergence (with the residual) if `max_sweeps` is hit.
ChainSolution solve_value_chain(const DiffusionSpec& spec, const PayoffFn& payoff,
                                const ChainOptions& options = {});

/// Nodes with V - g <= tol * max(1, V).
std::vector<std::size_t> stop_region(const ValueOracle& oracle, double tol = 1e-9);

void write_oracle_csv(std::ostream& os, const ValueOracle& oracle);
ValueOracle read_oracle_csv(std::istream& is);

}  // namespace dynkin
