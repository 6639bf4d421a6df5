#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "dynkin/error.hpp"
#include "dynkin/stopping.hpp"

using namespace dynkin;

namespace {

Errc code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::io;
}

PayoffFn call(double k) {
    return [k](double x) { return std::max(x - k, 0.0); };
}

}  // namespace

TEST(ValueChain, MatchesClosedFormOnDefaultGrid) {
    const GbmModel model(0.0, 0.2, 0.04, 1.0);
    const auto sol = solve_value_chain(DiffusionSpec::gbm(model, 0.05, 20.0), call(1.0));
    EXPECT_LT(sol.residual, 1e-10);
    double worst = 0.0;
    for (double x = 0.5; x <= 5.0; x += 0.005) {
        const double exact = model.value(x);
        worst = std::max(worst, std::abs(sol.oracle.value(x) - exact) / exact);
    }
    EXPECT_LT(worst, 5e-3);
    EXPECT_NEAR(sol.oracle.stop_threshold(), 2.0, 0.05);
}

TEST(ValueChain, DriftingGbmAgainstClosedForm) {
    const GbmModel model(0.02, 0.3, 0.06, 1.0);
    ChainOptions opts;
    opts.nodes = 401;
    const auto sol = solve_value_chain(DiffusionSpec::gbm(model, 0.05, 20.0), call(1.0), opts);
    for (double x : {0.8, 1.2, 2.0, 3.0}) {
        EXPECT_NEAR(sol.oracle.value(x), model.value(x), 5e-3 * model.value(x)) << x;
    }
}

// Without discounting on a reflecting chain every node is eventually visited,
// so the value is the largest payoff everywhere.
TEST(ValueChain, FiveNodeReflectingUndiscounted) {
    DiffusionSpec spec{[](double x) { return 0.05 * x; }, [](double x) { return 0.3 * x; }, 0.5,
                       2.0, 0.0};
    ChainOptions opts;
    opts.nodes = 5;
    opts.boundary = BoundaryRule::reflecting;
    opts.tolerance = 1e-13;
    opts.max_sweeps = 1000000;
    const auto sol = solve_value_chain(spec, call(1.0), opts);
    for (double v : sol.oracle.values()) EXPECT_NEAR(v, 1.0, 1e-10);
}

TEST(ValueChain, ReportsNonConvergence) {
    const GbmModel model(0.0, 0.2, 0.04, 1.0);
    ChainOptions opts;
    opts.max_sweeps = 10;
    EXPECT_EQ(code_of([&] { solve_value_chain(DiffusionSpec::gbm(model, 0.05, 20.0), call(1.0), opts); }),
              Errc::non_convergence);
}

TEST(ValueChain, RejectsBadGrids) {
    const GbmModel model(0.0, 0.2, 0.04, 1.0);
    ChainOptions opts;
    opts.nodes = 2;
    EXPECT_EQ(code_of([&] { solve_value_chain(DiffusionSpec::gbm(model, 0.05, 20.0), call(1.0), opts); }),
              Errc::invalid_grid);
    EXPECT_EQ(code_of([&] { solve_value_chain(DiffusionSpec::gbm(model, 0.0, 20.0), call(1.0)); }),
              Errc::invalid_grid);
}

TEST(ValueOracle, TabulatedInterpolatesAndValidates) {
    const auto o = ValueOracle::tabulated({1.0, 2.0, 3.0}, {1.0, 1.5, 2.0}, {0.0, 1.0, 2.0});
    EXPECT_DOUBLE_EQ(o.value(1.5), 1.25);
    EXPECT_DOUBLE_EQ(o.payoff(2.5), 1.5);
    EXPECT_DOUBLE_EQ(o.stop_threshold(), 3.0);
    EXPECT_EQ(code_of([&] { (void)o.value(3.5); }), Errc::out_of_domain);
    EXPECT_EQ(code_of([] { ValueOracle::tabulated({1.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}); }),
              Errc::invalid_grid);
    EXPECT_EQ(code_of([] { ValueOracle::tabulated({1.0, 2.0}, {1.0, 0.5}, {0.0, 1.0}); }),
              Errc::corrupt_oracle);
    EXPECT_EQ(code_of([] { ValueOracle::tabulated({1.0, 2.0}, {1.0, NAN}, {0.0, 1.0}); }),
              Errc::invalid_grid);
}

TEST(ValueOracle, NoStopRegionMeansInfiniteThreshold) {
    const auto o = ValueOracle::tabulated({1.0, 2.0}, {1.0, 2.0}, {0.0, 1.0});
    EXPECT_TRUE(std::isinf(o.stop_threshold()));
    EXPECT_TRUE(stop_region(o).empty());
}

TEST(ValueOracle, CsvRoundTripIsExact) {
    const GbmModel model(0.0, 0.2, 0.04, 1.0);
    const auto o = ValueOracle::closed_form(model, 0.1, 5.0, 50);
    std::stringstream ss;
    write_oracle_csv(ss, o);
    const auto back = read_oracle_csv(ss);
    EXPECT_EQ(back.nodes(), o.nodes());
    EXPECT_EQ(back.values(), o.values());
    EXPECT_EQ(back.payoffs(), o.payoffs());
    EXPECT_EQ(back.kind(), ValueOracle::Kind::tabulated);
}

TEST(ValueOracle, CsvRejectsBadInput) {
    std::stringstream bad_header("x,y,z\n1,1,0\n");
    EXPECT_EQ(code_of([&] { read_oracle_csv(bad_header); }), Errc::io);
    std::stringstream bad_row("x,V,g\n1,abc,0\n");
    EXPECT_EQ(code_of([&] { read_oracle_csv(bad_row); }), Errc::io);
}

TEST(ValueOracle, StopRegionOfClosedFormStartsAtThreshold) {
    const GbmModel model(0.0, 0.2, 0.04, 1.0);
    const auto o = ValueOracle::closed_form(model);
    const auto idx = stop_region(o);
    ASSERT_FALSE(idx.empty());
    EXPECT_GE(o.nodes()[idx.front()], 2.0 - 1e-9);
}
