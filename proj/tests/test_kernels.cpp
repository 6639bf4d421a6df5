#include <gtest/gtest.h>

#include <omp.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dynkin/engine.hpp"
#include "dynkin/kernels.hpp"

using namespace dynkin;

namespace {

kernels::TrinomialChain random_chain(std::size_t n, bool reflecting) {
    kernels::TrinomialChain c;
    c.up.resize(n);
    c.mid.resize(n);
    c.down.resize(n);
    PathStream rng(5, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = rng.uniform(), b = rng.uniform(), d = rng.uniform();
        c.up[i] = a / (a + b + d);
        c.mid[i] = b / (a + b + d);
        c.down[i] = 1.0 - c.up[i] - c.mid[i];
    }
    c.discount = 0.97;
    c.reflecting = reflecting;
    return c;
}

class Threads : public ::testing::Test {
protected:
    void SetUp() override {
        saved_ = omp_get_max_threads();
        omp_set_num_threads(4);
    }
    void TearDown() override { omp_set_num_threads(saved_); }

private:
    int saved_ = 1;
};

}  // namespace

TEST_F(Threads, BellmanSweepSerialAndParallelAgreeBitForBit) {
    for (bool reflecting : {false, true}) {
        const std::size_t n = 20001;
        const auto chain = random_chain(n, reflecting);
        std::vector<double> g(n), v(n), a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            g[i] = std::max(0.0, std::sin(0.001 * static_cast<double>(i)));
            v[i] = g[i] + 0.1;
        }
        for (int sweep = 0; sweep < 5; ++sweep) {
            const double ca = kernels::bellman_sweep_serial(chain, g, v, a);
            const double cb = kernels::bellman_sweep_omp(chain, g, v, b);
            ASSERT_EQ(ca, cb);
            ASSERT_EQ(a, b);
            v = a;
        }
    }
}

TEST_F(Threads, SimulatedOutcomesDoNotDependOnThreads) {
    const GbmModel model(0.0, 0.2, 0.04, 1.0);
    const auto oracle = ValueOracle::closed_form(model);
    const auto profile = build_profile(oracle, 0.15, 0.3, 1.5);
    for (SimMode mode : {SimMode::semi_analytic, SimMode::path, SimMode::stepped}) {
        SimConfig config;
        config.n_paths = mode == SimMode::stepped ? 300 : 5000;
        config.mode = mode;
        config.t_max = 30.0;
        const auto serial = simulate_outcomes_serial(oracle, profile, config);
        const auto parallel = simulate_outcomes(oracle, profile, config);
        ASSERT_EQ(serial.size(), parallel.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            ASSERT_EQ(serial[i].r1, parallel[i].r1) << to_string(mode) << " path " << i;
            ASSERT_EQ(serial[i].r2, parallel[i].r2);
            ASSERT_EQ(serial[i].t_or_level, parallel[i].t_or_level);
            ASSERT_EQ(serial[i].stopper, parallel[i].stopper);
        }
    }
}

TEST(Kernels, PairwiseSumIsAccurate) {
    std::vector<double> xs(100000, 0.1);
    EXPECT_NEAR(kernels::pairwise_sum(xs), 10000.0, 1e-9);
    std::vector<double> small(7);
    std::iota(small.begin(), small.end(), 1.0);
    EXPECT_EQ(kernels::pairwise_sum(small), 28.0);
    EXPECT_EQ(kernels::pairwise_sum({}), 0.0);
}

TEST(Kernels, MapIndexedFillsByIndex) {
    std::vector<std::uint64_t> a(3000), b(3000);
    const kernels::IndexedFn<std::uint64_t> f = [](std::uint64_t i) { return i * i; };
    kernels::map_indexed_serial<std::uint64_t>(10, a, f);
    kernels::map_indexed_omp<std::uint64_t>(10, b, f);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a[0], 100u);
}

// Brute-force optimal stopping on a 5-state chain: enumerate every stopping
// set, solve the linear system for its value and take the pointwise maximum.
TEST(Kernels, ValueIterationMatchesPolicyEnumeration) {
    const std::size_t n = 5;
    auto chain = random_chain(n, true);
    chain.discount = 0.9;
    const std::vector<double> g = {0.3, 0.0, 0.8, 0.1, 0.5};

    std::vector<double> best(n, 0.0);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        // Rows: v_i = g_i on the stop set, v_i - discount * P_i v = 0 elsewhere.
        double m[5][6] = {};
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                m[i][i] = 1.0;
                m[i][n] = g[i];
                continue;
            }
            const std::size_t left = i == 0 ? 1 : i - 1;
            const std::size_t right = i + 1 == n ? n - 2 : i + 1;
            m[i][i] += 1.0 - chain.discount * chain.mid[i];
            m[i][left] -= chain.discount * chain.down[i];
            m[i][right] -= chain.discount * chain.up[i];
        }
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < n; ++r) {
                if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
            }
            for (std::size_t k = 0; k <= n; ++k) std::swap(m[c][k], m[piv][k]);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == c) continue;
                const double f = m[r][c] / m[c][c];
                for (std::size_t k = 0; k <= n; ++k) m[r][k] -= f * m[c][k];
            }
        }
        for (std::size_t i = 0; i < n; ++i) best[i] = std::max(best[i], m[i][n] / m[i][i]);
    }

    std::vector<double> v = g, next(n);
    for (int sweep = 0; sweep < 2000; ++sweep) {
        kernels::bellman_sweep_serial(chain, g, v, next);
        v.swap(next);
    }
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(v[i], best[i], 1e-12) << "node " << i;
}
