#include <gtest/gtest.h>

#include <sstream>

#include "dynkin/belief.hpp"
#include "dynkin/error.hpp"
#include "dynkin/regions.hpp"

using namespace dynkin;

namespace {

const ValueOracle& standard() {
    static const ValueOracle o = ValueOracle::closed_form(GbmModel(0.0, 0.2, 0.04, 1.0));
    return o;
}

}  // namespace

TEST(Belief, PiAndGammaAreInverse) {
    for (double p : {0.05, 0.3, 0.9}) {
        for (double g = 0.0; g <= 1.0; g += 0.05) {
            const double pi = pi_from_gamma(p, g);
            EXPECT_LE(pi, p + 1e-15);
            EXPECT_NEAR(gamma_from_pi(p, pi), g, 1e-12);
        }
    }
    EXPECT_EQ(pi_from_gamma(1.0, 0.3), 1.0);
    EXPECT_EQ(pi_from_gamma(1.0, 1.0), 0.0);
    EXPECT_EQ(pi_from_gamma(0.4, 1.0), 0.0);
}

TEST(Belief, GammaAboveBeliefIsRejected) {
    try {
        (void)gamma_from_pi(0.2, 0.3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::belief_above_prior);
    }
}

TEST(Belief, ZIsRunningMinimumCappedAtPrior) {
    const std::vector<double> b = {0.5, 0.2, 0.3, 0.1, 0.4};
    EXPECT_EQ(z_path(0.25, b), (std::vector<double>{0.25, 0.2, 0.2, 0.1, 0.1}));
}

TEST(Belief, TriggerBelief) {
    EXPECT_NEAR(trigger_belief(1.0 / 9.0, 0.5), 1.0 / 17.0, 1e-15);
    EXPECT_EQ(trigger_belief(0.3, 0.0), 0.3);
    EXPECT_THROW((void)trigger_belief(0.3, 1.0), Error);
}

TEST(Belief, LevelTimeSetIsHalfLineAboveThreshold) {
    const auto set = level_time_set(standard(), 1.0 / 9.0, 0.5);
    ASSERT_TRUE(set.threshold.has_value());
    EXPECT_NEAR(*set.threshold, 1.609611797, 1e-9);
    EXPECT_TRUE(set.contains(standard(), 1.7));
    EXPECT_FALSE(set.contains(standard(), 1.5));
}

TEST(Belief, TraceSatisfiesPiEqualsZ) {
    const std::vector<double> t = {0, 1, 2, 3, 4};
    const std::vector<double> x = {1.5, 1.6, 1.55, 1.8, 1.4};
    const auto path = trace_beliefs(standard(), 0.1, t, x);
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_NEAR(path.pi[i], path.z[i], 1e-14);
        if (i > 0) EXPECT_LE(path.z[i], path.z[i - 1]);
    }
    EXPECT_NEAR(path.z[3], boundary_b(standard(), 1.8), 1e-15);
    EXPECT_NEAR(path.z[4], path.z[3], 0.0);
    std::ostringstream os;
    write_belief_csv(os, path);
    EXPECT_EQ(os.str().substr(0, 15), "t,x,b,z,gamma,p");
}
