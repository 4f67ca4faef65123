#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "polarsym/rearrange.hpp"
#include "polarsym/verify.hpp"

using namespace polarsym;

namespace {

// Random points of [-pi, pi] away from every breakpoint of f and its
// reflections, where pointwise definitions are unambiguous.
bool is_generic(const PiecewiseConstantDensity& f, double b, double x) {
    for (double p : f.breakpoints()) {
        if (std::abs(x - p) < 1e-9 || std::abs(2 * b - x - p) < 1e-9) return false;
    }
    return std::abs(x - b) > 1e-9 && std::abs(x - (2 * b - kPi)) > 1e-9 && std::abs(x - (2 * b + kPi)) > 1e-9;
}

}  // namespace

TEST(Rearrangement, DecreasingProfile) {
    auto f = PiecewiseConstantDensity::from_cells({-kPi, -1.0, 0.0, 2.0, kPi}, {1.0, 3.0, 0.5, 3.0});
    DecreasingProfile p = decreasing_rearrangement(f);
    ASSERT_EQ(p.values.size(), 3u);
    EXPECT_EQ(p.values[0], 3.0);
    EXPECT_NEAR(p.breakpoints[1], 1.0 + (kPi - 2.0), 1e-15);
    EXPECT_EQ(p.breakpoints.back(), kTwoPi);
}

TEST(Rearrangement, SdrMatchesLevelSetOracle) {
    Rng rng(21);
    for (int i = 0; i < 200; ++i) {
        auto f = random_density(rng, 1 + rng.index(32));
        auto fs = sdr(f);
        EXPECT_NEAR(fs.integral(), f.integral(), 1e-12 * std::max(1.0, f.integral()));
        for (int k = 0; k < 50; ++k) {
            double t = rng.uniform(-kPi, kPi);
            bool near_break = false;
            for (double p : fs.breakpoints()) near_break |= std::abs(p - t) < 1e-9;
            if (near_break) continue;
            EXPECT_EQ(fs(t), oracle::sdr_value(f, t));
        }
        // even and non-increasing in |t|
        EXPECT_TRUE(densities_equal(fs, fs.mirrored()));
        EXPECT_TRUE(densities_equal(sdr(fs), fs));
    }
}

TEST(Rearrangement, SdrFixtures) {
    auto ind = PiecewiseConstantDensity::indicator(kPi / 2, kPi, 1.0);
    auto expected = PiecewiseConstantDensity::indicator(-kPi / 4, kPi / 4, 1.0);
    EXPECT_TRUE(densities_equal(sdr(ind), expected));
    auto one = PiecewiseConstantDensity::constant(1.0);
    EXPECT_TRUE(densities_equal(sdr(one), one));
}

TEST(Polarization, MatchesPointwiseDefinition) {
    Rng rng(22);
    for (int i = 0; i < 200; ++i) {
        auto f = random_density(rng, 1 + rng.index(32));
        double b = random_pivot(rng);
        auto fh = polarize_density(f, b);
        EXPECT_NEAR(fh.integral(), f.integral(), 1e-12 * std::max(1.0, f.integral()));
        for (int k = 0; k < 50; ++k) {
            double x = rng.uniform(-kPi, kPi);
            if (!is_generic(f, b, x)) continue;
            EXPECT_EQ(fh(x), oracle::polarized_value(f, b, x)) << "b=" << b << " x=" << x;
        }
    }
}

TEST(Polarization, Idempotent) {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        auto f = random_density(rng, 1 + rng.index(32));
        double b = random_pivot(rng);
        auto once = polarize_density(f, b);
        EXPECT_TRUE(densities_equal(polarize_density(once, b), once));
        // s.d.r. densities are fixed by every polarization
        auto fs = sdr(f);
        EXPECT_TRUE(densities_equal(polarize_density(fs, b), fs));
    }
}

TEST(Polarization, SingleStepFixture) {
    auto ind = PiecewiseConstantDensity::indicator(kPi / 2, kPi, 1.0);
    auto result = polarize_density(ind, 3 * kPi / 8);
    EXPECT_TRUE(densities_equal(result, PiecewiseConstantDensity::indicator(-kPi / 4, kPi / 4, 1.0)));
    EXPECT_THROW(polarize_density(ind, 0.0), Error);
    EXPECT_THROW(polarize_density(ind, kPi), Error);
}

TEST(Star, DensityStarMatchesOracle) {
    Rng rng(24);
    for (int i = 0; i < 100; ++i) {
        auto f = random_density(rng, 1 + rng.index(32));
        StarFunction star = star_density(f);
        for (int k = 0; k < 20; ++k) {
            double t = rng.uniform(0.0, kTwoPi);
            EXPECT_NEAR(star(t), oracle::density_star(f, t), 1e-12 * std::max(1.0, f.integral()));
        }
        EXPECT_NEAR(star(kTwoPi), f.integral(), 1e-12 * std::max(1.0, f.integral()));
    }
}

TEST(Star, SampledSolutionStar) {
    Solution s = solve(Measure::dirac(0.0, kTwoPi));
    SampledStar star(s);
    EXPECT_EQ(star(0.0), 0.0);
    // u = pi^2 - pi|x| gives u_star(t) = pi^2 t - pi t^2 / 4
    for (double t : {0.5, 1.0, 3.0, kTwoPi}) EXPECT_NEAR(star(t), kPi * kPi * t - kPi * t * t / 4, 1e-4);
    EXPECT_NEAR(star(kTwoPi), lp_norm(s, 1.0), 1e-5);
    EXPECT_THROW(star(-0.1), Error);
}

TEST(Disagreement, PolarizationSetFixtures) {
    auto f = PiecewiseConstantDensity::indicator(kPi / 2, kPi, 1.0);
    EXPECT_EQ(polarization_disagreement(f, f, 1.0), 0.0);
    // reflection of [1, 2) across 0.5 is [-1, 0); g opposes f on [-0.5, 0)
    auto h = PiecewiseConstantDensity::indicator(1.0, 2.0, 1.0);
    auto g = PiecewiseConstantDensity::indicator(-0.5, 0.0, 1.0);
    EXPECT_NEAR(polarization_disagreement(h, g, 0.5), 0.5, 1e-15);
    EXPECT_NEAR(polarization_disagreement(h.mirrored(), g.mirrored(), -0.5), 0.5, 1e-15);
}

TEST(Disagreement, ZeroIffInnerProductPreserved) {
    Rng rng(25);
    for (int i = 0; i < 200; ++i) {
        auto f = random_density(rng, 1 + rng.index(16));
        auto g = random_density(rng, 1 + rng.index(16));
        double b = random_pivot(rng);
        double gap = inner_product(polarize_density(f, b), polarize_density(g, b)) - inner_product(f, g);
        double null = polarization_disagreement(f, g, b);
        EXPECT_GE(gap, -1e-10);
        if (null == 0.0) {
            EXPECT_NEAR(gap, 0.0, 1e-10);
        }
        double sdr_gap = inner_product(sdr(f), sdr(g)) - inner_product(f, g);
        EXPECT_GE(sdr_gap, -1e-10);
        if (sdr_disagreement(f, g) == 0.0) {
            EXPECT_NEAR(sdr_gap, 0.0, 1e-10);
        }
    }
}

TEST(Iteration, IndicatorReachesZero) {
    auto f = PiecewiseConstantDensity::indicator(kPi / 2, kPi, 1.0);
    PolarizationRun run = iterate_polarizations(f, 1e-12, 100, 0);
    EXPECT_TRUE(run.converged());
    ASSERT_FALSE(run.trace.empty());
    EXPECT_EQ(run.trace.back().l1_distance, 0.0);
    EXPECT_TRUE(densities_equal(run.final_density, sdr(f)));
}

TEST(Iteration, AlreadySymmetricHasEmptyTrace) {
    auto f = sdr(PiecewiseConstantDensity::from_cells({-kPi, 0.0, 1.0, kPi}, {1.0, 2.0, 0.5}));
    PolarizationRun run = iterate_polarizations(f, 1e-12, 100, 0);
    EXPECT_TRUE(run.converged());
    EXPECT_TRUE(run.trace.empty());
}

TEST(Iteration, RandomDensitiesConverge) {
    Rng rng(26);
    for (int i = 0; i < 10; ++i) {
        auto f = random_density(rng, 16);
        PolarizationRun run = iterate_polarizations(f, 1e-6, 10000, 100 + i);
        EXPECT_TRUE(run.converged());
        double dist = run.trace.empty() ? run.initial_distance : run.trace.back().l1_distance;
        EXPECT_LE(dist, 1e-6 * std::max(1.0, f.integral()));
        EXPECT_NEAR(run.final_density.integral(), f.integral(), 1e-10 * std::max(1.0, f.integral()));
    }
    EXPECT_THROW(iterate_polarizations(PiecewiseConstantDensity::constant(1.0), 0.0, 10, 0), Error);
}

TEST(Iteration, DeterministicGivenSeed) {
    Rng rng(27);
    auto f = random_density(rng, 16);
    auto a = iterate_polarizations(f, 1e-6, 10000, 5);
    auto b = iterate_polarizations(f, 1e-6, 10000, 5);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        EXPECT_EQ(a.trace[i].b, b.trace[i].b);
        EXPECT_EQ(a.trace[i].l1_distance, b.trace[i].l1_distance);
    }
}
