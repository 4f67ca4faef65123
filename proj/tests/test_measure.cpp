#include <gtest/gtest.h>

#include <cmath>

#include "polarsym/measure.hpp"
#include "polarsym/verify.hpp"

using namespace polarsym;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::invalid_argument;
}

}  // namespace

TEST(Density, MergesEqualAdjacentCells) {
    auto f = PiecewiseConstantDensity::from_cells({-kPi, 0.0, kPi}, {1.0, 1.0});
    ASSERT_EQ(f.cell_count(), 1u);
    EXPECT_EQ(f.breakpoints()[0], -kPi);
    EXPECT_EQ(f.breakpoints()[1], kPi);
    EXPECT_EQ(f.values()[0], 1.0);
}

TEST(Density, SnapsEndpoints) {
    auto f = PiecewiseConstantDensity::from_cells({-kPi - 5e-13, 0.0, kPi + 5e-13}, {1.0, 2.0});
    EXPECT_EQ(f.breakpoints().front(), -kPi);
    EXPECT_EQ(f.breakpoints().back(), kPi);
    EXPECT_EQ(code_of([] { PiecewiseConstantDensity::from_cells({-3.0, kPi}, {1.0}); }), Errc::validation);
}

TEST(Density, RejectsBadInput) {
    EXPECT_EQ(code_of([] { PiecewiseConstantDensity::from_cells({-kPi, 1.0, 0.5, kPi}, {1, 1, 1}); }),
              Errc::breakpoints_not_increasing);
    EXPECT_EQ(code_of([] { PiecewiseConstantDensity::from_cells({-kPi, kPi}, {-0.1}); }), Errc::negative_density);
    EXPECT_EQ(code_of([] { PiecewiseConstantDensity::from_cells({-kPi, kPi}, {1.0, 2.0}); }), Errc::validation);
}

TEST(Density, RightContinuousEvaluation) {
    auto f = PiecewiseConstantDensity::from_cells({-kPi, 0.0, kPi}, {1.0, 3.0});
    EXPECT_EQ(f(-1.0), 1.0);
    EXPECT_EQ(f(0.0), 3.0);
    EXPECT_EQ(f(4.0), 0.0);
    EXPECT_DOUBLE_EQ(f.integral(), 4.0 * kPi);
}

TEST(Atoms, MergeSortAndValidate) {
    auto a = AtomSet::from_atoms({{0.5, 1.0}, {-1.0, 2.0}, {0.5, 2.0}, {0.2, 0.0}});
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a.atoms()[0], (Atom{-1.0, 2.0}));
    EXPECT_EQ(a.atoms()[1], (Atom{0.5, 3.0}));
    EXPECT_EQ(code_of([] { AtomSet::from_atoms({{kPi, 1.0}}); }), Errc::atom_out_of_range);
    EXPECT_EQ(code_of([] { AtomSet::from_atoms({{0.0, -1.0}}); }), Errc::nonpositive_mass);
}

TEST(MeasureTest, TotalVariationFixtures) {
    EXPECT_DOUBLE_EQ(total_variation(Measure(PiecewiseConstantDensity::constant(1.0))), kTwoPi);
    EXPECT_DOUBLE_EQ(total_variation(Measure::dirac(0.0, kTwoPi)), kTwoPi);
    Measure mixed(PiecewiseConstantDensity::constant(1.0), AtomSet::from_atoms({{kPi / 2, 3.0}}));
    EXPECT_DOUBLE_EQ(total_variation(mixed), kTwoPi + 3.0);
}

TEST(MeasureTest, ZeroMeasureRejected) {
    EXPECT_EQ(code_of([] { Measure(PiecewiseConstantDensity{}, AtomSet{}); }), Errc::validation);
    EXPECT_EQ(code_of([] { canonicalize(RawMeasure{}); }), Errc::validation);
}

TEST(MeasureTest, Equality) {
    Measure a(PiecewiseConstantDensity::constant(1.0));
    Measure b(PiecewiseConstantDensity::from_cells({-kPi, 0.0, kPi}, {1.0, 1.0}));
    EXPECT_TRUE(measures_equal(a, a));
    EXPECT_TRUE(measures_equal(a, b));
    EXPECT_FALSE(measures_equal(Measure::dirac(0.3, 1.0), Measure::dirac(-0.3, 1.0)));
}

TEST(MeasureProperty, CanonicalizeIdempotentAndMassPreserving) {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        Measure m = random_measure(rng);
        Measure once = canonicalize(m);
        Measure twice = canonicalize(once);
        EXPECT_TRUE(once.density() == twice.density() && once.atoms() == twice.atoms());
        EXPECT_LE(std::abs(total_variation(once) - total_variation(m)), 1e-12 * total_variation(m));
    }
}

TEST(MeasureProperty, CanonicalizeMergesRawDuplicates) {
    Rng rng(12);
    for (int i = 0; i < 100; ++i) {
        Measure m = random_measure(rng);
        RawMeasure raw;
        auto bp = m.density().breakpoints();
        auto vals = m.density().values();
        // split every cell in two halves carrying the same value
        raw.breakpoints.push_back(bp[0]);
        for (std::size_t k = 0; k < vals.size(); ++k) {
            raw.breakpoints.push_back(0.5 * (bp[k] + bp[k + 1]));
            raw.breakpoints.push_back(bp[k + 1]);
            raw.values.push_back(vals[k]);
            raw.values.push_back(vals[k]);
        }
        for (const Atom& a : m.atoms().atoms()) {
            raw.atoms.push_back({a.x, 0.25 * a.mass});
            raw.atoms.push_back({a.x, 0.75 * a.mass});
        }
        EXPECT_TRUE(measures_equal(canonicalize(raw), m));
    }
}

TEST(MeasureProperty, EqualityIsEquivalence) {
    Rng rng(13);
    for (int i = 0; i < 100; ++i) {
        Measure a = random_measure(rng);
        Measure b = rng.bernoulli(0.5) ? a : random_measure(rng);
        Measure c = rng.bernoulli(0.5) ? b : random_measure(rng);
        EXPECT_TRUE(measures_equal(a, a));
        EXPECT_EQ(measures_equal(a, b), measures_equal(b, a));
        if (measures_equal(a, b) && measures_equal(b, c)) {
            EXPECT_TRUE(measures_equal(a, c));
        }
    }
}
