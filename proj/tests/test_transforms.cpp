#include <gtest/gtest.h>

#include <cmath>

#include "polarsym/transforms.hpp"
#include "polarsym/verify.hpp"

using namespace polarsym;

TEST(Symmetrize, CollapsesAtomsToOrigin) {
    Measure m(AtomSet::from_atoms({{-1.0, 0.5}, {2.0, 1.5}}));
    Measure s = symmetrize_measure(m);
    ASSERT_EQ(s.atoms().size(), 1u);
    EXPECT_EQ(s.atoms().atoms()[0].x, 0.0);
    EXPECT_EQ(s.atoms().atoms()[0].mass, 2.0);
    EXPECT_TRUE(s.density().is_zero());
}

TEST(Symmetrize, IdempotentAndMassPreserving) {
    Rng rng(31);
    for (int i = 0; i < 200; ++i) {
        Measure m = random_measure(rng);
        Measure s = symmetrize_measure(m);
        EXPECT_TRUE(measures_equal(symmetrize_measure(s), s));
        EXPECT_TRUE(is_symmetrized(s));
        EXPECT_NEAR(total_variation(s), total_variation(m), 1e-12 * total_variation(m));
    }
}

TEST(PolarizeAtoms, FarAtomMovesToReflection) {
    AtomSet a = polarize_atoms(AtomSet::from_atoms({{2.0, 1.0}}), 1.0);
    ASSERT_EQ(a.size(), 1u);
    EXPECT_EQ(a.atoms()[0].x, 0.0);
    // near atom stays
    AtomSet near = polarize_atoms(AtomSet::from_atoms({{-0.5, 1.0}}), 1.0);
    EXPECT_EQ(near.atoms()[0].x, -0.5);
}

TEST(PolarizeAtoms, PairedAtomsSwapMasses) {
    AtomSet a = polarize_atoms(AtomSet::from_atoms({{0.5, 1.0}, {1.5, 3.0}}), 1.0);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a.atoms()[0], (Atom{0.5, 3.0}));
    EXPECT_EQ(a.atoms()[1], (Atom{1.5, 1.0}));
}

TEST(PolarizeAtoms, NegativePivotMirrors) {
    AtomSet a = polarize_atoms(AtomSet::from_atoms({{-2.0, 1.0}, {0.3, 2.0}}), -1.0);
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a.atoms()[0].x, 0.0);
    EXPECT_EQ(a.atoms()[1].x, 0.3);
}

TEST(PolarizeMeasure, PropertiesOnRandomMeasures) {
    Rng rng(32);
    for (int i = 0; i < 200; ++i) {
        Measure m = random_measure(rng);
        double b = random_pivot(rng);
        Measure p = polarize_measure(m, b);
        EXPECT_NEAR(total_variation(p), total_variation(m), 1e-12 * total_variation(m));
        EXPECT_TRUE(measures_equal(polarize_measure(p, b), p));
        // polarization does not change the symmetrization
        EXPECT_TRUE(measures_equal(symmetrize_measure(p), symmetrize_measure(m)));
        Measure s = symmetrize_measure(m);
        EXPECT_TRUE(measures_equal(polarize_measure(s, b), s));
    }
    EXPECT_THROW(polarize_measure(Measure::dirac(0.0, 1.0), 0.0), Error);
}

TEST(PolarizeMeasure, MirrorCommutes) {
    Rng rng(33);
    for (int i = 0; i < 100; ++i) {
        Measure m = random_measure(rng);
        double b = random_pivot(rng);
        EXPECT_TRUE(measures_equal(polarize_measure(m, b).mirrored(), polarize_measure(m.mirrored(), -b)));
    }
}
