#include <fdmi/magnetics.hpp>
#include <fdmi/selfcheck.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace fdmi {
namespace {

// Expected values below were evaluated from the closed forms in 30-digit
// arithmetic (mpmath), independent of this code.

CoilSpec coil(const std::string& id, Vec3 center, Vec3 normal, double radius, int turns,
              double wire = 2.12e-4) {
    CoilParams p;
    p.id = id;
    p.center = center;
    p.normal = normal;
    p.radius_m = radius;
    p.turns = turns;
    p.wire_radius_m = wire;
    p.tuning = SeriesCapacitor{4.7e-9};
    return CoilSpec(p);
}

const Vec3 kX{1, 0, 0}, kY{0, 1, 0}, kZ{0, 0, 1};

/// Exact mutual inductance of two coaxial single-turn circular filaments.
double coaxial_exact(double a, double b, double d) {
    const double k2 = 4 * a * b / ((a + b) * (a + b) + d * d);
    const double k = std::sqrt(k2);
    return kMu0 * std::sqrt(a * b) * ((2 / k - k) * std::comp_ellint_1(k) - 2 / k * std::comp_ellint_2(k));
}

TEST(SelfInductance, SingleTurnClosedForm) {
    const auto c = coil("c", {}, kX, 0.1, 1, 0.001);
    EXPECT_NEAR(self_inductance(c), 5.88685671542486e-7, 1e-18);
}

TEST(SelfInductance, DoublingTurnsIsNotExactlyFourTimesWithBundleRadius) {
    // The bundle radius grows with sqrt(N), so only the N^2 prefactor is exact.
    const auto c1 = coil("c", {}, kX, 0.1, 10);
    const auto c2 = coil("c", {}, kX, 0.1, 20);
    const double a1 = bundle_radius(c1), a2 = bundle_radius(c2);
    const double expected = 4.0 * self_inductance(c1) * (std::log(0.8 / a2) - 2) / (std::log(0.8 / a1) - 2);
    EXPECT_NEAR(self_inductance(c2) / expected, 1.0, 1e-14);
}

TEST(SelfInductance, NSquaredScalingAtFixedBundle) {
    // Fix the bundle radius a = wire*sqrt(N) while doubling N.
    const auto c1 = coil("c", {}, kX, 0.1, 4, 2e-3);
    const auto c2 = coil("c", {}, kX, 0.1, 16, 1e-3);
    ASSERT_DOUBLE_EQ(bundle_radius(c1), bundle_radius(c2));
    EXPECT_NEAR(self_inductance(c2) / self_inductance(c1), 16.0, 1e-12);
    const auto c3 = coil("c", {}, kX, 0.1, 8, 2e-3 / std::sqrt(2.0));
    EXPECT_NEAR(self_inductance(c3) / self_inductance(c1), 4.0, 1e-12);
}

TEST(SelfInductance, BundleThickerThanLoopIsGeometryError) {
    const auto c = coil("fat", {}, kX, 0.01, 400, 0.001);  // a = 0.02 > r
    EXPECT_THROW(self_inductance(c), GeometryError);
}

TEST(Tuning, InductanceFromLinkCapacitors) {
    EXPECT_NEAR(inductance_from_tuning(4.7e-9, 46770.0), 2.46381256395407e-3, 1e-15);
    EXPECT_NEAR(inductance_from_tuning(2.45e-9, 46770.0), 4.72649757166698e-3, 1e-15);
    // Rounded values quoted alongside the capacitor values.
    EXPECT_NEAR(inductance_from_tuning(4.7e-9, 46770.0), 2.4635e-3, 5e-7);
    EXPECT_NEAR(inductance_from_tuning(2.45e-9, 46770.0), 4.726e-3, 1e-6);
}

TEST(Tuning, QuadruplingCapacitanceQuartersInductance) {
    EXPECT_NEAR(inductance_from_tuning(4 * 3e-9, 5e4) * 4, inductance_from_tuning(3e-9, 5e4), 1e-18);
}

TEST(Tuning, CapacitanceClosesToLinkValues) {
    EXPECT_NEAR(tuning_capacitance(2.4635e-3, 46770.0), 4.7e-9, 1e-12);
    EXPECT_NEAR(tuning_capacitance(4.726e-3, 46770.0), 2.45e-9, 1e-12);
    EXPECT_NEAR(tuning_capacitance(2.4635e-3, 46770.0), 4.70059632660203e-9, 1e-21);
}

TEST(Tuning, RoundTripRandomized) {
    const auto r = check_tuning_roundtrip(7, 5000);
    EXPECT_TRUE(r.passed) << r.detail;
}

TEST(Tuning, RejectsNonPositive) {
    EXPECT_THROW(inductance_from_tuning(0.0, 1e4), ParameterError);
    EXPECT_THROW(tuning_capacitance(1e-3, -1.0), ParameterError);
}

TEST(SeriesResistance, CalibrationDefaults) {
    EXPECT_NEAR(series_resistance(coil("v", {}, kX, 0.1, 100), kCopperResistivity), 7.47597009611962, 1e-11);
    EXPECT_NEAR(series_resistance(coil("h", {}, kZ, 0.121, 100), kCopperResistivity), 9.04592381630473, 1e-11);
}

TEST(SeriesResistance, DoublingWireRadiusQuarters) {
    const double r1 = series_resistance(coil("a", {}, kX, 0.1, 50, 1e-4), kCopperResistivity);
    const double r2 = series_resistance(coil("a", {}, kX, 0.1, 50, 2e-4), kCopperResistivity);
    EXPECT_NEAR(r1 / r2, 4.0, 1e-12);
}

TEST(DipoleMutual, CoaxialCanonicalPair) {
    const auto res = mutual_inductance_dipole(coil("A1", {}, kX, 0.1, 100), coil("B1", {0.6, 0, 0}, kX, 0.1, 100));
    EXPECT_EQ(res.method, MutualMethod::dipole);
    ASSERT_TRUE(res.orientation_factor);
    EXPECT_DOUBLE_EQ(*res.orientation_factor, 2.0);
    EXPECT_NEAR(res.value, 9.13852259360126e-6, 1e-17);
}

TEST(DipoleMutual, CoplanarCanonicalPair) {
    const auto res =
        mutual_inductance_dipole(coil("B2", {0.6, 0, 0}, kZ, 0.121, 100), coil("A2", {}, kZ, 0.121, 100));
    EXPECT_DOUBLE_EQ(*res.orientation_factor, -1.0);
    EXPECT_NEAR(res.value, -9.79461738578792e-6, 1e-17);
}

TEST(DipoleMutual, OrthogonalNullIsExactlyZero) {
    const auto res = mutual_inductance_dipole(coil("A1", {}, kX, 0.1, 100), coil("B2", {0.6, 0, 0}, kZ, 0.121, 100));
    EXPECT_EQ(res.value, 0.0);
    EXPECT_EQ(*res.orientation_factor, 0.0);
}

TEST(DipoleMutual, CoincidentCentersAreSingular) {
    EXPECT_THROW(mutual_inductance_dipole(coil("A1", {}, kX, 0.1, 100), coil("A2", {}, kZ, 0.121, 100)),
                 GeometryError);
}

TEST(DipoleMutual, SignIsPreserved) {
    const auto res = mutual_inductance_dipole(coil("a", {}, kX, 0.1, 10), coil("b", {0.6, 0, 0}, -1.0 * kX, 0.1, 10));
    EXPECT_LT(res.value, 0.0);
}

TEST(DipoleMutual, FactorStaysInRange) {
    GeometrySampler g(3);
    for (int i = 0; i < 500; ++i) {
        const auto [a, b] = g.pair(1.5, 10);
        const double f = *mutual_inductance_dipole(a, b).orientation_factor;
        EXPECT_LE(std::abs(f), 2.0 + 1e-15);
    }
}

TEST(NeumannMutual, ConcentricOrthogonalNull) {
    const auto res = mutual_inductance_neumann(coil("A1", {}, kX, 0.1, 100), coil("A2", {}, kZ, 0.121, 100), 512);
    EXPECT_EQ(res.method, MutualMethod::neumann);
    EXPECT_FALSE(res.orientation_factor);
    EXPECT_LT(std::abs(res.value), 1e-12);
}

TEST(NeumannMutual, MatchesExactCoaxialFormula) {
    // Elliptic-integral closed form as the oracle.
    for (double d : {0.05, 0.2, 0.5, 1.0}) {
        const auto a = coil("a", {}, kX, 0.1, 1);
        const auto b = coil("b", {d, 0, 0}, kX, 0.08, 1);
        const double exact = coaxial_exact(0.1, 0.08, d);
        EXPECT_NEAR(mutual_inductance_neumann(a, b, 512).value / exact, 1.0, 1e-4) << "d=" << d;
    }
}

TEST(NeumannMutual, ConvergesUnderSegmentDoubling) {
    const auto a = coil("a", {}, kX, 0.1, 1);
    const auto b = coil("b", {0.5, 0, 0}, kX, 0.1, 1);
    const double exact = coaxial_exact(0.1, 0.1, 0.5);
    double prev_err = 1.0;
    for (int s : {16, 32, 64, 128}) {
        const double err = std::abs(mutual_inductance_neumann(a, b, s).value / exact - 1.0);
        EXPECT_LE(err, std::max(prev_err, 1e-12)) << s;
        prev_err = err;
    }
    EXPECT_LT(prev_err, 1e-6);
}

TEST(NeumannMutual, CoaxialFiveRadiiGapToDipole) {
    // At d = 5r the dipole form overestimates the exact coaxial coupling by
    // 10.7%; the gap falls off as (r/d)^2.
    const auto a = coil("a", {}, kX, 0.1, 1);
    for (double ratio : {5.0, 10.0, 20.0}) {
        const auto b = coil("b", {0.1 * ratio, 0, 0}, kX, 0.1, 1);
        const double dip = mutual_inductance_dipole(a, b).value;
        const double neu = mutual_inductance_neumann(a, b, 512).value;
        EXPECT_NEAR(neu / coaxial_exact(0.1, 0.1, 0.1 * ratio), 1.0, 1e-6);
        const double gap = 1.0 - neu / dip;
        if (ratio == 5.0) {
            EXPECT_NEAR(gap, 0.10673, 1e-4);
        }
        EXPECT_LT(gap, 3.1 / (ratio * ratio));
        EXPECT_GT(gap, 2.5 / (ratio * ratio));
    }
}

TEST(NeumannMutual, SwapIsReciprocal) {
    const auto r = check_reciprocity(11, 30);
    EXPECT_TRUE(r.passed) << r.detail;
}

TEST(NeumannMutual, LinearInTurns) {
    const auto a = coil("a", {}, kX, 0.1, 3);
    const auto b = coil("b", {0.3, 0.1, 0}, (kX + kY).normalized(), 0.07, 5);
    const auto b2 = coil("b", {0.3, 0.1, 0}, (kX + kY).normalized(), 0.07, 10);
    EXPECT_NEAR(mutual_inductance_neumann(a, b2).value / mutual_inductance_neumann(a, b).value, 2.0, 1e-13);
    EXPECT_NEAR(mutual_inductance_dipole(a, b2).value / mutual_inductance_dipole(a, b).value, 2.0, 1e-13);
}

TEST(NeumannMutual, RejectsFewSegments) {
    EXPECT_THROW(mutual_inductance_neumann(coil("a", {}, kX, 0.1, 1), coil("b", {1, 0, 0}, kX, 0.1, 1), 15),
                 ParameterError);
}

TEST(NeumannMutual, IntersectingFilamentsAreGeometryError) {
    // Same plane, centers 0.15 apart, radii 0.1: the circles cross.
    EXPECT_THROW(mutual_inductance_neumann(coil("a", {}, kZ, 0.1, 1), coil("b", {0.15, 0, 0}, kZ, 0.1, 1)),
                 GeometryError);
    // Orthogonal loop passing through a point of the first.
    EXPECT_THROW(mutual_inductance_neumann(coil("a", {}, kZ, 0.1, 1), coil("b", {0.1, 0, 0.1}, kY, 0.1, 1)),
                 GeometryError);
    // Identical loops.
    EXPECT_THROW(mutual_inductance_neumann(coil("a", {}, kZ, 0.1, 1), coil("b", {}, kZ, 0.1, 1)), GeometryError);
}

TEST(FilamentIntersection, DisjointConfigurations) {
    EXPECT_FALSE(filaments_intersect(coil("a", {}, kX, 0.1, 1), coil("b", {}, kZ, 0.121, 1)));
    EXPECT_FALSE(filaments_intersect(coil("a", {}, kZ, 0.1, 1), coil("b", {}, kZ, 0.05, 1)));
    EXPECT_FALSE(filaments_intersect(coil("a", {}, kZ, 0.1, 1), coil("b", {0.3, 0, 0}, kZ, 0.1, 1)));
    // Linked rings that never touch.
    EXPECT_FALSE(filaments_intersect(coil("a", {}, kZ, 0.1, 1), coil("b", {0.1, 0, 0.01}, kY, 0.1, 1)));
}

TEST(DistanceLaw, SlopesOfBothMethods) {
    const auto r = check_distance_law();
    EXPECT_TRUE(r.passed) << r.detail;
}

TEST(AngleLaw, DipoleCoaxialRotation) {
    const auto tx = coil("t", {}, kX, 0.1, 10);
    const double m0 = mutual_inductance_dipole(tx, coil("r", {0.8, 0, 0}, kX, 0.1, 10)).value;
    for (int deg = 0; deg <= 90; deg += 5) {
        const double t = deg * kPi / 180.0;
        const auto rx = coil("r", {0.8, 0, 0}, rotate(kX, kZ, t), 0.1, 10);
        EXPECT_NEAR(mutual_inductance_dipole(tx, rx).value / m0, std::cos(t), 1e-12) << deg;
    }
}

TEST(CouplingCoefficient, Values) {
    EXPECT_NEAR(coupling_coefficient(9.14e-6, 2.4635e-3, 2.4635e-3), 3.71e-3, 5e-6);
    EXPECT_EQ(coupling_coefficient(0.0, 1e-3, 2e-3), 0.0);
    EXPECT_DOUBLE_EQ(coupling_coefficient(std::sqrt(2e-6), 1e-3, 2e-3), 1.0);
    EXPECT_THROW(coupling_coefficient(1e-6, 0.0, 1e-3), ParameterError);
}

TEST(CouplingCoefficient, BoundedForRandomNeumannPairs) {
    const auto r = check_coupling_bound(5, 40);
    EXPECT_TRUE(r.passed) << r.detail;
}

TEST(SkinDepth, FreshAndBrackishWater) {
    EXPECT_NEAR(skin_depth(Medium{0.01}, 46770.0), 23.2721467423145, 1e-10);
    EXPECT_NEAR(skin_depth(Medium{0.1}, 46770.0), 7.35929897473814, 1e-10);
}

TEST(SkinDepth, InverseSquareRootOfConductivity) {
    EXPECT_NEAR(skin_depth(Medium{0.01}, 46770.0) / skin_depth(Medium{1.0}, 46770.0), 10.0, 1e-12);
    const double ref = skin_depth(Medium{0.01}, 1e4) * std::sqrt(0.01);
    for (double s : {1e-4, 0.3, 4.0, 55.0})
        EXPECT_NEAR(skin_depth(Medium{s}, 1e4) * std::sqrt(s) / ref, 1.0, 1e-12);
}

TEST(SkinDepth, LosslessMediumIsInfinite) {
    EXPECT_EQ(skin_depth(Medium{0.0}, 46770.0), std::numeric_limits<double>::infinity());
    EXPECT_THROW(skin_depth(Medium{0.01}, 0.0), ParameterError);
}

TEST(NetworkMutual, ConcentricDipoleFallbacks) {
    const Medium water{0.01};
    const auto a1 = coil("A1", {}, kX, 0.1, 100);
    const auto a2 = coil("A2", {}, kZ, 0.121, 100);
    EXPECT_EQ(mutual_inductance(a1, a2, {}, water, 46770.0), 0.0);
    // Tilted concentric coils fall back to the Neumann integral.
    const auto tilted = coil("T", {}, (kX + kZ).normalized(), 0.121, 100);
    MutualOptions neumann{MutualMethod::neumann, kDefaultNeumannSegments, false};
    EXPECT_DOUBLE_EQ(mutual_inductance(a1, tilted, {}, water, 46770.0),
                     mutual_inductance(a1, tilted, neumann, water, 46770.0));
}

TEST(NetworkMutual, OptionalMediumAttenuation) {
    const Medium sea{4.0};
    const auto a = coil("a", {}, kX, 0.1, 10), b = coil("b", {1.0, 0, 0}, kX, 0.1, 10);
    MutualOptions on{MutualMethod::dipole, kDefaultNeumannSegments, true};
    const double plain = mutual_inductance(a, b, {}, sea, 1e4);
    const double damped = mutual_inductance(a, b, on, sea, 1e4);
    EXPECT_NEAR(damped / plain, std::exp(-1.0 / skin_depth(sea, 1e4)), 1e-14);
}

} // namespace
} // namespace fdmi
