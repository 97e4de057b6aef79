#include <fdmi/scenarios.hpp>

#include <gtest/gtest.h>

#include <cmath>

namespace fdmi {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(BuildFdLink, CanonicalMutuals) {
    const auto net = build_fd_link(FdLinkParams{});
    const auto& m = net.mutual();
    EXPECT_NEAR(m(kA1, kB1), 9.13852259360126e-6, 1e-17);
    EXPECT_NEAR(m(kB2, kA2), -9.79461738578792e-6, 1e-17);
    EXPECT_EQ(m(kA1, kA2), 0.0);
    EXPECT_EQ(m(kA1, kB2), 0.0);
    EXPECT_EQ(m(kA2, kB1), 0.0);
    EXPECT_EQ(m(kB1, kB2), 0.0);
    EXPECT_EQ(net.ids(), (std::vector<std::string>{"A1", "A2", "B1", "B2"}));
}

TEST(BuildFdLink, TunedElements) {
    const auto net = build_fd_link(FdLinkParams{});
    EXPECT_NEAR(net.elements()[kA1].inductance_h, 2.46381256395407e-3, 1e-15);
    EXPECT_NEAR(net.elements()[kA2].inductance_h, 4.72649757166698e-3, 1e-15);
    EXPECT_NEAR(net.elements()[kB1].resistance_ohm, 7.47597009611962, 1e-11);
    EXPECT_NEAR(net.elements()[kB2].resistance_ohm, 9.04592381630473, 1e-11);
}

TEST(BuildFdLink, NeumannCrossTermsVanish) {
    FdLinkParams p;
    p.mutual_method = MutualMethod::neumann;
    const auto net = build_fd_link(p);
    const auto& m = net.mutual();
    EXPECT_LT(std::abs(m(kA1, kA2)), 1e-12);
    EXPECT_LT(std::abs(m(kA1, kB2)), 1e-12);
    EXPECT_LT(std::abs(m(kA2, kB1)), 1e-12);
    EXPECT_LT(std::abs(m(kB1, kB2)), 1e-12);
    EXPECT_GT(m(kA1, kB1), 0.0);
}

TEST(BuildFdLink, DoubledDistanceDividesCouplingByEight) {
    FdLinkParams p;
    const auto near = build_fd_link(p);
    p.node_distance_m *= 2;
    const auto far = build_fd_link(p);
    EXPECT_LE(rel(far.mutual()(kA1, kB1) * 8, near.mutual()(kA1, kB1)), 1e-9);
    EXPECT_LE(rel(far.mutual()(kA2, kB2) * 8, near.mutual()(kA2, kB2)), 1e-9);
}

TEST(BuildFdLink, RejectsBadParams) {
    FdLinkParams p;
    p.node_distance_m = 0.0;
    EXPECT_THROW(build_fd_link(p), InvariantError);
    p = FdLinkParams{};
    p.neumann_segments = 8;
    EXPECT_THROW(build_fd_link(p), InvariantError);
}

TEST(RunCase, Case1SoiAtB1NoSiAtA2) {
    const auto rep = run_case(CaseId::case1, FdLinkParams{});
    ASSERT_EQ(rep.channels.size(), 1u);
    const auto& ch = rep.channels[0];
    EXPECT_EQ(ch.receiver, "B1");
    EXPECT_EQ(ch.si_point, "A2");
    EXPECT_NEAR(ch.soi_amps, 0.359216, 1e-6);
    EXPECT_LE(ch.si_amps, 1e-3 * ch.soi_amps);
    EXPECT_LE(si_suppression_db(rep)[0], -60.0);
}

TEST(RunCase, Case2SoiAtA2) {
    const auto rep = run_case(CaseId::case2, FdLinkParams{});
    ASSERT_EQ(rep.channels.size(), 1u);
    EXPECT_EQ(rep.channels[0].transmitter, "B2");
    EXPECT_EQ(rep.channels[0].receiver, "A2");
    EXPECT_NEAR(rep.channels[0].soi_amps, 0.318187, 1e-6);
    EXPECT_LE(rep.channels[0].si_amps, 1e-3 * rep.channels[0].soi_amps);
}

TEST(RunCase, Case3IsSuperpositionOfSoloCases) {
    const FdLinkParams p;
    const auto c1 = run_case(CaseId::case1, p);
    const auto c2 = run_case(CaseId::case2, p);
    const auto c3 = run_case(CaseId::case3, p);
    ASSERT_EQ(c3.channels.size(), 2u);
    const double b1 = std::abs(c3.currents[kB1]);
    const double a2 = std::abs(c3.currents[kA2]);
    EXPECT_LE(rel(b1, std::abs(c1.currents[kB1])), 0.01);
    EXPECT_LE(rel(a2, std::abs(c2.currents[kA2])), 0.01);
    EXPECT_GT(b1, a2);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_LE(std::abs(c3.currents[i] - c1.currents[i] - c2.currents[i]), 1e-12);
}

TEST(RunCase, LoadedAndUnloadedSoiAgreeForDecoupledLink) {
    const auto rep = run_case(CaseId::case1, FdLinkParams{});
    EXPECT_LE(rel(rep.channels[0].soi_amps, rep.channels[0].soi_unloaded_amps), 1e-9);
}

TEST(RunCase, ZeroDriveGivesZeroCurrentsAndMinusInfinity) {
    FdLinkParams p;
    p.drive_amplitude_a = 0.0;
    const auto rep = run_case(CaseId::case1, p);
    for (const auto& c : rep.currents) EXPECT_EQ(c, Complex(0.0, 0.0));
    EXPECT_EQ(rep.channels[0].suppression_db, -std::numeric_limits<double>::infinity());
    EXPECT_EQ(floor_db(rep.channels[0].suppression_db), -300.0);
    EXPECT_THROW(si_suppression_db(rep), ParameterError);
}

TEST(SuppressionRatio, Definition) {
    EXPECT_EQ(suppression_ratio_db(0.5, 0.5), 0.0);
    EXPECT_NEAR(suppression_ratio_db(1e-3, 1.0), -60.0, 1e-12);
    EXPECT_EQ(suppression_ratio_db(0.0, 1.0), -std::numeric_limits<double>::infinity());
}

TEST(DistanceSweep, MonotoneAndForwardDominant) {
    const auto t = distance_sweep(FdLinkParams{}, 0.3, 1.6, 14);
    EXPECT_EQ(t.variable_name(), "distance_m");
    const auto b1 = t.amps_of("B1");
    const auto a2 = t.amps_of("A2");
    for (std::size_t i = 0; i < b1.size(); ++i) {
        EXPECT_GT(b1[i], a2[i]);
        if (i > 0) {
            EXPECT_LT(b1[i], b1[i - 1]);
        }
    }
}

TEST(DistanceSweep, FarReverseCurrentFollowsInverseCube) {
    const auto t = distance_sweep(FdLinkParams{}, 0.6, 1.6, 2);
    const auto a2 = t.amps_of("A2");
    const auto b1 = t.amps_of("B1");
    EXPECT_LT(a2[1], b1[1]);
    EXPECT_LT(a2[1] / a2[0], 0.06);
    EXPECT_NEAR(a2[1] / a2[0], 0.052734375, 2e-3);
}

TEST(DistanceSweep, FirstRowMatchesRunCase) {
    const auto t = distance_sweep(FdLinkParams{}, 0.6, 1.0, 2);
    const auto rep = run_case(CaseId::case3, FdLinkParams{});
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(t.rows()[0].amps[i], std::abs(rep.currents[i]), 1e-12);
}

TEST(OrientationSweep, ForwardFallsReverseStays) {
    FdLinkParams p;
    p.node_distance_m = 0.675;
    const auto t = orientation_sweep(p, {0, 15, 30, 45, 60, 75, 90});
    EXPECT_EQ(t.variable_name(), "angle_deg");
    const auto b1 = t.amps_of("B1");
    const auto a2 = t.amps_of("A2");
    for (std::size_t i = 1; i < b1.size(); ++i) EXPECT_LE(b1[i], b1[i - 1]);
    EXPECT_LE(b1.back(), 1e-3 * b1.front());
    for (double a : a2) {
        EXPECT_GT(a, 0.0);
        EXPECT_LE(rel(a, a2.front()), 0.01);
    }
}

TEST(OrientationSweep, ZeroAngleMatchesRunCase) {
    FdLinkParams p;
    p.node_distance_m = 0.675;
    const auto t = orientation_sweep(p, {0.0});
    const auto rep = run_case(CaseId::case3, p);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(t.rows()[0].amps[i], std::abs(rep.currents[i]), 1e-12);
}

TEST(OrientationSweep, NodeAxisRotationKeepsForwardLink) {
    FdLinkParams p;
    p.node_distance_m = 0.675;
    const auto t = orientation_sweep(p, {0, 45, 90}, RotationAxis::node_axis);
    const auto b1 = t.amps_of("B1");
    for (double b : b1) EXPECT_LE(rel(b, b1.front()), 1e-9);
}

TEST(OrientationSweep, RejectsOutOfRangeAngles) {
    EXPECT_THROW(orientation_sweep(FdLinkParams{}, {-5.0}), ParameterError);
    EXPECT_THROW(orientation_sweep(FdLinkParams{}, {95.0}), ParameterError);
}

TEST(Presets, Catalogue) {
    EXPECT_EQ(preset_names().size(), 5u);
    for (const auto& n : preset_names()) EXPECT_TRUE(find_preset(n)) << n;
    EXPECT_FALSE(find_preset("case4"));
    const auto d = find_preset("fig-distance");
    EXPECT_EQ(d->params.medium.conductivity(), 0.1);
    EXPECT_EQ(d->sweep.kind, SweepKind::distance);
    const auto o = find_preset("fig-orientation");
    EXPECT_EQ(o->params.node_distance_m, 0.675);
    EXPECT_EQ(o->sweep.steps, 7);
    EXPECT_EQ(find_preset("case2")->drive_case, CaseId::case2);
}

TEST(Presets, Case1PeakAtResonance) {
    const auto p = find_preset("case1");
    const auto t = run_link_sweep(p->params, p->drive_case, p->sweep);
    const auto b1 = t.amps_of("B1");
    const auto k = static_cast<std::size_t>(std::max_element(b1.begin(), b1.end()) - b1.begin());
    EXPECT_LE(std::abs(t.rows()[k].value - 46770.0), 100.0);
}

} // namespace
} // namespace fdmi
