#pragma once

// The two-node orthogonal-coil full-duplex link and its experiments.
//
// Frame: node axis = x, vertical = z. Node A sits at the origin with A1
// (normal +x) and A2 (normal +z) sharing a center; node B sits at
// (d, 0, 0) with B1 (+x) and B2 (+z). A1->B1 is the coaxial forward
// channel, B2->A2 the coplanar reverse channel.

#include <fdmi/circuit.hpp>
#include <fdmi/magnetics.hpp>
#include <fdmi/network.hpp>
#include <fdmi/parallel.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fdmi {

struct FdLinkParams {
    double node_distance_m = 0.6;
    double r_vertical_m = 0.1;      ///< A1/B1 loop radius
    double r_horizontal_m = 0.121;  ///< A2/B2 loop radius
    int turns = 100;
    double f0_hz = 46770.0;
    double c_vertical_f = 4.7e-9;
    double c_horizontal_f = 2.45e-9;
    double drive_amplitude_a = 1.0;
    Medium medium{0.01};
    MutualMethod mutual_method = MutualMethod::dipole;
    int neumann_segments = kDefaultNeumannSegments;
    bool medium_attenuation = false;
    double wire_radius_m = 2.12e-4;
    double resistivity_ohm_m = kCopperResistivity;

    void validate() const {
        using detail::require;
        auto pos = [](double v) { return v > 0.0 && std::isfinite(v); };
        require(pos(node_distance_m), "fd_link.node_distance_positive", "node distance must be > 0");
        require(pos(r_vertical_m) && pos(r_horizontal_m), "fd_link.radius_positive", "coil radii must be > 0");
        require(turns >= 1, "fd_link.turns_positive", "turns must be >= 1");
        require(pos(f0_hz), "fd_link.f0_positive", "f0 must be > 0");
        require(pos(c_vertical_f) && pos(c_horizontal_f), "fd_link.capacitance_positive",
                "capacitances must be > 0");
        require(drive_amplitude_a >= 0.0 && std::isfinite(drive_amplitude_a), "fd_link.amplitude_nonnegative",
                "drive amplitude must be >= 0");
        require(neumann_segments >= kMinNeumannSegments, "fd_link.segments",
                "neumann segments must be >= " + std::to_string(kMinNeumannSegments));
        require(pos(wire_radius_m), "fd_link.wire_radius_positive", "wire radius must be > 0");
        require(pos(resistivity_ohm_m), "fd_link.resistivity_positive", "resistivity must be > 0");
    }

    MutualOptions mutual_options() const { return {mutual_method, neumann_segments, medium_attenuation}; }

    friend bool operator==(const FdLinkParams&, const FdLinkParams&) = default;
};

enum class CaseId { case1, case2, case3 };

/// Rotation axis through node B's center.
enum class RotationAxis { vertical, node_axis, horizontal_transverse };

inline Vec3 axis_vector(RotationAxis axis) {
    switch (axis) {
        case RotationAxis::vertical: return {0.0, 0.0, 1.0};
        case RotationAxis::node_axis: return {1.0, 0.0, 0.0};
        case RotationAxis::horizontal_transverse: return {0.0, 1.0, 0.0};
    }
    return {0.0, 0.0, 1.0};
}

inline constexpr std::size_t kA1 = 0, kA2 = 1, kB1 = 2, kB2 = 3;

namespace detail {

inline CoilSpec fd_coil(const FdLinkParams& p, std::string id, Vec3 center, Vec3 normal, bool vertical) {
    const double c = vertical ? p.c_vertical_f : p.c_horizontal_f;
    CoilParams cp;
    cp.id = std::move(id);
    cp.center = center;
    cp.normal = normal;
    cp.radius_m = vertical ? p.r_vertical_m : p.r_horizontal_m;
    cp.turns = p.turns;
    cp.wire_radius_m = p.wire_radius_m;
    cp.tuning = SeriesCapacitor{c};
    cp.inductance_override_h = inductance_from_tuning(c, p.f0_hz);
    cp.resistivity_ohm_m = p.resistivity_ohm_m;
    return CoilSpec(std::move(cp));
}

inline std::vector<Drive> case_drives(CaseId id, double amps) {
    std::vector<Drive> d(4, Drive::passive());
    if (id != CaseId::case2) d[kA1] = Drive::current(amps);
    if (id != CaseId::case1) d[kB2] = Drive::current(amps);
    return d;
}

} // namespace detail

/// Four-coil link with node B rigidly rotated by `angle_deg` about `axis`.
inline CoupledNetwork build_fd_link(const FdLinkParams& p, double angle_deg = 0.0,
                                    RotationAxis axis = RotationAxis::vertical,
                                    std::vector<Drive> drives = std::vector<Drive>(4)) {
    p.validate();
    const Vec3 x{1.0, 0.0, 0.0}, z{0.0, 0.0, 1.0};
    const Vec3 b_center{p.node_distance_m, 0.0, 0.0};
    const Vec3 k = axis_vector(axis);
    const double theta = angle_deg * kPi / 180.0;
    std::vector<CoilSpec> coils{
        detail::fd_coil(p, "A1", {}, x, true),
        detail::fd_coil(p, "A2", {}, z, false),
        detail::fd_coil(p, "B1", b_center, rotate(x, k, theta), true),
        detail::fd_coil(p, "B2", b_center, rotate(z, k, theta), false),
    };
    MutualMatrix m = compute_mutual_matrix(coils, p.medium, p.mutual_options(), p.f0_hz);
    return CoupledNetwork(std::move(coils), p.medium, std::move(m), std::move(drives));
}

/// Intended transmitter -> receiver link and the co-located SI point.
struct SiChannel {
    std::string transmitter;
    std::string receiver;
    std::string si_point;
    double soi_amps = 0.0;
    double si_amps = 0.0;
    /// Open-receiver estimate |jwM I_tx| / |Z_rx| without network loading.
    double soi_unloaded_amps = 0.0;
    double suppression_db = 0.0;
};

struct SiReport {
    CaseId case_id = CaseId::case1;
    double frequency_hz = 0.0;
    std::vector<SiChannel> channels;
    std::vector<std::string> coil_ids;
    std::vector<Complex> currents;
};

inline double suppression_ratio_db(double si, double soi) {
    if (si == 0.0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(si / soi);
}

/// dB value as written to files: -inf maps to this floor.
inline constexpr double kSuppressionFloorDb = -300.0;

inline double floor_db(double db) { return std::max(db, kSuppressionFloorDb); }

/// Excites the case's transmitters at f0 and reads SoI and SI currents. SI
/// for each channel is the current its own transmitter alone induces at
/// the co-located receiver.
inline SiReport run_case(CaseId id, const FdLinkParams& p) {
    const CoupledNetwork base = build_fd_link(p);
    const double amps = p.drive_amplitude_a;
    const double w = 2.0 * kPi * p.f0_hz;

    SiReport rep;
    rep.case_id = id;
    rep.frequency_hz = p.f0_hz;
    rep.coil_ids = base.ids();

    auto solve = [&](CaseId which) -> std::vector<Complex> {
        if (amps == 0.0) return std::vector<Complex>(4, Complex{});
        return solve_steady_state(base.with_drives(detail::case_drives(which, amps)), p.f0_hz).currents();
    };
    rep.currents = solve(id);
    const ImpedanceMatrix z = impedance_matrix(base, p.f0_hz);

    auto add = [&](std::size_t tx, std::size_t rx, std::size_t si, CaseId solo) {
        SiChannel ch;
        ch.transmitter = rep.coil_ids[tx];
        ch.receiver = rep.coil_ids[rx];
        ch.si_point = rep.coil_ids[si];
        ch.soi_amps = std::abs(rep.currents[rx]);
        ch.si_amps = std::abs((solo == id ? rep.currents : solve(solo))[si]);
        ch.soi_unloaded_amps = w * std::abs(base.mutual()(tx, rx)) * amps / std::abs(z(rx, rx));
        ch.suppression_db = suppression_ratio_db(ch.si_amps, ch.soi_amps);
        rep.channels.push_back(ch);
    };
    if (id != CaseId::case2) add(kA1, kB1, kA2, CaseId::case1);
    if (id != CaseId::case1) add(kB2, kA2, kB1, CaseId::case2);
    return rep;
}

/// Per-channel 20 log10(si/soi); undefined when a channel has no SoI.
inline std::vector<double> si_suppression_db(const SiReport& rep) {
    std::vector<double> out;
    for (const auto& ch : rep.channels) {
        if (!(ch.soi_amps > 0.0))
            throw ParameterError("SI suppression undefined: no SoI current at " + ch.receiver);
        out.push_back(suppression_ratio_db(ch.si_amps, ch.soi_amps));
    }
    return out;
}

/// Case-3 excitation (or `drive_case`) at each node distance.
inline SweepTable distance_sweep(const FdLinkParams& p, double d_min, double d_max, int steps,
                                 CaseId drive_case = CaseId::case3) {
    detail::require_param(d_min > 0.0, "d_min must be > 0");
    p.validate();
    const auto grid = sweep_grid(d_min, d_max, steps);
    const auto drives = detail::case_drives(drive_case, p.drive_amplitude_a);
    auto rows = parallel_map(grid.size(), [&](std::size_t i) {
        FdLinkParams q = p;
        q.node_distance_m = grid[i];
        const auto net = build_fd_link(q, 0.0, RotationAxis::vertical, drives);
        std::vector<Complex> cur(4);
        if (p.drive_amplitude_a > 0.0) cur = solve_steady_state(net, p.f0_hz).currents();
        return make_row(grid[i], cur);
    });
    return SweepTable("distance_m", {"A1", "A2", "B1", "B2"}, std::move(rows));
}

/// Case-3 excitation (or `drive_case`) with node B rotated about `axis`
/// through its center.
inline SweepTable orientation_sweep(const FdLinkParams& p, const std::vector<double>& angles_deg,
                                    RotationAxis axis = RotationAxis::vertical,
                                    CaseId drive_case = CaseId::case3) {
    p.validate();
    detail::require_param(!angles_deg.empty(), "orientation sweep needs at least one angle");
    for (double a : angles_deg)
        detail::require_param(a >= 0.0 && a <= 90.0, "orientation angles must lie in [0, 90] degrees");
    const auto drives = detail::case_drives(drive_case, p.drive_amplitude_a);
    auto rows = parallel_map(angles_deg.size(), [&](std::size_t i) {
        const auto net = build_fd_link(p, angles_deg[i], axis, drives);
        std::vector<Complex> cur(4);
        if (p.drive_amplitude_a > 0.0) cur = solve_steady_state(net, p.f0_hz).currents();
        return make_row(angles_deg[i], cur);
    });
    return SweepTable("angle_deg", {"A1", "A2", "B1", "B2"}, std::move(rows));
}

enum class SweepKind { frequency, distance, angle };

struct SweepSpec {
    SweepKind kind = SweepKind::frequency;
    double min = 30000.0;
    double max = 60000.0;
    int steps = 301;
    RotationAxis axis = RotationAxis::vertical;
    Spacing spacing = Spacing::linear;

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

/// A named reproduction: link parameters, which transmitters fire, and the sweep.
struct Preset {
    std::string name;
    FdLinkParams params;
    CaseId drive_case = CaseId::case3;
    SweepSpec sweep;
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"case1", "case2", "case3", "fig-distance", "fig-orientation"};
    return names;
}

inline std::optional<Preset> find_preset(const std::string& name) {
    Preset p;
    p.name = name;
    if (name == "case1" || name == "case2" || name == "case3") {
        p.drive_case = name == "case1" ? CaseId::case1 : name == "case2" ? CaseId::case2 : CaseId::case3;
        p.sweep = {SweepKind::frequency, 30000.0, 60000.0, 301};
        return p;
    }
    if (name == "fig-distance") {
        // The distance figure was produced in 0.1 S/m water.
        p.params.medium = Medium{0.1};
        p.sweep = {SweepKind::distance, 0.3, 2.0, 171};
        return p;
    }
    if (name == "fig-orientation") {
        p.params.node_distance_m = 0.675;
        p.sweep = {SweepKind::angle, 0.0, 90.0, 7, RotationAxis::vertical};
        return p;
    }
    return std::nullopt;
}

/// Runs `sweep` on the link with `drive_case` transmitters active.
inline SweepTable run_link_sweep(const FdLinkParams& p, CaseId drive_case, const SweepSpec& sweep) {
    switch (sweep.kind) {
        case SweepKind::frequency: {
            const auto net = build_fd_link(p, 0.0, RotationAxis::vertical,
                                           detail::case_drives(drive_case, p.drive_amplitude_a));
            if (p.drive_amplitude_a == 0.0) {
                std::vector<SweepRow> rows;
                for (double f : sweep_grid(sweep.min, sweep.max, sweep.steps, sweep.spacing))
                    rows.push_back(make_row(f, std::vector<Complex>(4)));
                return SweepTable("frequency_hz", net.ids(), std::move(rows));
            }
            return frequency_sweep(net, sweep.min, sweep.max, sweep.steps, sweep.spacing);
        }
        case SweepKind::distance:
            return distance_sweep(p, sweep.min, sweep.max, sweep.steps, drive_case);
        case SweepKind::angle:
            return orientation_sweep(p, sweep_grid(sweep.min, sweep.max, sweep.steps), sweep.axis, drive_case);
    }
    throw ParameterError("unknown sweep kind");
}

} // namespace fdmi
