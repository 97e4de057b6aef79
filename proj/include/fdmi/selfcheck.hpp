#pragma once

// Physics invariant suite shared by the `selfcheck` subcommand and the
// acceptance tests. Every check is deterministic for a fixed seed.

#include <fdmi/circuit.hpp>
#include <fdmi/magnetics.hpp>
#include <fdmi/network.hpp>
#include <fdmi/scenarios.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fdmi {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

inline double relative_error(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double relative_error(Complex a, Complex b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Least-squares slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Random coil pairs for invariant and oracle checks.
class GeometrySampler {
public:
    explicit GeometrySampler(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    Vec3 unit() {
        std::normal_distribution<double> g;
        while (true) {
            const Vec3 v{g(rng_), g(rng_), g(rng_)};
            const double n = v.norm();
            if (n > 1e-6) return (1.0 / n) * v;
        }
    }

    CoilSpec coil(std::string id, Vec3 center, double radius) {
        CoilParams p;
        p.id = std::move(id);
        p.center = center;
        p.normal = unit();
        p.radius_m = radius;
        p.turns = static_cast<int>(uniform(1.0, 101.0));
        p.wire_radius_m = 2.12e-4;
        p.tuning = SeriesCapacitor{uniform(1e-9, 1e-8)};
        return CoilSpec(std::move(p));
    }

    /// Pair with center separation in [lo, hi] x max radius, filaments disjoint.
    std::pair<CoilSpec, CoilSpec> pair(double lo, double hi) {
        while (true) {
            const double r1 = uniform(0.02, 0.2), r2 = uniform(0.02, 0.2);
            const double d = uniform(lo, hi) * std::max(r1, r2);
            CoilSpec a = coil("T", {uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)}, r1);
            CoilSpec b = coil("R", a.center() + d * unit(), r2);
            if (!filaments_intersect(a, b)) return {std::move(a), std::move(b)};
        }
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

namespace detail {

inline CheckResult make_check(std::string name, bool ok, double worst, const std::string& what) {
    std::ostringstream s;
    s.precision(3);
    s << what << " " << std::scientific << worst;
    return {std::move(name), ok, s.str()};
}

/// Smallest distance between the sampled points of two loops.
inline double min_filament_gap(const CoilSpec& a, const CoilSpec& b, int segments) {
    const auto la = discretize(a, segments), lb = discretize(b, segments);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : la.points)
        for (const auto& q : lb.points) best = std::min(best, (p - q).norm());
    return best;
}

/// Random network of `n` coils with mixed drives; at least one active.
inline CoupledNetwork random_network(GeometrySampler& g, int n) {
    std::vector<CoilSpec> coils;
    for (int i = 0; i < n; ++i) {
        CoilParams p = g.coil("C" + std::to_string(i), {g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1)},
                              g.uniform(0.05, 0.15))
                           .params();
        p.inductance_override_h = g.uniform(1e-4, 1e-2);
        p.tuning = TuneTarget{g.uniform(2e4, 8e4)};
        coils.emplace_back(std::move(p));
    }
    std::vector<Drive> drives;
    for (int i = 0; i < n; ++i) {
        const double u = g.uniform(0, 1);
        if (i == 0 || u < 0.3)
            drives.push_back(Drive::current(g.uniform(0.1, 2.0), g.uniform(-kPi, kPi)));
        else if (u < 0.5)
            drives.push_back(Drive::voltage(g.uniform(0.1, 5.0), g.uniform(-kPi, kPi)));
        else
            drives.push_back(Drive::passive());
    }
    Medium medium{0.01};
    // Large coupling so the solve is not trivially diagonal.
    MutualMatrix m(coils.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto& ei = coils[i].inductance_override().value();
            const auto& ej = coils[j].inductance_override().value();
            m.set(i, j, g.uniform(-0.3, 0.3) * std::sqrt(ei * ej));
        }
    return CoupledNetwork(std::move(coils), medium, std::move(m), std::move(drives));
}

} // namespace detail

inline CheckResult check_reciprocity(std::uint64_t seed, int pairs = 40) {
    GeometrySampler g(seed);
    double worst = 0.0;
    for (int i = 0; i < pairs; ++i) {
        const auto [a, b] = g.pair(1.2, 10.0);
        worst = std::max(worst, relative_error(mutual_inductance_neumann(a, b, 128).value,
                                               mutual_inductance_neumann(b, a, 128).value));
        worst = std::max(worst, relative_error(mutual_inductance_dipole(a, b).value,
                                               mutual_inductance_dipole(b, a).value));
    }
    return detail::make_check("reciprocity", worst <= 1e-12, worst, "max relative |M(a,b)-M(b,a)|");
}

inline CheckResult check_passivity(std::uint64_t seed, int networks = 50) {
    GeometrySampler g(seed);
    double worst = 0.0;
    for (int i = 0; i < networks; ++i) {
        const auto net = detail::random_network(g, 2 + i % 5);
        const auto s = solve_steady_state(net, g.uniform(1e4, 1e5));
        double diss = 0.0;
        for (std::size_t k = 0; k < net.size(); ++k) diss += std::norm(s.currents()[k]) * net.elements()[k].resistance_ohm;
        worst = std::max(worst, relative_error(s.source_power(), diss));
    }
    return detail::make_check("passivity", worst <= 1e-9, worst, "max relative |P_src - sum |I|^2 R|");
}

inline CheckResult check_impedance_symmetry(std::uint64_t seed, int networks = 20) {
    GeometrySampler g(seed);
    bool ok = true;
    for (int i = 0; i < networks && ok; ++i) {
        const auto net = detail::random_network(g, 2 + i % 5);
        const auto z = impedance_matrix(net, g.uniform(1e4, 1e5));
        ok = z.entries() == z.entries().transpose();
    }
    return {"impedance_symmetry", ok, ok ? "Z == Z^T exactly" : "asymmetric impedance matrix"};
}

inline CheckResult check_superposition(std::uint64_t seed, int networks = 30) {
    GeometrySampler g(seed);
    double worst = 0.0;
    for (int i = 0; i < networks; ++i) {
        auto net = detail::random_network(g, 3 + i % 4);
        std::vector<Drive> both(net.size()), first(net.size()), second(net.size());
        both[0] = first[0] = Drive::current(g.uniform(0.1, 2), g.uniform(-kPi, kPi));
        both[1] = second[1] = Drive::current(g.uniform(0.1, 2), g.uniform(-kPi, kPi));
        const double f = g.uniform(1e4, 1e5);
        const auto sb = solve_steady_state(net.with_drives(both), f).currents();
        const auto s1 = solve_steady_state(net.with_drives(first), f).currents();
        const auto s2 = solve_steady_state(net.with_drives(second), f).currents();
        double scale = 0.0;
        for (const auto& c : sb) scale = std::max(scale, std::abs(c));
        for (std::size_t k = 0; k < sb.size(); ++k) worst = std::max(worst, std::abs(sb[k] - (s1[k] + s2[k])) / scale);
    }
    // Canonical link: case 3 = case 1 + case 2.
    const FdLinkParams p;
    const auto c1 = run_case(CaseId::case1, p).currents;
    const auto c2 = run_case(CaseId::case2, p).currents;
    const auto c3 = run_case(CaseId::case3, p).currents;
    for (std::size_t k = 0; k < 4; ++k) worst = std::max(worst, relative_error(c3[k], c1[k] + c2[k]));
    return detail::make_check("superposition", worst <= 1e-9, worst, "max relative superposition residual");
}

inline CheckResult check_distance_law() {
    CoilParams base;
    base.id = "T";
    base.radius_m = 0.1;
    base.turns = 10;
    const CoilSpec tx(base);
    // Far enough out (10r .. 40r) that the finite-loop correction to the
    // exact coupling stays below a few percent.
    std::vector<double> d, md, mn;
    for (int i = 0; i <= 15; ++i) {
        const double dist = 1.0 + 3.0 * i / 15.0;
        CoilParams rp = base;
        rp.id = "R";
        rp.center = {dist, 0, 0};
        const CoilSpec rx(rp);
        d.push_back(dist);
        md.push_back(mutual_inductance_dipole(tx, rx).value);
        mn.push_back(mutual_inductance_neumann(tx, rx, 256).value);
    }
    const double sd = loglog_slope(d, md), sn = loglog_slope(d, mn);

    const auto tab = distance_sweep(FdLinkParams{}, 1.0, 2.0, 21);
    std::vector<double> dist;
    for (const auto& r : tab.rows()) dist.push_back(r.value);
    const double sl = loglog_slope(dist, tab.amps_of("B1"));

    const bool ok = std::abs(sd + 3) <= 0.01 && std::abs(sn + 3) <= 0.05 && std::abs(sl + 3) <= 0.05;
    std::ostringstream s;
    s << "slopes dipole " << sd << ", neumann " << sn << ", link " << sl;
    return {"distance_law", ok, s.str()};
}

inline CheckResult check_rotation_law() {
    FdLinkParams p;
    p.node_distance_m = 0.675;
    std::vector<double> angles;
    for (int a = 0; a <= 90; a += 5) angles.push_back(a);
    const auto tab = orientation_sweep(p, angles);
    const auto b1 = tab.amps_of("B1");
    double worst = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i)
        worst = std::max(worst, std::abs(b1[i] / b1[0] - std::cos(angles[i] * kPi / 180.0)));
    return detail::make_check("rotation_law", worst <= 1e-6, worst, "max |I_B1(t)/I_B1(0) - cos t|");
}

inline CheckResult check_orthogonality_nulls() {
    FdLinkParams p;
    const auto dn = build_fd_link(p);
    p.mutual_method = MutualMethod::neumann;
    const auto nn = build_fd_link(p);
    const std::pair<std::size_t, std::size_t> cross[] = {{kA1, kA2}, {kB1, kB2}, {kA1, kB2}, {kA2, kB1}};
    bool dipole_exact = true;
    double worst = 0.0;
    for (auto [i, j] : cross) {
        dipole_exact = dipole_exact && dn.mutual()(i, j) == 0.0;
        worst = std::max(worst, std::abs(nn.mutual()(i, j)));
    }
    const bool ok = dipole_exact && worst < 1e-12;
    return detail::make_check("orthogonality_nulls", ok, worst,
                              std::string(dipole_exact ? "dipole cross terms exactly 0" : "dipole cross term nonzero") +
                                  "; max neumann cross |M| (H)");
}

inline CheckResult check_coupling_bound(std::uint64_t seed, int pairs = 60) {
    GeometrySampler g(seed);
    double worst = 0.0;
    int done = 0;
    while (done < pairs) {
        // Half the pairs close in, half in the far field.
        const auto [a, b] = done % 2 ? g.pair(5.0, 10.0) : g.pair(0.3, 5.0);
        if (detail::min_filament_gap(a, b, 128) <= bundle_radius(a) + bundle_radius(b)) continue;
        const double k = coupling_coefficient(mutual_inductance_neumann(a, b, 256).value, self_inductance(a),
                                              self_inductance(b));
        worst = std::max(worst, std::abs(k));
        ++done;
    }
    return detail::make_check("coupling_bound", worst <= 1.0, worst, "max |k|");
}

inline CheckResult check_tuning_roundtrip(std::uint64_t seed, int samples = 1000) {
    GeometrySampler g(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double c = std::pow(10.0, g.uniform(-12, -6));
        const double f = std::pow(10.0, g.uniform(3, 7));
        worst = std::max(worst, relative_error(tuning_capacitance(inductance_from_tuning(c, f), f), c));
    }
    return detail::make_check("tuning_roundtrip", worst <= 1e-12, worst, "max relative L<->C round-trip error");
}

inline CheckResult check_skin_depth() {
    const double d = skin_depth(Medium{0.01}, 46770.0);
    std::ostringstream s;
    s << "skin depth at 0.01 S/m, 46.77 kHz = " << d << " m";
    return {"skin_depth", std::abs(d - 23.3) <= 0.1, s.str()};
}

inline std::vector<CheckResult> run_selfcheck(std::uint64_t seed = 20240101) {
    return {check_reciprocity(seed),      check_passivity(seed + 1),       check_impedance_symmetry(seed + 2),
            check_superposition(seed + 3), check_distance_law(),           check_rotation_law(),
            check_orthogonality_nulls(),   check_coupling_bound(seed + 4), check_tuning_roundtrip(seed + 5),
            check_skin_depth()};
}

} // namespace fdmi
