#pragma once

// Lumped magnetic quantities of circular coils: self-inductance, loop
// resistance, mutual inductance (dipole closed form and a Neumann double
// line integral), coupling coefficient and skin depth.

#include <fdmi/model.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace fdmi {

enum class MutualMethod { dipole, neumann };

inline constexpr int kDefaultNeumannSegments = 256;
inline constexpr int kMinNeumannSegments = 16;

struct MutualResult {
    double value = 0.0;  ///< henries, signed
    MutualMethod method = MutualMethod::dipole;
    /// 3(n_t.u)(n_r.u) - n_t.n_r; only set by the dipole route.
    std::optional<double> orientation_factor;
};

/// Effective radius of the close-packed turn bundle: wire_radius * sqrt(N).
inline double bundle_radius(const CoilSpec& coil) {
    return coil.wire_radius() * std::sqrt(static_cast<double>(coil.turns()));
}

/// Thin-ring inductance mu0 mur N^2 r [ln(8r/a) - 2] with a = bundle_radius.
/// Ignores any inductance override on the coil.
inline double self_inductance(const CoilSpec& coil, double relative_permeability = 1.0) {
    const double a = bundle_radius(coil);
    const double r = coil.radius();
    if (a >= r)
        throw GeometryError("coil '" + coil.id() + "': bundle thicker than loop (bundle radius " +
                            std::to_string(a) + " m >= loop radius " + std::to_string(r) + " m)");
    const double n = coil.turns();
    return kMu0 * relative_permeability * n * n * r * (std::log(8.0 * r / a) - 2.0);
}

inline double inductance_from_tuning(double capacitance_f, double f0_hz) {
    detail::require_param(capacitance_f > 0.0, "capacitance must be > 0");
    detail::require_param(f0_hz > 0.0, "tuning frequency must be > 0");
    const double w = 2.0 * kPi * f0_hz;
    return 1.0 / (w * w * capacitance_f);
}

inline double tuning_capacitance(double inductance_h, double f0_hz) {
    detail::require_param(inductance_h > 0.0, "inductance must be > 0");
    detail::require_param(f0_hz > 0.0, "tuning frequency must be > 0");
    const double w = 2.0 * kPi * f0_hz;
    return 1.0 / (w * w * inductance_h);
}

/// DC resistance of N turns of round wire: rho * N*2*pi*r / (pi a^2).
inline double series_resistance(const CoilSpec& coil, double resistivity_ohm_m) {
    detail::require_param(resistivity_ohm_m > 0.0, "resistivity must be > 0");
    const double length = coil.turns() * 2.0 * kPi * coil.radius();
    const double area = kPi * coil.wire_radius() * coil.wire_radius();
    return resistivity_ohm_m * length / area;
}

/// Point-dipole mutual inductance. Valid for separations well beyond both radii.
inline MutualResult mutual_inductance_dipole(const CoilSpec& tx, const CoilSpec& rx,
                                             double relative_permeability = 1.0) {
    const Vec3 sep = rx.center() - tx.center();
    const double d = sep.norm();
    if (d < 1e-9)
        throw GeometryError("coils '" + tx.id() + "' and '" + rx.id() +
                            "' share a center: dipole model is singular, use the neumann method");
    const Vec3 u = (1.0 / d) * sep;
    const double factor =
        3.0 * tx.normal().dot(u) * rx.normal().dot(u) - tx.normal().dot(rx.normal());
    const double rt2 = tx.radius() * tx.radius();
    const double rr2 = rx.radius() * rx.radius();
    const double value = kMu0 * relative_permeability * kPi * tx.turns() * rx.turns() * rt2 * rr2 /
                         (4.0 * d * d * d) * factor;
    return {value, MutualMethod::dipole, factor};
}

namespace detail {

/// Right-handed in-plane basis (a, b) with a x b = n.
inline std::array<Vec3, 2> loop_basis(Vec3 n) {
    const double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    Vec3 e{0.0, 0.0, 1.0};
    if (ax <= ay && ax <= az)
        e = {1.0, 0.0, 0.0};
    else if (ay <= az)
        e = {0.0, 1.0, 0.0};
    const Vec3 a = n.cross(e).normalized();
    return {a, n.cross(a)};
}

struct LoopSamples {
    std::vector<Vec3> points;
    std::vector<Vec3> tangents;  ///< dl, already scaled by segment length
};

inline LoopSamples discretize(const CoilSpec& coil, int segments) {
    const auto [a, b] = loop_basis(coil.normal());
    const double r = coil.radius();
    const double dt = 2.0 * kPi / segments;
    LoopSamples s;
    s.points.reserve(segments);
    s.tangents.reserve(segments);
    for (int k = 0; k < segments; ++k) {
        const double t = (k + 0.5) * dt;
        const double c = std::cos(t), sn = std::sin(t);
        s.points.push_back(coil.center() + r * (c * a + sn * b));
        s.tangents.push_back((r * dt) * ((-sn) * a + c * b));
    }
    return s;
}

} // namespace detail

/// True when the two filamentary loops share a point.
inline bool filaments_intersect(const CoilSpec& c1, const CoilSpec& c2) {
    const double tol = 1e-9 * std::max(c1.radius(), c2.radius());
    const auto [a1, b1] = detail::loop_basis(c1.normal());
    const Vec3 n2 = c2.normal();
    const Vec3 off = c1.center() - c2.center();
    // Loop 1 meets the plane of loop 2 where A cos t + B sin t + C = 0.
    const double A = c1.radius() * a1.dot(n2);
    const double B = c1.radius() * b1.dot(n2);
    const double C = off.dot(n2);
    const double R = std::hypot(A, B);
    if (R <= tol) {
        if (std::abs(C) > tol) return false;
        const double d = off.norm();
        if (d <= tol) return std::abs(c1.radius() - c2.radius()) <= tol;
        return d <= c1.radius() + c2.radius() + tol && d >= std::abs(c1.radius() - c2.radius()) - tol;
    }
    if (std::abs(C) > R + tol) return false;
    const double base = std::atan2(B, A);
    const double spread = std::acos(std::clamp(-C / R, -1.0, 1.0));
    for (double t : {base + spread, base - spread}) {
        const Vec3 p = c1.center() + c1.radius() * (std::cos(t) * a1 + std::sin(t) * b1);
        if (std::abs((p - c2.center()).norm() - c2.radius()) <= tol) return true;
    }
    return false;
}

/// Neumann double line integral over uniformly segmented (midpoint) loops,
/// scaled by N_t N_r.
inline MutualResult mutual_inductance_neumann(const CoilSpec& tx, const CoilSpec& rx,
                                              int segments = kDefaultNeumannSegments,
                                              double relative_permeability = 1.0) {
    if (segments < kMinNeumannSegments)
        throw ParameterError("neumann integral needs at least " + std::to_string(kMinNeumannSegments) +
                             " segments, got " + std::to_string(segments));
    if (filaments_intersect(tx, rx))
        throw GeometryError("filaments of coils '" + tx.id() + "' and '" + rx.id() + "' intersect");
    const auto lt = detail::discretize(tx, segments);
    const auto lr = detail::discretize(rx, segments);
    // Compensated (Neumaier) summation. Each term is bitwise the same with
    // the coils swapped, so this keeps M(a,b) and M(b,a) equal to rounding
    // even when heavy cancellation leaves a near-null result.
    double sum = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < lt.points.size(); ++i)
        for (std::size_t j = 0; j < lr.points.size(); ++j) {
            const double term = lt.tangents[i].dot(lr.tangents[j]) / (lt.points[i] - lr.points[j]).norm();
            const double t = sum + term;
            carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
            sum = t;
        }
    sum += carry;
    const double value =
        static_cast<double>(tx.turns()) * rx.turns() * kMu0 * relative_permeability / (4.0 * kPi) * sum;
    return {value, MutualMethod::neumann, std::nullopt};
}

/// How mutual terms of a network are computed.
struct MutualOptions {
    MutualMethod method = MutualMethod::dipole;
    int segments = kDefaultNeumannSegments;
    /// Multiply M by exp(-d/skin_depth). Off by default.
    bool medium_attenuation = false;
};

inline double skin_depth(const Medium& medium, double frequency_hz) {
    detail::require_param(frequency_hz > 0.0, "frequency must be > 0");
    if (medium.conductivity() == 0.0) return std::numeric_limits<double>::infinity();
    const double w = 2.0 * kPi * frequency_hz;
    return std::sqrt(2.0 / (w * kMu0 * medium.relative_permeability() * medium.conductivity()));
}

/// Network-level mutual inductance. Under the dipole method, concentric
/// coils (where the dipole form is singular) use the exact null for
/// orthogonal normals and the Neumann integral otherwise.
inline double mutual_inductance(const CoilSpec& a, const CoilSpec& b, const MutualOptions& opts,
                                const Medium& medium, double frequency_hz) {
    const double mu_r = medium.relative_permeability();
    const double d = (b.center() - a.center()).norm();
    double m = 0.0;
    if (opts.method == MutualMethod::neumann) {
        m = mutual_inductance_neumann(a, b, opts.segments, mu_r).value;
    } else if (d >= 1e-9) {
        m = mutual_inductance_dipole(a, b, mu_r).value;
    } else if (std::abs(a.normal().dot(b.normal())) > 1e-12) {
        m = mutual_inductance_neumann(a, b, opts.segments, mu_r).value;
    }
    if (opts.medium_attenuation && m != 0.0) m *= std::exp(-d / skin_depth(medium, frequency_hz));
    return m;
}

inline double coupling_coefficient(double mutual_h, double l1_h, double l2_h) {
    detail::require_param(l1_h > 0.0 && l2_h > 0.0, "self-inductances must be > 0");
    return mutual_h / std::sqrt(l1_h * l2_h);
}

} // namespace fdmi
