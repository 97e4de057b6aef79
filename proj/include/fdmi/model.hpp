#pragma once

// Domain types shared across the library. Every type validates its
// invariants in its constructor and is immutable afterwards.
//
// Phasor convention: e^{+jwt}, inductive reactance +jwL.

#include <fdmi/errors.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fdmi {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
/// Vacuum permeability, H/m (classical 4*pi*1e-7 value).
inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;
/// Annealed copper at 20 C, ohm*m.
inline constexpr double kCopperResistivity = 1.68e-8;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
    friend constexpr Vec3 operator*(Vec3 v, double s) { return s * v; }
    friend constexpr bool operator==(Vec3, Vec3) = default;

    constexpr double dot(Vec3 o) const { return x * o.x + y * o.y + z * o.z; }
    constexpr Vec3 cross(Vec3 o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    Vec3 normalized() const {
        const double n = norm();
        return {x / n, y / n, z / n};
    }
};

/// Rotates `v` by `angle_rad` about the unit axis `axis` (Rodrigues).
inline Vec3 rotate(Vec3 v, Vec3 axis, double angle_rad) {
    const double c = std::cos(angle_rad);
    const double s = std::sin(angle_rad);
    return c * v + s * axis.cross(v) + ((1.0 - c) * axis.dot(v)) * axis;
}

/// Series tuning capacitor value, farads.
struct SeriesCapacitor {
    double farads;
    friend bool operator==(const SeriesCapacitor&, const SeriesCapacitor&) = default;
};

/// Ask for the capacitor that resonates the coil at this frequency, Hz.
struct TuneTarget {
    double hertz;
    friend bool operator==(const TuneTarget&, const TuneTarget&) = default;
};

using Tuning = std::variant<SeriesCapacitor, TuneTarget>;

/// Plain field bundle used to construct a CoilSpec.
struct CoilParams {
    std::string id;
    Vec3 center;
    Vec3 normal{1.0, 0.0, 0.0};
    double radius_m = 0.1;
    int turns = 1;
    double wire_radius_m = 2.12e-4;
    Tuning tuning = SeriesCapacitor{1e-9};
    std::optional<double> inductance_override_h;
    double resistivity_ohm_m = kCopperResistivity;
    /// Constant multiplier on the DC loop resistance (AC/litz losses).
    double ac_resistance_factor = 1.0;
};

/// A multi-turn circular coil modeled as one filamentary loop scaled by N.
class CoilSpec {
public:
    explicit CoilSpec(CoilParams p) : p_(std::move(p)) {
        using detail::require;
        require(!p_.id.empty(), "coil.id", "coil id must be non-empty");
        const std::string who = "coil '" + p_.id + "'";
        require(std::isfinite(p_.center.x) && std::isfinite(p_.center.y) && std::isfinite(p_.center.z),
                "coil.center", who + " center must be finite");
        require(std::abs(p_.normal.norm() - 1.0) <= 1e-9, "coil.normal_unit",
                who + " normal must have unit length within 1e-9");
        require(p_.radius_m > 0.0 && std::isfinite(p_.radius_m), "coil.radius_positive",
                who + " radius must be > 0");
        require(p_.turns >= 1, "coil.turns_positive", who + " turns must be >= 1");
        require(p_.wire_radius_m > 0.0, "coil.wire_radius_positive", who + " wire radius must be > 0");
        require(p_.wire_radius_m < p_.radius_m, "coil.wire_thinner_than_loop",
                who + " wire radius must be smaller than the loop radius");
        if (const auto* c = std::get_if<SeriesCapacitor>(&p_.tuning)) {
            require(c->farads > 0.0 && std::isfinite(c->farads), "coil.capacitance_positive",
                    who + " capacitance must be > 0");
        } else {
            const double f = std::get<TuneTarget>(p_.tuning).hertz;
            require(f > 0.0 && std::isfinite(f), "coil.tune_to_positive", who + " tune_to must be > 0");
        }
        if (p_.inductance_override_h) {
            require(*p_.inductance_override_h > 0.0 && std::isfinite(*p_.inductance_override_h),
                    "coil.inductance_override_positive", who + " inductance override must be > 0");
        }
        require(p_.resistivity_ohm_m > 0.0, "coil.resistivity_positive", who + " resistivity must be > 0");
        require(p_.ac_resistance_factor > 0.0, "coil.ac_factor_positive",
                who + " AC resistance factor must be > 0");
    }

    const std::string& id() const noexcept { return p_.id; }
    Vec3 center() const noexcept { return p_.center; }
    Vec3 normal() const noexcept { return p_.normal; }
    double radius() const noexcept { return p_.radius_m; }
    int turns() const noexcept { return p_.turns; }
    double wire_radius() const noexcept { return p_.wire_radius_m; }
    const Tuning& tuning() const noexcept { return p_.tuning; }
    std::optional<double> inductance_override() const noexcept { return p_.inductance_override_h; }
    double resistivity() const noexcept { return p_.resistivity_ohm_m; }
    double ac_resistance_factor() const noexcept { return p_.ac_resistance_factor; }
    const CoilParams& params() const noexcept { return p_; }

    /// Same coil at a new pose.
    CoilSpec with_pose(Vec3 center, Vec3 normal) const {
        CoilParams p = p_;
        p.center = center;
        p.normal = normal;
        return CoilSpec(std::move(p));
    }

    friend bool operator==(const CoilSpec& a, const CoilSpec& b) {
        const auto& x = a.p_;
        const auto& y = b.p_;
        return x.id == y.id && x.center == y.center && x.normal == y.normal && x.radius_m == y.radius_m &&
               x.turns == y.turns && x.wire_radius_m == y.wire_radius_m && x.tuning == y.tuning &&
               x.inductance_override_h == y.inductance_override_h &&
               x.resistivity_ohm_m == y.resistivity_ohm_m && x.ac_resistance_factor == y.ac_resistance_factor;
    }

private:
    CoilParams p_;
};

/// Surrounding medium. Permittivity is carried for reporting only.
class Medium {
public:
    explicit Medium(double conductivity_s_per_m = 0.0, double relative_permeability = 1.0,
                    double relative_permittivity = 81.0)
        : sigma_(conductivity_s_per_m), mu_r_(relative_permeability), eps_r_(relative_permittivity) {
        detail::require(sigma_ >= 0.0 && std::isfinite(sigma_), "medium.conductivity_nonnegative",
                        "conductivity must be >= 0");
        detail::require(mu_r_ > 0.0 && std::isfinite(mu_r_), "medium.permeability_positive",
                        "relative permeability must be > 0");
        detail::require(std::isfinite(eps_r_), "medium.permittivity_finite", "relative permittivity must be finite");
    }

    double conductivity() const noexcept { return sigma_; }
    double relative_permeability() const noexcept { return mu_r_; }
    double relative_permittivity() const noexcept { return eps_r_; }

    friend bool operator==(const Medium&, const Medium&) = default;

private:
    double sigma_;
    double mu_r_;
    double eps_r_;
};

enum class DriveKind { current_source, voltage_source, passive };

class Drive {
public:
    Drive() = default;
    Drive(DriveKind kind, double amplitude, double phase_rad = 0.0)
        : kind_(kind), amplitude_(amplitude), phase_(phase_rad) {
        detail::require(amplitude_ >= 0.0 && std::isfinite(amplitude_), "drive.amplitude_nonnegative",
                        "drive amplitude must be >= 0");
        detail::require(std::isfinite(phase_), "drive.phase_finite", "drive phase must be finite");
        detail::require(kind_ != DriveKind::passive || amplitude_ == 0.0, "drive.passive_zero",
                        "a passive drive must have zero amplitude");
    }

    static Drive current(double amps, double phase_rad = 0.0) { return {DriveKind::current_source, amps, phase_rad}; }
    static Drive voltage(double volts, double phase_rad = 0.0) { return {DriveKind::voltage_source, volts, phase_rad}; }
    static Drive passive() { return {}; }

    DriveKind kind() const noexcept { return kind_; }
    double amplitude() const noexcept { return amplitude_; }
    double phase() const noexcept { return phase_; }
    bool is_passive() const noexcept { return kind_ == DriveKind::passive; }
    Complex phasor() const { return std::polar(amplitude_, phase_); }

    friend bool operator==(const Drive&, const Drive&) = default;

private:
    DriveKind kind_ = DriveKind::passive;
    double amplitude_ = 0.0;
    double phase_ = 0.0;
};

/// Symmetric N x N mutual-inductance matrix with a zero diagonal. Only the
/// strict upper triangle is stored; reads mirror it.
class MutualMatrix {
public:
    explicit MutualMatrix(std::size_t n = 0) : n_(n), upper_(n * (n > 0 ? n - 1 : 0) / 2, 0.0) {}

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t i, std::size_t j) const {
        if (i == j) return 0.0;
        return upper_[index(i, j)];
    }

    void set(std::size_t i, std::size_t j, double henries) {
        detail::require_param(i != j, "mutual matrix diagonal is fixed at zero");
        detail::require_param(std::isfinite(henries), "mutual inductance must be finite");
        upper_[index(i, j)] = henries;
    }

    friend bool operator==(const MutualMatrix&, const MutualMatrix&) = default;

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        detail::require_param(i < n_ && j < n_, "mutual matrix index out of range");
        if (i > j) std::swap(i, j);
        // Row-major strict upper triangle.
        return i * (2 * n_ - i - 1) / 2 + (j - i - 1);
    }

    std::size_t n_;
    std::vector<double> upper_;
};

/// Steady-state loop currents at one frequency. Powers use Re(V I*) with the
/// phasor amplitudes as given.
class SteadyState {
public:
    SteadyState(double frequency_hz, std::vector<Complex> currents, double source_power_w,
                double dissipated_power_w, std::optional<std::string> warning = std::nullopt)
        : frequency_(frequency_hz), currents_(std::move(currents)), source_power_(source_power_w),
          dissipated_power_(dissipated_power_w), warning_(std::move(warning)) {
        detail::require(frequency_ > 0.0, "steady_state.frequency_positive", "frequency must be > 0");
        for (const auto& c : currents_) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw NumericalError(frequency_, "non-finite loop current at " + std::to_string(frequency_) + " Hz");
        }
        const double tol = 1e-9 * std::max(1.0, std::abs(source_power_));
        if (!(std::abs(source_power_ - dissipated_power_) <= tol))
            throw NumericalError(frequency_, "energy balance violated at " + std::to_string(frequency_) +
                                                 " Hz: source " + std::to_string(source_power_) + " W vs dissipated " +
                                                 std::to_string(dissipated_power_) + " W");
    }

    double frequency() const noexcept { return frequency_; }
    const std::vector<Complex>& currents() const noexcept { return currents_; }
    double source_power() const noexcept { return source_power_; }
    double dissipated_power() const noexcept { return dissipated_power_; }
    /// Set when the solve was ill-conditioned (condition estimate > 1e12).
    const std::optional<std::string>& warning() const noexcept { return warning_; }

private:
    double frequency_;
    std::vector<Complex> currents_;
    double source_power_;
    double dissipated_power_;
    std::optional<std::string> warning_;
};

struct SweepRow {
    double value = 0.0;
    std::vector<double> amps;
    std::vector<double> phase_rad;
    friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

/// Ordered sweep results: one row per sweep value, |I| and phase per coil.
class SweepTable {
public:
    SweepTable(std::string variable_name, std::vector<std::string> coil_ids, std::vector<SweepRow> rows,
               std::vector<std::string> warnings = {})
        : variable_(std::move(variable_name)), coil_ids_(std::move(coil_ids)), rows_(std::move(rows)),
          warnings_(std::move(warnings)) {
        using detail::require;
        static const std::set<std::string> kNames{"frequency_hz", "distance_m", "angle_deg"};
        require(kNames.count(variable_) == 1, "sweep_table.variable_name",
                "unknown sweep variable '" + variable_ + "'");
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const auto& r = rows_[i];
            require(r.amps.size() == coil_ids_.size() && r.phase_rad.size() == coil_ids_.size(),
                    "sweep_table.row_width", "row " + std::to_string(i) + " width differs from coil count");
            require(std::isfinite(r.value), "sweep_table.finite", "non-finite sweep value");
            if (i > 0)
                require(r.value > rows_[i - 1].value, "sweep_table.increasing",
                        "sweep values must be strictly increasing (row " + std::to_string(i) + ")");
        }
    }

    const std::string& variable_name() const noexcept { return variable_; }
    const std::vector<std::string>& coil_ids() const noexcept { return coil_ids_; }
    const std::vector<SweepRow>& rows() const noexcept { return rows_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    std::size_t row_width() const noexcept { return 1 + 2 * coil_ids_.size(); }

    /// Column index of a coil id; throws ParameterError when absent.
    std::size_t column(const std::string& id) const {
        for (std::size_t i = 0; i < coil_ids_.size(); ++i)
            if (coil_ids_[i] == id) return i;
        throw ParameterError("no coil '" + id + "' in sweep table");
    }

    std::vector<double> amps_of(const std::string& id) const {
        const std::size_t c = column(id);
        std::vector<double> out;
        out.reserve(rows_.size());
        for (const auto& r : rows_) out.push_back(r.amps[c]);
        return out;
    }

    friend bool operator==(const SweepTable& a, const SweepTable& b) {
        return a.variable_ == b.variable_ && a.coil_ids_ == b.coil_ids_ && a.rows_ == b.rows_;
    }

private:
    std::string variable_;
    std::vector<std::string> coil_ids_;
    std::vector<SweepRow> rows_;
    std::vector<std::string> warnings_;
};

/// Builds a sweep row from solved currents. Zero currents get phase 0.
inline SweepRow make_row(double value, const std::vector<Complex>& currents) {
    SweepRow row;
    row.value = value;
    row.amps.reserve(currents.size());
    row.phase_rad.reserve(currents.size());
    for (const auto& c : currents) {
        const double mag = std::abs(c);
        row.amps.push_back(mag);
        row.phase_rad.push_back(mag == 0.0 ? 0.0 : std::arg(c) + 0.0);
    }
    return row;
}

} // namespace fdmi
