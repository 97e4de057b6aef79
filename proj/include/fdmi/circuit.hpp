#pragma once

// Steady-state phasor analysis of magnetically coupled series-RLC loops.
//
//   Z_ii = R_i + j(w L_i - 1/(w C_i)),   Z_ij = j w M_ij
//
// Current-source loops are pinned to their phasors; the remaining loops
// solve Z_uu I_u = V_u - Z_ud I_d.

#include <fdmi/network.hpp>
#include <fdmi/parallel.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace fdmi {

/// Condition-number estimate above which a solve carries a warning.
inline constexpr double kConditionWarning = 1e12;

class ImpedanceMatrix {
public:
    ImpedanceMatrix(double frequency_hz, Eigen::MatrixXcd entries)
        : frequency_(frequency_hz), z_(std::move(entries)) {
        using detail::require;
        require(z_.rows() == z_.cols(), "impedance.square", "impedance matrix must be square");
        for (Eigen::Index i = 0; i < z_.rows(); ++i) {
            require(z_(i, i).real() > 0.0, "impedance.positive_resistance",
                    "diagonal real part must be > 0 (loop " + std::to_string(i) + ")");
            for (Eigen::Index j = i + 1; j < z_.cols(); ++j)
                require(z_(i, j) == z_(j, i), "impedance.symmetric", "impedance matrix must be symmetric");
        }
    }

    double frequency() const noexcept { return frequency_; }
    const Eigen::MatrixXcd& entries() const noexcept { return z_; }
    Complex operator()(Eigen::Index i, Eigen::Index j) const { return z_(i, j); }
    Eigen::Index size() const noexcept { return z_.rows(); }

private:
    double frequency_;
    Eigen::MatrixXcd z_;
};

inline ImpedanceMatrix impedance_matrix(const CoupledNetwork& net, double frequency_hz) {
    detail::require_param(frequency_hz > 0.0 && std::isfinite(frequency_hz), "frequency must be > 0");
    const double w = 2.0 * kPi * frequency_hz;
    const auto n = static_cast<Eigen::Index>(net.size());
    Eigen::MatrixXcd z(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& e = net.elements()[i];
        z(i, i) = Complex(e.resistance_ohm, w * e.inductance_h - 1.0 / (w * e.capacitance_f));
        for (Eigen::Index j = i + 1; j < n; ++j) {
            z(i, j) = Complex(0.0, w * net.mutual()(i, j));
            z(j, i) = z(i, j);
        }
    }
    return ImpedanceMatrix(frequency_hz, std::move(z));
}

inline double resonant_frequency(double inductance_h, double capacitance_f) {
    detail::require_param(inductance_h > 0.0 && capacitance_f > 0.0, "L and C must be > 0");
    return 1.0 / (2.0 * kPi * std::sqrt(inductance_h * capacitance_f));
}

inline SteadyState solve_steady_state(const CoupledNetwork& net, double frequency_hz) {
    if (!net.has_active_drive()) throw ConfigError("drives", "all loops are passive: nothing to solve");
    const ImpedanceMatrix zm = impedance_matrix(net, frequency_hz);
    const auto& z = zm.entries();
    const auto n = static_cast<Eigen::Index>(net.size());

    std::vector<Eigen::Index> pinned, unknown;
    Eigen::VectorXcd current = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd emf = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Drive& d = net.drives()[i];
        if (d.kind() == DriveKind::current_source) {
            pinned.push_back(i);
            current(i) = d.phasor();
        } else {
            unknown.push_back(i);
            if (d.kind() == DriveKind::voltage_source) emf(i) = d.phasor();
        }
    }

    std::optional<std::string> warning;
    if (!unknown.empty()) {
        const auto nu = static_cast<Eigen::Index>(unknown.size());
        Eigen::MatrixXcd zuu(nu, nu);
        Eigen::VectorXcd rhs(nu);
        for (Eigen::Index a = 0; a < nu; ++a) {
            rhs(a) = emf(unknown[a]);
            for (Eigen::Index b = 0; b < nu; ++b) zuu(a, b) = z(unknown[a], unknown[b]);
            for (Eigen::Index p : pinned) rhs(a) -= z(unknown[a], p) * current(p);
        }
        const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(zuu);
        const double rcond = lu.rcond();
        if (!(rcond > 0.0) || !std::isfinite(rcond)) {
            std::ostringstream msg;
            msg << "singular passive partition at " << frequency_hz << " Hz";
            throw NumericalError(frequency_hz, msg.str());
        }
        if (1.0 / rcond > kConditionWarning) {
            std::ostringstream msg;
            msg << "ill-conditioned solve at " << frequency_hz << " Hz (condition estimate " << 1.0 / rcond << ")";
            warning = msg.str();
        }
        const Eigen::VectorXcd iu = lu.solve(rhs);
        for (Eigen::Index a = 0; a < nu; ++a) current(unknown[a]) = iu(a);
    }

    // Loop voltages the sources must supply; zero for passive loops.
    Eigen::VectorXcd v = z * current;
    double source = 0.0;
    double dissipated = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Drive& d = net.drives()[i];
        if (d.kind() == DriveKind::voltage_source) source += (emf(i) * std::conj(current(i))).real();
        if (d.kind() == DriveKind::current_source) source += (v(i) * std::conj(current(i))).real();
        dissipated += std::norm(current(i)) * net.elements()[i].resistance_ohm;
    }
    std::vector<Complex> out(current.data(), current.data() + n);
    return SteadyState(frequency_hz, std::move(out), source, dissipated, std::move(warning));
}

enum class Spacing { linear, logarithmic };

/// `steps` grid points over [lo, hi]; endpoints are exact.
inline std::vector<double> sweep_grid(double lo, double hi, int steps, Spacing spacing = Spacing::linear) {
    detail::require_param(steps >= 2, "a sweep needs at least 2 steps");
    detail::require_param(lo < hi, "sweep bounds must satisfy min < max");
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / (steps - 1);
        g[i] = spacing == Spacing::linear ? lo + (hi - lo) * t : lo * std::pow(hi / lo, t);
    }
    g.front() = lo;
    g.back() = hi;
    return g;
}

inline SweepTable frequency_sweep(const CoupledNetwork& net, double f_min, double f_max, int steps,
                                  Spacing spacing = Spacing::linear) {
    detail::require_param(f_min > 0.0, "f_min must be > 0");
    const auto grid = sweep_grid(f_min, f_max, steps, spacing);
    auto states = parallel_map(grid.size(), [&](std::size_t i) {
        try {
            return solve_steady_state(net, grid[i]);
        } catch (const NumericalError& e) {
            std::ostringstream msg;
            msg << "frequency sweep failed at " << grid[i] << " Hz: " << e.what();
            throw NumericalError(grid[i], msg.str());
        }
    });
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
    rows.reserve(states.size());
    for (const auto& s : states) {
        rows.push_back(make_row(s.frequency(), s.currents()));
        if (s.warning()) warnings.push_back(*s.warning());
    }
    return SweepTable("frequency_hz", net.ids(), std::move(rows), std::move(warnings));
}

} // namespace fdmi
