#pragma once

#include <fdmi/magnetics.hpp>
#include <fdmi/model.hpp>

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fdmi {

/// Per-coil circuit elements after tuning resolution.
struct LoopElements {
    double inductance_h = 0.0;
    double capacitance_f = 0.0;
    double resistance_ohm = 0.0;
};

/// Resolves L (override, else formula), C (given, else from tune_to) and R.
inline LoopElements resolve_loop(const CoilSpec& coil, double relative_permeability = 1.0) {
    LoopElements e;
    if (coil.inductance_override()) {
        e.inductance_h = *coil.inductance_override();
    } else {
        try {
            e.inductance_h = self_inductance(coil, relative_permeability);
        } catch (const GeometryError& err) {
            if (std::holds_alternative<TuneTarget>(coil.tuning()))
                throw ConfigError("coils." + coil.id(),
                                  std::string("unresolved tuning: tune_to needs an inductance but ") + err.what());
            throw;
        }
    }
    if (const auto* c = std::get_if<SeriesCapacitor>(&coil.tuning()))
        e.capacitance_f = c->farads;
    else
        e.capacitance_f = tuning_capacitance(e.inductance_h, std::get<TuneTarget>(coil.tuning()).hertz);
    e.resistance_ohm = series_resistance(coil, coil.resistivity()) * coil.ac_resistance_factor();
    return e;
}

/// N coils, their medium, symmetric mutual inductances and per-coil drives.
/// Loop elements are resolved once on construction.
class CoupledNetwork {
public:
    CoupledNetwork(std::vector<CoilSpec> coils, Medium medium, MutualMatrix mutual, std::vector<Drive> drives)
        : coils_(std::move(coils)), medium_(std::move(medium)), mutual_(std::move(mutual)),
          drives_(std::move(drives)) {
        using detail::require;
        require(!coils_.empty(), "network.nonempty", "network needs at least one coil");
        require(mutual_.size() == coils_.size(), "network.mutual_size", "mutual matrix size != coil count");
        require(drives_.size() == coils_.size(), "network.drive_count", "one drive per coil required");
        std::set<std::string> ids;
        for (const auto& c : coils_)
            require(ids.insert(c.id()).second, "network.unique_ids", "duplicate coil id '" + c.id() + "'");
        elements_.reserve(coils_.size());
        for (const auto& c : coils_) elements_.push_back(resolve_loop(c, medium_.relative_permeability()));
    }

    std::size_t size() const noexcept { return coils_.size(); }
    const std::vector<CoilSpec>& coils() const noexcept { return coils_; }
    const Medium& medium() const noexcept { return medium_; }
    const MutualMatrix& mutual() const noexcept { return mutual_; }
    const std::vector<Drive>& drives() const noexcept { return drives_; }
    const std::vector<LoopElements>& elements() const noexcept { return elements_; }

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        for (const auto& c : coils_) out.push_back(c.id());
        return out;
    }

    std::size_t index_of(const std::string& id) const {
        for (std::size_t i = 0; i < coils_.size(); ++i)
            if (coils_[i].id() == id) return i;
        throw ParameterError("no coil '" + id + "' in network");
    }

    bool has_active_drive() const {
        for (const auto& d : drives_)
            if (!d.is_passive()) return true;
        return false;
    }

    /// Same coils and couplings, different drives.
    CoupledNetwork with_drives(std::vector<Drive> drives) const {
        return CoupledNetwork(coils_, medium_, mutual_, std::move(drives));
    }

private:
    std::vector<CoilSpec> coils_;
    Medium medium_;
    MutualMatrix mutual_;
    std::vector<Drive> drives_;
    std::vector<LoopElements> elements_;
};

/// Fills all pairwise mutual terms. `frequency_hz` only matters when
/// medium attenuation is enabled.
inline MutualMatrix compute_mutual_matrix(const std::vector<CoilSpec>& coils, const Medium& medium,
                                          const MutualOptions& opts, double frequency_hz) {
    MutualMatrix m(coils.size());
    for (std::size_t i = 0; i < coils.size(); ++i)
        for (std::size_t j = i + 1; j < coils.size(); ++j)
            m.set(i, j, mutual_inductance(coils[i], coils[j], opts, medium, frequency_hz));
    return m;
}

} // namespace fdmi
