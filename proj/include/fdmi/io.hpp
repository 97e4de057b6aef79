#pragma once

// Scenario documents (JSON, strict schema, SI unit suffixes in key names)
// and byte-deterministic CSV/JSON emission of sweep tables.

#include <fdmi/circuit.hpp>
#include <fdmi/network.hpp>
#include <fdmi/scenarios.hpp>

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace fdmi {

inline constexpr int kSchemaVersion = 1;

enum class OutputFormat { csv, json };

struct OutputSpec {
    OutputFormat format = OutputFormat::csv;
    std::string path = "-";
    friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct ScenarioConfig {
    int schema_version = kSchemaVersion;
    Medium medium;
    /// Preset mode: link parameters after preset expansion.
    std::optional<std::string> preset;
    FdLinkParams params;
    /// Coil mode.
    std::vector<CoilSpec> coils;
    std::map<std::string, Drive> drives;
    MutualOptions mutual;
    std::optional<double> attenuation_frequency_hz;
    SweepSpec sweep;
    OutputSpec output;

    bool is_preset() const noexcept { return preset.has_value(); }

    friend bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
        return a.schema_version == b.schema_version && a.medium == b.medium && a.preset == b.preset &&
               a.params == b.params && a.coils == b.coils && a.drives == b.drives &&
               a.mutual.method == b.mutual.method && a.mutual.segments == b.mutual.segments &&
               a.mutual.medium_attenuation == b.mutual.medium_attenuation &&
               a.attenuation_frequency_hz == b.attenuation_frequency_hz && a.sweep == b.sweep &&
               a.output == b.output;
    }
};

// ---------------------------------------------------------------------------
// Enum names

namespace detail {

template <typename E>
struct EnumName {
    E value;
    const char* name;
};

inline constexpr EnumName<MutualMethod> kMethodNames[] = {{MutualMethod::dipole, "dipole"},
                                                         {MutualMethod::neumann, "neumann"}};
inline constexpr EnumName<DriveKind> kDriveNames[] = {{DriveKind::current_source, "current_source"},
                                                     {DriveKind::voltage_source, "voltage_source"},
                                                     {DriveKind::passive, "passive"}};
inline constexpr EnumName<SweepKind> kSweepNames[] = {
    {SweepKind::frequency, "frequency"}, {SweepKind::distance, "distance"}, {SweepKind::angle, "angle"}};
inline constexpr EnumName<RotationAxis> kAxisNames[] = {{RotationAxis::vertical, "vertical"},
                                                       {RotationAxis::node_axis, "node_axis"},
                                                       {RotationAxis::horizontal_transverse, "horizontal_transverse"}};
inline constexpr EnumName<Spacing> kSpacingNames[] = {{Spacing::linear, "linear"}, {Spacing::logarithmic, "log"}};
inline constexpr EnumName<OutputFormat> kFormatNames[] = {{OutputFormat::csv, "csv"}, {OutputFormat::json, "json"}};
inline constexpr EnumName<CaseId> kCaseNames[] = {
    {CaseId::case1, "case1"}, {CaseId::case2, "case2"}, {CaseId::case3, "case3"}};

template <typename E, std::size_t N>
const char* name_of(const EnumName<E> (&table)[N], E v) {
    for (const auto& e : table)
        if (e.value == v) return e.name;
    return "?";
}

template <typename E, std::size_t N>
std::optional<E> parse_enum(const EnumName<E> (&table)[N], std::string_view s) {
    for (const auto& e : table)
        if (s == e.name) return e.value;
    return std::nullopt;
}

template <typename E, std::size_t N>
std::string enum_choices(const EnumName<E> (&table)[N]) {
    std::string out;
    for (const auto& e : table) {
        if (!out.empty()) out += "|";
        out += e.name;
    }
    return out;
}

} // namespace detail

inline const char* to_string(MutualMethod m) { return detail::name_of(detail::kMethodNames, m); }
inline const char* to_string(CaseId c) { return detail::name_of(detail::kCaseNames, c); }

// ---------------------------------------------------------------------------
// Number formatting

/// Locale-independent decimal text with 9 significant digits. Exact zeros
/// (either sign) are written as "0.000000000".
inline std::string format_number(double v) {
    if (v == 0.0) return "0.000000000";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("", "not a number: '" + std::string(s) + "'");
    return v;
}

/// The double that `format_number` text reads back as.
inline double rounded(double v) { return parse_number(format_number(v)); }

// ---------------------------------------------------------------------------
// Schema reader

namespace detail {

using nlohmann::json;

/// Walks one JSON object, tracking its path and the keys consumed so that
/// unexpected keys can be reported.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "$" : path_, "expected an object");
    }

    std::string at(const std::string& key) const {
        if (key.empty()) return path_;
        return path_.empty() ? key : path_ + "." + key;
    }
    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = require(key);
        if (!v.is_number()) throw ConfigError(at(key), "expected a number");
        return v.get<double>();
    }
    double number_or(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }
    std::optional<double> maybe_number(const std::string& key) {
        if (!has(key)) return std::nullopt;
        return number(key);
    }

    int integer(const std::string& key) {
        const json& v = require(key);
        if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
        const auto i = v.get<long long>();
        if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max())
            throw ConfigError(at(key), "integer out of range");
        return static_cast<int>(i);
    }
    int integer_or(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }

    bool boolean_or(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = require(key);
        if (!v.is_boolean()) throw ConfigError(at(key), "expected a boolean");
        return v.get<bool>();
    }

    std::string string(const std::string& key) {
        const json& v = require(key);
        if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }

    template <typename E, std::size_t N>
    E enumeration(const std::string& key, const EnumName<E> (&table)[N]) {
        const std::string s = string(key);
        if (auto e = parse_enum(table, s)) return *e;
        throw ConfigError(at(key), "expected one of " + enum_choices(table) + ", got '" + s + "'");
    }
    template <typename E, std::size_t N>
    E enumeration_or(const std::string& key, const EnumName<E> (&table)[N], E fallback) {
        return has(key) ? enumeration(key, table) : fallback;
    }

    Vec3 vec3(const std::string& key) {
        const json& v = require(key);
        if (!v.is_array() || v.size() != 3) throw ConfigError(at(key), "expected an array of 3 numbers");
        for (const auto& e : v)
            if (!e.is_number()) throw ConfigError(at(key), "expected an array of 3 numbers");
        return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    }

    void reject_unknown() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown key");
    }

private:
    const json& require(const std::string& key) {
        if (!j_.contains(key)) throw ConfigError(at(key), "missing required key");
        return raw(key);
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

/// Runs a value-type constructor, turning invariant failures into
/// config errors located at `path`.
template <typename F>
auto at_path(const std::string& path, F&& make) {
    try {
        return make();
    } catch (const InvariantError& e) {
        throw ConfigError(path, std::string("invariant violated (") + e.what() + ")");
    } catch (const ParameterError& e) {
        throw ConfigError(path, e.what());
    }
}

inline Medium read_medium(ObjectReader r, const Medium& fallback) {
    Medium m = at_path(r.at(""), [&] {
        return Medium(r.number_or("conductivity_s_per_m", fallback.conductivity()),
                      r.number_or("relative_permeability", fallback.relative_permeability()),
                      r.number_or("relative_permittivity", fallback.relative_permittivity()));
    });
    r.reject_unknown();
    return m;
}

inline CoilSpec read_coil(ObjectReader r, const std::string& path) {
    CoilParams p;
    p.id = r.string("id");
    p.center = r.vec3("center_m");
    p.normal = r.vec3("normal");
    p.radius_m = r.number("radius_m");
    p.turns = r.integer("turns");
    p.wire_radius_m = r.number("wire_radius_m");
    const bool has_c = r.has("capacitance_f"), has_f = r.has("tune_to_hz");
    if (has_c == has_f)
        throw ConfigError(path, "coil '" + p.id + "': exactly one of capacitance_f or tune_to_hz is required (" +
                                    (has_c ? "both given" : "neither given") + ")");
    if (has_c)
        p.tuning = SeriesCapacitor{r.number("capacitance_f")};
    else
        p.tuning = TuneTarget{r.number("tune_to_hz")};
    p.inductance_override_h = r.maybe_number("inductance_override_h");
    p.resistivity_ohm_m = r.number_or("resistivity_ohm_m", kCopperResistivity);
    p.ac_resistance_factor = r.number_or("ac_resistance_factor", 1.0);
    r.reject_unknown();
    return at_path(path, [&] { return CoilSpec(p); });
}

inline Drive read_drive(ObjectReader r, const std::string& path) {
    const DriveKind kind = r.enumeration("kind", kDriveNames);
    const double amp = r.number_or("amplitude", 0.0);
    const double phase = r.number_or("phase_rad", 0.0);
    r.reject_unknown();
    return at_path(path, [&] { return Drive(kind, amp, phase); });
}

inline FdLinkParams read_params(ObjectReader r, FdLinkParams p) {
    p.node_distance_m = r.number_or("node_distance_m", p.node_distance_m);
    p.r_vertical_m = r.number_or("r_vertical_m", p.r_vertical_m);
    p.r_horizontal_m = r.number_or("r_horizontal_m", p.r_horizontal_m);
    p.turns = r.integer_or("turns", p.turns);
    p.f0_hz = r.number_or("f0_hz", p.f0_hz);
    p.c_vertical_f = r.number_or("c_vertical_f", p.c_vertical_f);
    p.c_horizontal_f = r.number_or("c_horizontal_f", p.c_horizontal_f);
    p.drive_amplitude_a = r.number_or("drive_amplitude_a", p.drive_amplitude_a);
    p.mutual_method = r.enumeration_or("mutual_method", kMethodNames, p.mutual_method);
    p.neumann_segments = r.integer_or("neumann_segments", p.neumann_segments);
    p.medium_attenuation = r.boolean_or("medium_attenuation", p.medium_attenuation);
    p.wire_radius_m = r.number_or("wire_radius_m", p.wire_radius_m);
    p.resistivity_ohm_m = r.number_or("resistivity_ohm_m", p.resistivity_ohm_m);
    r.reject_unknown();
    at_path(r.at(""), [&] {
        p.validate();
        return 0;
    });
    return p;
}

inline SweepSpec read_sweep(ObjectReader r, const std::optional<SweepSpec>& fallback) {
    SweepSpec s = fallback.value_or(SweepSpec{});
    const bool required = !fallback;
    s.kind = required ? r.enumeration("kind", kSweepNames) : r.enumeration_or("kind", kSweepNames, s.kind);
    s.min = required ? r.number("min") : r.number_or("min", s.min);
    s.max = required ? r.number("max") : r.number_or("max", s.max);
    s.steps = required ? r.integer("steps") : r.integer_or("steps", s.steps);
    s.axis = r.enumeration_or("axis", kAxisNames, s.axis);
    s.spacing = r.enumeration_or("spacing", kSpacingNames, s.spacing);
    r.reject_unknown();
    if (s.steps < 2) throw ConfigError(r.at("steps"), "a sweep needs at least 2 steps");
    if (!(s.min < s.max)) throw ConfigError(r.at("max"), "sweep requires min < max");
    if (s.kind != SweepKind::angle && !(s.min > 0.0))
        throw ConfigError(r.at("min"), "sweep minimum must be > 0");
    if (s.kind == SweepKind::angle && (s.min < 0.0 || s.max > 90.0))
        throw ConfigError(r.at("min"), "angle sweeps must lie within [0, 90] degrees");
    return s;
}

inline OutputSpec read_output(ObjectReader r) {
    OutputSpec o;
    o.format = r.enumeration_or("format", kFormatNames, o.format);
    if (r.has("path")) o.path = r.string("path");
    if (o.path.empty()) throw ConfigError(r.at("path"), "output path must be non-empty");
    r.reject_unknown();
    return o;
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace detail

/// Parses and fully validates a scenario JSON document.
inline ScenarioConfig parse_scenario_json(const nlohmann::json& doc) {
    using detail::ObjectReader;
    ObjectReader root(doc, "");
    ScenarioConfig cfg;
    cfg.schema_version = root.integer("schema_version");
    if (cfg.schema_version != kSchemaVersion)
        throw ConfigError("schema_version", "unsupported schema version " + std::to_string(cfg.schema_version) +
                                                " (expected " + std::to_string(kSchemaVersion) + ")");
    const bool has_preset = root.has("preset"), has_coils = root.has("coils");
    if (has_preset == has_coils)
        throw ConfigError(has_preset ? "coils" : "preset", "exactly one of 'preset' or 'coils' must be present");

    std::optional<SweepSpec> default_sweep;
    if (has_preset) {
        const std::string name = root.string("preset");
        const auto preset = find_preset(name);
        if (!preset) throw ConfigError("preset", "unknown preset '" + name + "'");
        cfg.preset = name;
        FdLinkParams params = preset->params;
        if (root.has("medium")) params.medium = detail::read_medium(ObjectReader(root.raw("medium"), "medium"), params.medium);
        if (root.has("params")) params = detail::read_params(ObjectReader(root.raw("params"), "params"), params);
        cfg.params = params;
        cfg.medium = params.medium;
        default_sweep = preset->sweep;
        for (const char* key : {"drives", "mutual"})
            if (root.has(key))
                throw ConfigError(key, "not allowed with a preset (link settings belong in 'params')");
    } else {
        if (root.has("params")) throw ConfigError("params", "only allowed together with 'preset'");
        cfg.medium = root.has("medium") ? detail::read_medium(ObjectReader(root.raw("medium"), "medium"), Medium{})
                                        : Medium{};
        const auto& coils = root.raw("coils");
        if (!coils.is_array() || coils.empty()) throw ConfigError("coils", "expected a non-empty array");
        std::set<std::string> ids;
        for (std::size_t i = 0; i < coils.size(); ++i) {
            const std::string path = "coils[" + std::to_string(i) + "]";
            cfg.coils.push_back(detail::read_coil(ObjectReader(coils[i], path), path));
            if (!ids.insert(cfg.coils.back().id()).second)
                throw ConfigError(path + ".id", "duplicate coil id '" + cfg.coils.back().id() + "'");
        }
        if (root.has("drives")) {
            const auto& drives = root.raw("drives");
            if (!drives.is_object()) throw ConfigError("drives", "expected an object keyed by coil id");
            for (auto it = drives.begin(); it != drives.end(); ++it) {
                const std::string path = "drives." + it.key();
                if (!ids.count(it.key())) throw ConfigError(path, "drive references unknown coil id '" + it.key() + "'");
                cfg.drives.emplace(it.key(), detail::read_drive(ObjectReader(it.value(), path), path));
            }
        }
        if (root.has("mutual")) {
            ObjectReader m(root.raw("mutual"), "mutual");
            cfg.mutual.method = m.enumeration_or("method", detail::kMethodNames, cfg.mutual.method);
            cfg.mutual.segments = m.integer_or("segments", cfg.mutual.segments);
            cfg.mutual.medium_attenuation = m.boolean_or("medium_attenuation", false);
            cfg.attenuation_frequency_hz = m.maybe_number("attenuation_frequency_hz");
            m.reject_unknown();
            if (cfg.mutual.segments < kMinNeumannSegments)
                throw ConfigError("mutual.segments", "must be >= " + std::to_string(kMinNeumannSegments));
            if (cfg.mutual.medium_attenuation && !(cfg.attenuation_frequency_hz.value_or(0.0) > 0.0))
                throw ConfigError("mutual.attenuation_frequency_hz",
                                  "a positive frequency is required when medium_attenuation is on");
        }
    }

    if (root.has("sweep"))
        cfg.sweep = detail::read_sweep(ObjectReader(root.raw("sweep"), "sweep"), default_sweep);
    else if (default_sweep)
        cfg.sweep = *default_sweep;
    else
        throw ConfigError("sweep", "missing required key");
    if (!has_preset && cfg.sweep.kind != SweepKind::frequency)
        throw ConfigError("sweep.kind", "distance and angle sweeps need the two-node link of a preset");

    if (root.has("output")) cfg.output = detail::read_output(ObjectReader(root.raw("output"), "output"));
    root.reject_unknown();
    return cfg;
}

/// Parses a UTF-8 JSON scenario. Syntax errors report line and column.
inline ScenarioConfig parse_scenario(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ConfigError("$", "syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                                   ": " + e.what());
    }
    return parse_scenario_json(doc);
}

// ---------------------------------------------------------------------------
// Overrides

/// Applies dotted-path `key=value` overrides to a scenario document. Paths
/// whose first segment is not a top-level key address `params`. Values are
/// read as JSON when they parse as JSON, otherwise as strings.
inline void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& overrides) {
    static const std::set<std::string> kRootKeys{"schema_version", "preset", "params", "medium", "coils",
                                                 "drives",         "mutual", "sweep",  "output"};
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override", "expected key=value, got '" + ov + "'");
        std::vector<std::string> path;
        std::stringstream ss(ov.substr(0, eq));
        for (std::string seg; std::getline(ss, seg, '.');) {
            if (seg.empty()) throw ConfigError("override", "empty path segment in '" + ov + "'");
            path.push_back(seg);
        }
        if (!kRootKeys.count(path.front())) path.insert(path.begin(), "params");
        const std::string raw = ov.substr(eq + 1);
        nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
        if (value.is_discarded()) value = raw;
        nlohmann::json* node = &doc;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            if (!node->is_object()) throw ConfigError("override", "'" + path[i] + "' is not an object in '" + ov + "'");
            node = &(*node)[path[i]];
            if (node->is_null()) *node = nlohmann::json::object();
        }
        if (!node->is_object()) throw ConfigError("override", "cannot apply '" + ov + "'");
        (*node)[path.back()] = std::move(value);
    }
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json medium_to_json(const Medium& m) {
    return {{"conductivity_s_per_m", m.conductivity()},
            {"relative_permeability", m.relative_permeability()},
            {"relative_permittivity", m.relative_permittivity()}};
}

inline nlohmann::json to_json(const ScenarioConfig& cfg) {
    using detail::name_of;
    nlohmann::json j;
    j["schema_version"] = cfg.schema_version;
    j["medium"] = medium_to_json(cfg.medium);
    if (cfg.preset) {
        const auto& p = cfg.params;
        j["preset"] = *cfg.preset;
        j["params"] = {{"node_distance_m", p.node_distance_m},
                       {"r_vertical_m", p.r_vertical_m},
                       {"r_horizontal_m", p.r_horizontal_m},
                       {"turns", p.turns},
                       {"f0_hz", p.f0_hz},
                       {"c_vertical_f", p.c_vertical_f},
                       {"c_horizontal_f", p.c_horizontal_f},
                       {"drive_amplitude_a", p.drive_amplitude_a},
                       {"mutual_method", name_of(detail::kMethodNames, p.mutual_method)},
                       {"neumann_segments", p.neumann_segments},
                       {"medium_attenuation", p.medium_attenuation},
                       {"wire_radius_m", p.wire_radius_m},
                       {"resistivity_ohm_m", p.resistivity_ohm_m}};
    } else {
        auto& coils = j["coils"] = nlohmann::json::array();
        for (const auto& c : cfg.coils) {
            nlohmann::json cj{{"id", c.id()},
                              {"center_m", {c.center().x, c.center().y, c.center().z}},
                              {"normal", {c.normal().x, c.normal().y, c.normal().z}},
                              {"radius_m", c.radius()},
                              {"turns", c.turns()},
                              {"wire_radius_m", c.wire_radius()},
                              {"resistivity_ohm_m", c.resistivity()},
                              {"ac_resistance_factor", c.ac_resistance_factor()}};
            if (const auto* cap = std::get_if<SeriesCapacitor>(&c.tuning()))
                cj["capacitance_f"] = cap->farads;
            else
                cj["tune_to_hz"] = std::get<TuneTarget>(c.tuning()).hertz;
            if (c.inductance_override()) cj["inductance_override_h"] = *c.inductance_override();
            coils.push_back(std::move(cj));
        }
        auto& drives = j["drives"] = nlohmann::json::object();
        for (const auto& [id, d] : cfg.drives)
            drives[id] = {{"kind", name_of(detail::kDriveNames, d.kind())},
                          {"amplitude", d.amplitude()},
                          {"phase_rad", d.phase()}};
        j["mutual"] = {{"method", name_of(detail::kMethodNames, cfg.mutual.method)},
                       {"segments", cfg.mutual.segments},
                       {"medium_attenuation", cfg.mutual.medium_attenuation}};
        if (cfg.attenuation_frequency_hz) j["mutual"]["attenuation_frequency_hz"] = *cfg.attenuation_frequency_hz;
    }
    j["sweep"] = {{"kind", name_of(detail::kSweepNames, cfg.sweep.kind)},
                  {"min", cfg.sweep.min},
                  {"max", cfg.sweep.max},
                  {"steps", cfg.sweep.steps},
                  {"axis", name_of(detail::kAxisNames, cfg.sweep.axis)},
                  {"spacing", name_of(detail::kSpacingNames, cfg.sweep.spacing)}};
    j["output"] = {{"format", name_of(detail::kFormatNames, cfg.output.format)}, {"path", cfg.output.path}};
    return j;
}

inline std::string serialize_scenario(const ScenarioConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Running a scenario

inline CoupledNetwork build_network(const ScenarioConfig& cfg) {
    if (cfg.is_preset()) {
        const auto preset = find_preset(*cfg.preset);
        return build_fd_link(cfg.params, 0.0, RotationAxis::vertical,
                             detail::case_drives(preset->drive_case, cfg.params.drive_amplitude_a));
    }
    std::vector<Drive> drives;
    for (const auto& c : cfg.coils) {
        const auto it = cfg.drives.find(c.id());
        drives.push_back(it == cfg.drives.end() ? Drive::passive() : it->second);
    }
    MutualMatrix m = compute_mutual_matrix(cfg.coils, cfg.medium, cfg.mutual, cfg.attenuation_frequency_hz.value_or(1.0));
    return CoupledNetwork(cfg.coils, cfg.medium, std::move(m), std::move(drives));
}

inline SweepTable run_scenario(const ScenarioConfig& cfg) {
    if (cfg.is_preset()) return run_link_sweep(cfg.params, find_preset(*cfg.preset)->drive_case, cfg.sweep);
    const CoupledNetwork net = build_network(cfg);
    return frequency_sweep(net, cfg.sweep.min, cfg.sweep.max, cfg.sweep.steps, cfg.sweep.spacing);
}

// ---------------------------------------------------------------------------
// Table emission

inline std::string emit_csv(const SweepTable& t) {
    std::string out = t.variable_name();
    for (const auto& id : t.coil_ids()) out += "," + id + "_amps," + id + "_phase_rad";
    out += '\n';
    for (const auto& r : t.rows()) {
        out += format_number(r.value);
        for (std::size_t c = 0; c < t.coil_ids().size(); ++c) {
            out += ',';
            out += format_number(r.amps[c]);
            out += ',';
            out += format_number(r.phase_rad[c]);
        }
        out += '\n';
    }
    return out;
}

inline std::string emit_json(const SweepTable& t) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows()) {
        nlohmann::ordered_json row;
        row[t.variable_name()] = rounded(r.value);
        for (std::size_t c = 0; c < t.coil_ids().size(); ++c) {
            row[t.coil_ids()[c] + "_amps"] = rounded(r.amps[c]);
            row[t.coil_ids()[c] + "_phase_rad"] = rounded(r.phase_rad[c]);
        }
        rows.push_back(std::move(row));
    }
    return rows.dump(1) + "\n";
}

inline std::string emit_table(const SweepTable& t, OutputFormat format) {
    return format == OutputFormat::csv ? emit_csv(t) : emit_json(t);
}

/// Reads CSV written by `emit_csv` back into a table.
inline SweepTable parse_table_csv(std::string_view text) {
    std::vector<std::vector<std::string>> lines;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::vector<std::string> cells;
        std::string_view line = text.substr(pos, nl - pos);
        std::size_t c = 0;
        while (true) {
            const auto comma = line.find(',', c);
            cells.emplace_back(line.substr(c, comma == std::string_view::npos ? std::string_view::npos : comma - c));
            if (comma == std::string_view::npos) break;
            c = comma + 1;
        }
        lines.push_back(std::move(cells));
        pos = nl + 1;
    }
    if (lines.empty()) throw ConfigError("csv", "empty table");
    const auto& header = lines.front();
    if (header.size() % 2 != 1) throw ConfigError("csv", "header width must be 1 + 2 * coils");
    std::vector<std::string> ids;
    for (std::size_t i = 1; i < header.size(); i += 2) {
        const std::string& a = header[i];
        const std::string suffix = "_amps";
        if (a.size() <= suffix.size() || a.compare(a.size() - suffix.size(), suffix.size(), suffix) != 0)
            throw ConfigError("csv", "bad header cell '" + a + "'");
        ids.push_back(a.substr(0, a.size() - suffix.size()));
        if (header[i + 1] != ids.back() + "_phase_rad") throw ConfigError("csv", "bad header cell '" + header[i + 1] + "'");
    }
    std::vector<SweepRow> rows;
    for (std::size_t l = 1; l < lines.size(); ++l) {
        const auto& cells = lines[l];
        if (cells.size() != header.size())
            throw ConfigError("csv", "row " + std::to_string(l) + " has " + std::to_string(cells.size()) + " cells");
        SweepRow r;
        r.value = parse_number(cells[0]);
        for (std::size_t i = 1; i < cells.size(); i += 2) {
            r.amps.push_back(parse_number(cells[i]));
            r.phase_rad.push_back(parse_number(cells[i + 1]));
        }
        rows.push_back(std::move(r));
    }
    return SweepTable(header.front(), std::move(ids), std::move(rows));
}

inline std::string emit_si_report(const SiReport& rep) {
    nlohmann::ordered_json j;
    j["case"] = to_string(rep.case_id);
    j["frequency_hz"] = rounded(rep.frequency_hz);
    auto& chans = j["channels"] = nlohmann::ordered_json::array();
    for (const auto& ch : rep.channels) {
        nlohmann::ordered_json c;
        c["transmitter"] = ch.transmitter;
        c["receiver"] = ch.receiver;
        c["si_point"] = ch.si_point;
        c["soi_amps"] = rounded(ch.soi_amps);
        c["si_amps"] = rounded(ch.si_amps);
        c["soi_unloaded_amps"] = rounded(ch.soi_unloaded_amps);
        c["suppression_db"] = rounded(floor_db(ch.suppression_db));
        chans.push_back(std::move(c));
    }
    return j.dump(2) + "\n";
}

/// Writes `data` to `path`; "-" means `stdout_stream`.
inline void write_output(const std::string& path, const std::string& data, std::ostream& stdout_stream) {
    if (path == "-") {
        stdout_stream << data;
        stdout_stream.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(path, "cannot open for writing");
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!f) throw IoError(path, "write failed");
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(path, "cannot open for reading");
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

} // namespace fdmi
