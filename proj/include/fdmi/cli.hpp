#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 config
// error, 3 numerical failure.

#include <fdmi/io.hpp>
#include <fdmi/scenarios.hpp>
#include <fdmi/selfcheck.hpp>

#include <CLI11.hpp>

#include <iostream>
#include <ostream>
#include <string>
#include <vector>

namespace fdmi {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitConfig = 2, kExitNumerical = 3 };

namespace detail {

inline ScenarioConfig load_config(const std::string& path, std::istream& in) {
    std::string text;
    if (path == "-")
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    else
        text = read_file(path);
    return parse_scenario(text);
}

inline std::string mutual_report(const CoupledNetwork& net) {
    std::string out = "coil,inductance_h,capacitance_f,resistance_ohm,resonance_hz\n";
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& e = net.elements()[i];
        out += net.coils()[i].id() + "," + format_number(e.inductance_h) + "," + format_number(e.capacitance_f) + "," +
               format_number(e.resistance_ohm) + "," +
               format_number(resonant_frequency(e.inductance_h, e.capacitance_f)) + "\n";
    }
    out += "\ncoil_i,coil_j,mutual_h,coupling_k\n";
    for (std::size_t i = 0; i < net.size(); ++i)
        for (std::size_t j = i + 1; j < net.size(); ++j) {
            const double m = net.mutual()(i, j);
            const double k = coupling_coefficient(m, net.elements()[i].inductance_h, net.elements()[j].inductance_h);
            out += net.coils()[i].id() + "," + net.coils()[j].id() + "," + format_number(m) + "," + format_number(k) + "\n";
        }
    return out;
}

} // namespace detail

/// Runs the CLI with explicit streams so it can be driven in-process.
inline int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                    std::istream& in = std::cin) {
    CLI::App app{"Full-duplex magnetic-induction link simulator", "fdmi"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Execute a scenario file and emit its sweep table");
    run->add_option("config", config_path, "Scenario JSON file ('-' for stdin)")->required();

    std::string preset_name, out_path;
    std::vector<std::string> overrides;
    bool report = false;
    auto* preset = app.add_subcommand("preset", "Run a named reproduction preset");
    preset->add_option("name", preset_name, "case1|case2|case3|fig-distance|fig-orientation")->required();
    preset->add_option("--out", out_path, "Output path ('-' for stdout)");
    preset->add_option("--override", overrides, "Dotted-path key=value applied after preset expansion");
    preset->add_flag("--report", report, "Emit the SI report at f0 instead of the sweep (case presets)");

    auto* validate = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate->add_option("config", config_path, "Scenario JSON file")->required();

    auto* mutual = app.add_subcommand("mutual", "Print loop elements, mutual inductances and coupling coefficients");
    mutual->add_option("config", config_path, "Scenario JSON file")->required();

    auto* selfcheck = app.add_subcommand("selfcheck", "Run the physics invariant suite");

    std::vector<std::string> argv_store{"fdmi"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run) {
            const auto cfg = detail::load_config(config_path, in);
            const auto table = run_scenario(cfg);
            for (const auto& w : table.warnings()) err << "warning: " << w << "\n";
            write_output(cfg.output.path, emit_table(table, cfg.output.format), out);
        } else if (*preset) {
            if (!find_preset(preset_name)) {
                err << "error: unknown preset '" << preset_name << "' (choose from";
                for (const auto& n : preset_names()) err << " " << n;
                err << ")\n";
                return kExitUsage;
            }
            nlohmann::json doc{{"schema_version", kSchemaVersion}, {"preset", preset_name}};
            apply_overrides(doc, overrides);
            auto cfg = parse_scenario_json(doc);
            if (!out_path.empty()) cfg.output.path = out_path;
            if (report) {
                const auto p = find_preset(preset_name);
                if (p->sweep.kind != SweepKind::frequency) {
                    err << "error: --report applies to the case presets only\n";
                    return kExitUsage;
                }
                write_output(cfg.output.path, emit_si_report(run_case(p->drive_case, cfg.params)), out);
            } else {
                const auto table = run_scenario(cfg);
                for (const auto& w : table.warnings()) err << "warning: " << w << "\n";
                write_output(cfg.output.path, emit_table(table, cfg.output.format), out);
            }
        } else if (*validate) {
            const auto cfg = detail::load_config(config_path, in);
            out << "ok: " << (cfg.is_preset() ? "preset '" + *cfg.preset + "'" : std::to_string(cfg.coils.size()) + " coils")
                << "\n";
        } else if (*mutual) {
            const auto cfg = detail::load_config(config_path, in);
            out << detail::mutual_report(build_network(cfg));
        } else if (*selfcheck) {
            bool all = true;
            for (const auto& c : run_selfcheck()) {
                out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
                all = all && c.passed;
            }
            if (!all) {
                err << "selfcheck: invariant violation\n";
                return kExitNumerical;
            }
        }
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}

} // namespace fdmi
