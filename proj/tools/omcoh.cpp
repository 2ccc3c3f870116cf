// Command-line front end: single-point reports, parameter sweeps with CSV
// output, stability diagnostics and the detection-scheme simulation.
//
// Exit codes: 0 success, 1 instability at a requested point, 2 config
// error, 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "omcoh/config.hpp"
#include "omcoh/errors.hpp"
#include "omcoh/presets.hpp"
#include "omcoh/report.hpp"
#include "omcoh/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnstable = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

omcoh::SystemParams resolve_params(const std::string& config_path,
                                   const std::string& preset_name) {
    if (!config_path.empty() && !preset_name.empty()) {
        throw omcoh::ConfigError("give either --config or --preset, not both");
    }
    if (!preset_name.empty()) {
        auto preset = omcoh::find_preset(preset_name);
        if (!preset) throw omcoh::ConfigError("unknown preset '" + preset_name + "'");
        if (preset->is_sweep()) {
            throw omcoh::ConfigError("preset '" + preset_name +
                                     "' is a sweep preset; use the sweep subcommand");
        }
        return std::get<omcoh::SystemParams>(preset->payload);
    }
    if (config_path.empty()) {
        throw omcoh::ConfigError("missing --config or --preset");
    }
    auto config = omcoh::load_config(config_path);
    if (!std::holds_alternative<omcoh::SystemParams>(config)) {
        throw omcoh::ConfigError("config '" + config_path +
                                 "' describes a sweep; use the sweep subcommand");
    }
    return std::get<omcoh::SystemParams>(config);
}

int cmd_point(const std::string& config_path, const std::string& preset_name,
              const std::string& out_path) {
    const auto params = resolve_params(config_path, preset_name);
    const omcoh::PointReport report = omcoh::run_point(params);
    omcoh::print_point(std::cout, report);

    omcoh::SweepRow row = omcoh::evaluate_point(params);
    std::ostringstream csv;
    omcoh::SweepResult single;
    single.rows.push_back(row);
    omcoh::write_sweep_csv(csv, single);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw omcoh::ConfigError("cannot open output file '" + out_path + "'");
        out << csv.str();
    } else {
        std::cout << csv.str();
    }
    return report.verdict == "stable" ? kExitOk : kExitUnstable;
}

int cmd_sweep(const std::string& config_path, const std::string& preset_name,
              const std::string& out_path) {
    omcoh::SweepResult result;
    std::vector<std::string> outputs;
    if (!preset_name.empty()) {
        auto preset = omcoh::find_preset(preset_name);
        if (!preset) throw omcoh::ConfigError("unknown preset '" + preset_name + "'");
        if (!preset->is_sweep()) {
            throw omcoh::ConfigError("preset '" + preset_name +
                                     "' is a point preset; use the point subcommand");
        }
        result = omcoh::run_preset_sweeps(std::get<std::vector<omcoh::SweepSpec>>(preset->payload));
    } else {
        if (config_path.empty()) throw omcoh::ConfigError("missing --config or --preset");
        auto config = omcoh::load_config(config_path);
        if (!std::holds_alternative<omcoh::SweepSpec>(config)) {
            throw omcoh::ConfigError("config '" + config_path +
                                     "' describes a single point; use the point subcommand");
        }
        const auto& spec = std::get<omcoh::SweepSpec>(config);
        result = omcoh::run_sweep(spec);
        outputs = spec.outputs;
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw omcoh::ConfigError("cannot open output file '" + out_path + "'");
        omcoh::write_sweep_csv(out, result, outputs);
    } else {
        omcoh::write_sweep_csv(std::cout, result, outputs);
    }
    return kExitOk;
}

int cmd_stability(const std::string& config_path, const std::string& preset_name) {
    const auto params = resolve_params(config_path, preset_name);
    const auto steady = omcoh::solve_steady_state(params);
    const auto rh = omcoh::stability_routh_hurwitz(params, steady);
    const auto spec = omcoh::stability_spectral(omcoh::build_drift(params, steady));

    std::cout << "routh-hurwitz margins: " << omcoh::format_sig12(rh.margin1) << ", "
              << omcoh::format_sig12(rh.margin2) << " -> " << omcoh::to_string(rh.verdict)
              << "\n";
    std::cout << "spectral abscissa: " << omcoh::format_sig12(spec.abscissa) << " -> "
              << (spec.stable ? "stable" : "unstable") << "\n";
    if (steady.multistable()) {
        std::cout << "multistability: " << steady.branches.size()
                  << " admissible branches; verdicts refer to the principal one\n";
    }
    const bool ok = rh.verdict != omcoh::Verdict::marginal && spec.stable;
    return ok ? kExitOk : kExitUnstable;
}

int cmd_detect(const std::string& config_path, const std::string& preset_name,
               const std::string& out_path, double kappa2, double g2, double delta2,
               std::uint64_t samples, std::uint64_t seed) {
    const auto params = resolve_params(config_path, preset_name);
    omcoh::DetectionParams det;
    det.kappa2 = kappa2;
    det.g2 = g2;
    det.delta2 = delta2;
    det.omega_m = params.omega_m;

    const omcoh::DetectReport report = omcoh::run_detect(params, det, samples, seed);
    omcoh::print_detect(std::cout, report);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw omcoh::ConfigError("cannot open output file '" + out_path + "'");
        omcoh::write_records_csv(out, report.records);
    }
    return kExitOk;
}

int cmd_presets_list() {
    for (const auto& preset : omcoh::all_presets()) {
        std::cout << preset.name << (preset.is_sweep() ? "  [sweep]" : "  [point]")
                  << "  " << preset.summary << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state coherence of a driven optomechanical system "
                 "(rates in units omega_m = 1; entropies in nats)"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_path;
    double kappa2 = 0.1, g2 = 0.01, delta2 = 1.0;
    std::uint64_t samples = 1000000, seed = 1;

    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("--config", config_path, "JSON configuration file");
        cmd->add_option("--preset", preset_name, "built-in preset name");
        if (with_out) cmd->add_option("--out", out_path, "output file (CSV)");
    };

    auto* point = app.add_subcommand("point", "evaluate one parameter point");
    add_common(point, true);
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep to CSV");
    add_common(sweep, true);
    auto* stability = app.add_subcommand("stability", "stability verdicts only");
    add_common(stability, false);
    auto* detect = app.add_subcommand("detect", "simulate the readout scheme");
    add_common(detect, true);
    detect->add_option("--kappa2", kappa2, "readout cavity decay rate");
    detect->add_option("--g2", g2, "readout coupling");
    detect->add_option("--delta2", delta2, "readout detuning (scheme tunes to omega_m)");
    detect->add_option("--samples", samples, "number of synthetic records");
    detect->add_option("--seed", seed, "random seed");
    auto* presets = app.add_subcommand("presets", "preset utilities");
    auto* presets_list = presets->add_subcommand("list", "list built-in presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (point->parsed()) return cmd_point(config_path, preset_name, out_path);
        if (sweep->parsed()) return cmd_sweep(config_path, preset_name, out_path);
        if (stability->parsed()) return cmd_stability(config_path, preset_name);
        if (detect->parsed()) {
            return cmd_detect(config_path, preset_name, out_path, kappa2, g2, delta2,
                              samples, seed);
        }
        if (presets->parsed()) {
            if (presets_list->parsed()) return cmd_presets_list();
            throw omcoh::ConfigError("presets: expected 'list'");
        }
        return kExitConfig;
    } catch (const omcoh::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const omcoh::StabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnstable;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
