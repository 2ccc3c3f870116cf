#pragma once

// Built-in parameter sets: the figure-style sweeps and two published
// experimental platforms converted to omega_m = 1 units.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "omcoh/model.hpp"
#include "omcoh/sweep.hpp"

namespace omcoh {

struct Preset {
    std::string name;
    std::string summary;
    // A point preset carries params; a sweep preset carries one or more
    // sweep specs whose rows are concatenated into a single table.
    std::variant<SystemParams, std::vector<SweepSpec>> payload;

    bool is_sweep() const { return payload.index() == 1; }
};

namespace detail {

inline SystemParams figure_base() {
    SystemParams p;
    p.gamma_m = 1e-2;
    p.kappa = 0.1;
    p.delta0 = 1.0;
    p.g0 = 1e-4;
    p.drive_e = 100.0;
    p.n_th = 10.0;
    return p;
}

}  // namespace detail

inline std::vector<Preset> all_presets() {
    std::vector<Preset> presets;

    {  // coherence vs drive for three coupling strengths
        std::vector<SweepSpec> sweeps;
        for (double g0 : {1e-4, 5e-4, 1e-3}) {
            SweepSpec s;
            s.base = detail::figure_base();
            s.base.g0 = g0;
            s.axis1 = {"drive_e", 0.0, 500.0, 11, false};
            sweeps.push_back(s);
        }
        presets.push_back({"fig1",
                           "coherence vs drive E in [0,500], one block per coupling "
                           "g0 in {1e-4, 5e-4, 1e-3}",
                           sweeps});
    }
    {  // drive x cavity-decay map
        SweepSpec s;
        s.base = detail::figure_base();
        s.base.g0 = 1e-3;
        s.axis1 = {"drive_e", 0.0, 500.0, 11, false};
        s.axis2 = SweepAxis{"kappa", 0.1, 10.0, 9, true};
        presets.push_back({"fig2",
                           "coherence map over drive E in [0,500] and cavity decay "
                           "kappa in [0.1,10] (log)",
                           std::vector<SweepSpec>{s}});
    }
    {  // thermal-occupation families
        SweepSpec s;
        s.base = detail::figure_base();
        s.axis1 = {"drive_e", 0.0, 500.0, 11, false};
        s.axis2 = SweepAxis{"n_th", 1.0, 100.0, 3, true};
        presets.push_back({"fig3",
                           "coherence vs drive E in [0,500] for bath occupation "
                           "n_th in {1, 10, 100}",
                           std::vector<SweepSpec>{s}});
    }
    {  // coherence-difference map in the bad-cavity regime
        SweepSpec s;
        s.base = detail::figure_base();
        s.base.kappa = 10.0;
        s.axis1 = {"drive_e", 0.0, 300.0, 7, false};
        s.axis2 = SweepAxis{"g0", 1e-4, 1e-2, 9, true};
        presets.push_back({"fig4",
                           "coherence difference over drive E in [0,300] and coupling "
                           "g0 in [1e-4,1e-2] (log), kappa = 10",
                           std::vector<SweepSpec>{s}});
    }
    {  // microwave optomechanics (drum resonator): omega_m/2pi = 14.98 MHz,
       // gamma_m/2pi = 9.2 Hz, kappa/2pi = 1.17 MHz, G0 = 145 Hz
        SystemParams p;
        p.gamma_m = 9.2 / 14.98e6;
        p.kappa = 1.17 / 14.98;
        p.delta0 = 1.0;
        p.g0 = 145.0 / 14.98e6;
        p.drive_e = 500.0;
        p.n_th = 10.0;
        presets.push_back({"nist_microwave",
                           "microwave drum platform scaled to omega_m = 1 "
                           "(kappa = 0.0781, g0 = 9.68e-6)",
                           p});
    }
    {  // optomechanical crystal: omega_m/2pi = 3.68 GHz, gamma_m/2pi = 35 kHz,
       // kappa/2pi = 500 MHz, G0/2pi = 910 kHz
        SystemParams p;
        p.gamma_m = 35e3 / 3.68e9;
        p.kappa = 500e6 / 3.68e9;
        p.delta0 = 1.0;
        p.g0 = 910e3 / 3.68e9;
        p.drive_e = 500.0;
        p.n_th = 10.0;
        presets.push_back({"optomech_crystal",
                           "optomechanical crystal platform scaled to omega_m = 1 "
                           "(kappa = 0.136, g0 = 2.47e-4)",
                           p});
    }
    return presets;
}

inline std::optional<Preset> find_preset(const std::string& name) {
    for (auto& p : all_presets()) {
        if (p.name == name) return p;
    }
    return std::nullopt;
}

/// Runs every sweep of a sweep preset and concatenates the rows.
inline SweepResult run_preset_sweeps(const std::vector<SweepSpec>& sweeps) {
    SweepResult all;
    for (const auto& spec : sweeps) {
        SweepResult r = run_sweep(spec);
        all.rows.insert(all.rows.end(), r.rows.begin(), r.rows.end());
    }
    return all;
}

}  // namespace omcoh
