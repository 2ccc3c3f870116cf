#pragma once

// Parameter sweeps over the steady-state pipeline and their frozen CSV
// serialization.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "omcoh/errors.hpp"
#include "omcoh/gaussian.hpp"
#include "omcoh/model.hpp"
#include "omcoh/steady.hpp"
#include "omcoh/format.hpp"

namespace omcoh {

inline const std::vector<std::string>& sweepable_params() {
    static const std::vector<std::string> names = {
        "gamma_m", "kappa", "delta0", "g0", "drive_e", "n_th"};
    return names;
}

struct SweepAxis {
    std::string param;
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log_scale = false;

    void validate() const {
        if (std::find(sweepable_params().begin(), sweepable_params().end(), param) ==
            sweepable_params().end()) {
            throw ConfigError("sweep axis: unknown parameter '" + param + "'");
        }
        if (points < 2) throw ConfigError("sweep axis '" + param + "': points must be >= 2");
        if (!(from < to)) throw ConfigError("sweep axis '" + param + "': requires from < to");
        if (log_scale && !(from > 0.0)) {
            throw ConfigError("sweep axis '" + param + "': log scale requires from > 0");
        }
    }

    double value(int i) const {
        const double t = static_cast<double>(i) / (points - 1);
        if (log_scale) return from * std::exp(t * std::log(to / from));
        return from + t * (to - from);
    }
};

struct SweepSpec {
    SystemParams base;
    SweepAxis axis1;
    std::optional<SweepAxis> axis2;
    std::vector<std::string> outputs;  // empty = all columns

    void validate() const {
        base.validate();
        axis1.validate();
        if (axis2) axis2->validate();
    }
};

inline void apply_param(SystemParams& p, const std::string& name, double value) {
    if (name == "gamma_m") p.gamma_m = value;
    else if (name == "kappa") p.kappa = value;
    else if (name == "delta0") p.delta0 = value;
    else if (name == "g0") p.g0 = value;
    else if (name == "drive_e") p.drive_e = value;
    else if (name == "n_th") p.n_th = value;
    else throw ConfigError("unknown parameter '" + name + "'");
}

/// One grid point. Coherence values are present only for stable points;
/// unstable or marginal verdicts leave them empty rather than fabricated.
struct SweepRow {
    SystemParams params;
    double q_s = 0.0;
    double alpha_s = 0.0;
    double delta_eff = 0.0;
    double g_eff = 0.0;
    std::string verdict;  // stable | unstable | marginal | error
    bool multistable = false;
    std::optional<CoherenceReport> coherence;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

inline SweepRow evaluate_point(const SystemParams& p) {
    SweepRow row;
    row.params = p;
    try {
        const SteadyState s = solve_steady_state(p);
        row.q_s = s.q_s;
        row.alpha_s = s.alpha_s;
        row.delta_eff = s.delta_eff;
        row.g_eff = s.g_eff;
        row.multistable = s.multistable();

        const auto rh = stability_routh_hurwitz(p, s);
        const auto spec = stability_spectral(build_drift(p, s));
        if (rh.verdict == Verdict::marginal) {
            row.verdict = "marginal";
            return row;
        }
        if (!spec.stable) {
            row.verdict = "unstable";
            return row;
        }
        const SteadyAnalysis analysis = steady_covariance(p);
        row.coherence = coherence_difference(analysis.state());
        row.verdict = "stable";
    } catch (const StabilityError&) {
        row.verdict = "unstable";
        row.coherence.reset();
    } catch (const std::exception&) {
        row.verdict = "error";
        row.coherence.reset();
    }
    return row;
}

/// Evaluates the grid in axis2-major order (outer loop axis2, inner loop
/// axis1). Per-point failures are recorded in the row, never aborting the
/// sweep.
inline SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepResult result;
    const int n2 = spec.axis2 ? spec.axis2->points : 1;
    result.rows.reserve(static_cast<std::size_t>(n2) * spec.axis1.points);
    for (int j = 0; j < n2; ++j) {
        SystemParams outer = spec.base;
        if (spec.axis2) apply_param(outer, spec.axis2->param, spec.axis2->value(j));
        for (int i = 0; i < spec.axis1.points; ++i) {
            SystemParams p = outer;
            apply_param(p, spec.axis1.param, spec.axis1.value(i));
            result.rows.push_back(evaluate_point(p));
        }
    }
    return result;
}

inline const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = {
        "drive_e", "g0",      "kappa", "gamma_m", "delta0",  "n_th",
        "q_s",     "alpha_s", "delta_eff", "g_eff", "stable", "nu1",
        "nu2",     "c_mec",   "c_opt", "c_tot",   "delta_c", "mutual_info"};
    return cols;
}

namespace detail {

inline std::string sweep_cell(const SweepRow& row, const std::string& col) {
    const auto num = [](double v) { return format_sig12(v); };
    if (col == "drive_e") return num(row.params.drive_e);
    if (col == "g0") return num(row.params.g0);
    if (col == "kappa") return num(row.params.kappa);
    if (col == "gamma_m") return num(row.params.gamma_m);
    if (col == "delta0") return num(row.params.delta0);
    if (col == "n_th") return num(row.params.n_th);
    if (col == "q_s") return num(row.q_s);
    if (col == "alpha_s") return num(row.alpha_s);
    if (col == "delta_eff") return num(row.delta_eff);
    if (col == "g_eff") return num(row.g_eff);
    if (col == "stable") return row.verdict;
    if (!row.coherence) return "";
    const CoherenceReport& c = *row.coherence;
    if (col == "nu1") return num(c.nu1);
    if (col == "nu2") return num(c.nu2);
    if (col == "c_mec") return num(c.c_mec);
    if (col == "c_opt") return num(c.c_opt);
    if (col == "c_tot") return num(c.c_tot);
    if (col == "delta_c") return num(c.delta_c);
    if (col == "mutual_info") return num(c.mutual_info);
    throw ConfigError("unknown output column '" + col + "'");
}

}  // namespace detail

/// Frozen CSV: header row, comma separator, \n line endings, values at 12
/// significant digits. `outputs` selects a column subset (frozen order).
inline void write_sweep_csv(std::ostream& os, const SweepResult& result,
                            const std::vector<std::string>& outputs = {}) {
    std::vector<std::string> cols;
    if (outputs.empty()) {
        cols = sweep_columns();
    } else {
        for (const auto& c : sweep_columns()) {
            if (std::find(outputs.begin(), outputs.end(), c) != outputs.end()) {
                cols.push_back(c);
            }
        }
        for (const auto& c : outputs) {
            if (std::find(sweep_columns().begin(), sweep_columns().end(), c) ==
                sweep_columns().end()) {
                throw ConfigError("unknown output column '" + c + "'");
            }
        }
    }
    for (std::size_t i = 0; i < cols.size(); ++i) {
        os << cols[i] << (i + 1 < cols.size() ? "," : "");
    }
    os << "\n";
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            os << detail::sweep_cell(row, cols[i]) << (i + 1 < cols.size() ? "," : "");
        }
        os << "\n";
    }
}

}  // namespace omcoh
