// Acceptance suite: end-to-end checks of the steady-state coherence
// pipeline, one printed verdict per criterion. Exits with the number of
// failed criteria.

#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "omcoh/config.hpp"
#include "omcoh/detect.hpp"
#include "omcoh/gaussian.hpp"
#include "omcoh/model.hpp"
#include "omcoh/presets.hpp"
#include "omcoh/report.hpp"
#include "omcoh/steady.hpp"
#include "omcoh/sweep.hpp"
#include "support/random_states.hpp"

using namespace omcoh;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

SystemParams figure_params(double g0, double drive_e, double kappa = 0.1,
                           double gamma_m = 0.01, double n_th = 10.0) {
    SystemParams p;
    p.gamma_m = gamma_m;
    p.kappa = kappa;
    p.delta0 = 1.0;
    p.g0 = g0;
    p.drive_e = drive_e;
    p.n_th = n_th;
    return p;
}

SystemParams random_stable_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return lo * std::exp(uni(rng) * std::log(hi / lo));
    };
    while (true) {
        SystemParams p;
        p.gamma_m = log_uniform(5e-3, 0.1);
        p.kappa = log_uniform(0.05, 1.5);
        p.delta0 = 0.4 + 1.2 * uni(rng);
        p.g0 = log_uniform(1e-5, 5e-4);
        p.drive_e = log_uniform(10.0, 400.0);
        p.n_th = 30.0 * uni(rng);
        const SteadyState s = solve_steady_state(p);
        const auto spec = stability_spectral(build_drift(p, s));
        if (spec.stable && spec.abscissa < -2e-3) return p;
    }
}

std::string fmt(double v) { return format_sig12(v); }

// ---------------------------------------------------------------------------

Outcome criterion_identity() {
    std::mt19937_64 rng(20240811);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const GaussianState state = testing::random_physical_state(rng);
        const CoherenceReport r = coherence_difference(state);
        worst = std::max(worst, std::abs(r.delta_c - r.mutual_info));
    }
    int preset_points = 0;
    for (const auto& preset : all_presets()) {
        if (!preset.is_sweep()) continue;
        const SweepResult rows =
            run_preset_sweeps(std::get<std::vector<SweepSpec>>(preset.payload));
        for (const auto& row : rows.rows) {
            if (!row.coherence) continue;
            worst = std::max(worst,
                             std::abs(row.coherence->delta_c - row.coherence->mutual_info));
            ++preset_points;
        }
    }
    Outcome out;
    out.pass = worst <= 1e-9;
    out.detail = "worst |delta_c - mutual_info| = " + fmt(worst) + " over 1000 random states and " +
                 std::to_string(preset_points) + " preset points";
    return out;
}

Outcome criterion_lyapunov() {
    std::mt19937_64 rng(4242);
    double worst_rel_residual = 0.0;
    double worst_gap = 0.0;
    for (int i = 0; i < 50; ++i) {
        const SystemParams p = random_stable_params(rng);
        const SteadyState s = solve_steady_state(p);
        const Eigen::Matrix4d a = build_drift(p, s);
        const Eigen::Matrix4d d = build_diffusion(p);
        const CovarianceSolution direct = solve_lyapunov(a, d);
        worst_rel_residual = std::max(
            worst_rel_residual, direct.residual / std::max(1.0, direct.v.norm()));
        const double dt = 0.009 / std::max({1.0, p.kappa, std::abs(s.delta_eff)});
        const double t_end = 80.0 / std::min({p.gamma_m, p.kappa, 1.0});
        const CovarianceSolution ode =
            integrate_covariance_ode(a, d, Eigen::Matrix4d::Identity(), dt, t_end);
        worst_gap = std::max(worst_gap, (direct.v - ode.v).norm());
    }
    Outcome out;
    out.pass = worst_rel_residual <= 1e-9 && worst_gap <= 1e-6;
    out.detail = "50 stable sets: worst relative residual " + fmt(worst_rel_residual) +
                 ", worst solver-vs-integrator gap " + fmt(worst_gap);
    return out;
}

Outcome criterion_decoupled() {
    const SystemParams p = figure_params(0.0, 50.0);
    const SteadyAnalysis a = steady_covariance(p);
    Eigen::Vector4d diag;
    diag << 21.0, 21.0, 1.0, 1.0;
    const double v_err =
        (a.cov.v - Eigen::Matrix4d(diag.asDiagonal())).cwiseAbs().maxCoeff();
    const CoherenceReport r = coherence_difference(a.state());
    const double nc = a.steady.alpha_s * a.steady.alpha_s;
    const double c_opt_err = std::abs(r.c_opt - f_entropy(2.0 * nc + 1.0));
    Outcome out;
    out.pass = v_err <= 1e-10 && r.c_mec <= 1e-12 && c_opt_err <= 1e-10 &&
               std::abs(r.delta_c) <= 1e-12;
    out.detail = "V error " + fmt(v_err) + ", c_mec " + fmt(r.c_mec) +
                 ", c_opt error " + fmt(c_opt_err) + ", |delta_c| " +
                 fmt(std::abs(r.delta_c));
    return out;
}

Outcome criterion_stability_cross_oracle() {
    std::mt19937_64 rng(90210);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) {
        return lo * std::exp(uni(rng) * std::log(hi / lo));
    };
    int checked = 0, disagreements = 0, unstable_seen = 0;
    // half through the full pipeline, half as direct working-point draws
    while (checked < 250) {
        const SystemParams p = testing::random_params(rng);
        const SteadyState s = solve_steady_state(p);
        if (s.delta_eff <= 0.05) continue;
        const auto rh = stability_routh_hurwitz(p, s);
        const auto spec = stability_spectral(build_drift(p, s));
        if (rh.verdict == Verdict::marginal || std::abs(spec.abscissa) <= 1e-8) continue;
        ++checked;
        if (!spec.stable) ++unstable_seen;
        if (rh.stable() != spec.stable) ++disagreements;
    }
    while (checked < 500) {
        SystemParams p;
        p.gamma_m = log_uniform(1e-3, 0.3);
        p.kappa = log_uniform(0.02, 3.0);
        p.delta0 = 0.05 + 2.45 * uni(rng);
        p.g0 = 1e-4;
        p.drive_e = 0.0;
        p.n_th = 0.0;
        SteadyState s;
        s.delta_eff = p.delta0;
        s.g_eff = log_uniform(1e-3, 4.0);
        const auto rh = stability_routh_hurwitz(p, s);
        const auto spec = stability_spectral(build_drift(p, s));
        if (rh.verdict == Verdict::marginal || std::abs(spec.abscissa) <= 1e-8) continue;
        ++checked;
        if (!spec.stable) ++unstable_seen;
        if (rh.stable() != spec.stable) ++disagreements;
    }
    Outcome out;
    out.pass = disagreements == 0;
    out.detail = std::to_string(checked) + " samples (" + std::to_string(unstable_seen) +
                 " unstable), " + std::to_string(disagreements) + " disagreements";
    return out;
}

Outcome criterion_drive_response() {
    const std::vector<double> g0s = {1e-4, 5e-4, 1e-3};
    const std::vector<double> drives = {50,  100, 150, 200, 250,
                                        300, 350, 400, 450, 500};
    std::vector<std::vector<SweepRow>> table(g0s.size());
    std::vector<std::string> failures;

    for (std::size_t gi = 0; gi < g0s.size(); ++gi) {
        for (double e : drives) {
            table[gi].push_back(evaluate_point(figure_params(g0s[gi], e)));
        }
    }
    for (std::size_t gi = 0; gi < g0s.size(); ++gi) {
        for (std::size_t ei = 0; ei < drives.size(); ++ei) {
            const auto& row = table[gi][ei];
            if (!row.coherence) {
                failures.push_back("point E=" + fmt(drives[ei]) + ", g0=" + fmt(g0s[gi]) +
                                   " is " + row.verdict);
            }
        }
    }
    auto value = [&](std::size_t gi, std::size_t ei, auto member) -> double {
        return table[gi][ei].coherence ? (*table[gi][ei].coherence).*member
                                       : std::nan("");
    };
    // strict growth with drive, per coupling
    for (std::size_t gi = 0; gi < g0s.size(); ++gi) {
        for (auto [member, name] :
             {std::pair{&CoherenceReport::c_mec, "c_mec"},
              std::pair{&CoherenceReport::c_opt, "c_opt"},
              std::pair{&CoherenceReport::c_tot, "c_tot"}}) {
            for (std::size_t ei = 0; ei + 1 < drives.size(); ++ei) {
                const double lo = value(gi, ei, member), hi = value(gi, ei + 1, member);
                if (std::isnan(lo) || std::isnan(hi)) continue;  // already reported
                if (!(hi > lo)) {
                    failures.push_back(std::string(name) + " not increasing at g0=" +
                                       fmt(g0s[gi]) + ", E=" + fmt(drives[ei + 1]));
                }
            }
        }
    }
    // optical dominates mechanical coherence pointwise
    for (std::size_t gi = 0; gi < g0s.size(); ++gi) {
        for (std::size_t ei = 0; ei < drives.size(); ++ei) {
            if (!table[gi][ei].coherence) continue;
            if (!(table[gi][ei].coherence->c_opt >= table[gi][ei].coherence->c_mec)) {
                failures.push_back("c_opt < c_mec at g0=" + fmt(g0s[gi]) + ", E=" +
                                   fmt(drives[ei]));
            }
        }
    }
    // total coherence grows with coupling; optical coherence shrinks with
    // coupling from E = 300 up
    for (std::size_t ei = 0; ei < drives.size(); ++ei) {
        for (std::size_t gi = 0; gi + 1 < g0s.size(); ++gi) {
            const double lo = value(gi, ei, &CoherenceReport::c_tot);
            const double hi = value(gi + 1, ei, &CoherenceReport::c_tot);
            if (!std::isnan(lo) && !std::isnan(hi) && !(hi > lo)) {
                failures.push_back("c_tot not increasing in g0 at E=" + fmt(drives[ei]));
            }
            if (drives[ei] >= 300.0) {
                const double o1 = value(gi, ei, &CoherenceReport::c_opt);
                const double o2 = value(gi + 1, ei, &CoherenceReport::c_opt);
                if (!std::isnan(o1) && !std::isnan(o2) && !(o2 < o1)) {
                    failures.push_back("c_opt not decreasing in g0 at E=" + fmt(drives[ei]) +
                                       " (" + fmt(o1) + " -> " + fmt(o2) + ")");
                }
            }
        }
    }

    Outcome out;
    out.pass = failures.empty();
    if (out.pass) {
        out.detail = "all shape claims hold on the 10x3 drive/coupling grid";
    } else {
        std::ostringstream oss;
        oss << failures.size() << " violations:";
        for (std::size_t i = 0; i < failures.size() && i < 6; ++i) oss << " [" << failures[i] << "]";
        if (failures.size() > 6) oss << " ...";
        out.detail = oss.str();
    }
    return out;
}

Outcome criterion_thermal_families() {
    const std::vector<double> nths = {1.0, 10.0, 100.0};
    std::vector<std::string> failures;
    for (double e : {50.0, 100.0, 150.0, 200.0, 250.0, 300.0, 350.0, 400.0, 450.0, 500.0}) {
        std::vector<CoherenceReport> reports;
        for (double nth : nths) {
            const SweepRow row = evaluate_point(figure_params(1e-4, e, 0.1, 0.01, nth));
            if (!row.coherence) {
                failures.push_back("E=" + fmt(e) + ", n_th=" + fmt(nth) + " " + row.verdict);
                continue;
            }
            reports.push_back(*row.coherence);
        }
        if (reports.size() != nths.size()) continue;
        for (std::size_t i = 0; i + 1 < reports.size(); ++i) {
            if (!(reports[i].c_mec > reports[i + 1].c_mec) ||
                !(reports[i].c_opt > reports[i + 1].c_opt) ||
                !(reports[i].c_tot > reports[i + 1].c_tot)) {
                failures.push_back("coherence not decreasing in n_th at E=" + fmt(e));
            }
        }
    }
    Outcome out;
    out.pass = failures.empty();
    out.detail = out.pass ? "all three coherences strictly decrease over n_th {1,10,100}"
                          : failures.front() + " (+" +
                                std::to_string(failures.size() - 1) + " more)";
    return out;
}

Outcome criterion_cavity_decay() {
    // decay-rate sensitivity at E = 300 on the kappa map parameters
    const CoherenceReport k1 =
        evaluate_point(figure_params(1e-3, 300.0, 1.0)).coherence.value();
    const CoherenceReport k10 =
        evaluate_point(figure_params(1e-3, 300.0, 10.0)).coherence.value();
    const double mec_ratio = k10.c_mec / k1.c_mec;
    const double opt_ratio = k10.c_opt / k1.c_opt;
    Outcome out;
    out.pass = mec_ratio <= 0.05 && opt_ratio >= 0.3 && opt_ratio <= 0.7;
    out.detail = "c_mec ratio (kappa 10 vs 1) = " + fmt(mec_ratio) +
                 ", c_opt ratio = " + fmt(opt_ratio);
    return out;
}

Outcome criterion_coupling_threshold() {
    // bad-cavity map at E = 300: mutual coherence off at weak coupling,
    // on at strong coupling
    const CoherenceReport weak =
        evaluate_point(figure_params(1e-3, 300.0, 10.0)).coherence.value();
    const CoherenceReport strong =
        evaluate_point(figure_params(1e-2, 300.0, 10.0)).coherence.value();
    Outcome out;
    out.pass = weak.delta_c <= 0.01 && strong.delta_c > 0.01;
    out.detail = "delta_c(g0=1e-3) = " + fmt(weak.delta_c) +
                 ", delta_c(g0=1e-2) = " + fmt(strong.delta_c);
    return out;
}

Outcome criterion_asymptotic_slopes() {
    std::vector<double> log_e, c_mec, c_opt;
    std::vector<std::string> skipped;
    for (int i = 0; i < 9; ++i) {
        const double e = 2000.0 * std::exp(i / 8.0 * std::log(2.0));
        const SweepRow row = evaluate_point(figure_params(1e-4, e));
        if (!row.coherence) {
            skipped.push_back("E=" + fmt(e) + " " + row.verdict);
            continue;
        }
        log_e.push_back(std::log(e));
        c_mec.push_back(row.coherence->c_mec);
        c_opt.push_back(row.coherence->c_opt);
    }
    auto slope = [&](const std::vector<double>& y) {
        const double n = static_cast<double>(log_e.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < log_e.size(); ++i) {
            sx += log_e[i];
            sy += y[i];
            sxx += log_e[i] * log_e[i];
            sxy += log_e[i] * y[i];
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    Outcome out;
    if (log_e.size() < 2) {
        out.pass = false;
        out.detail = "too few stable points on the window";
        return out;
    }
    const double s_mec = slope(c_mec);
    const double s_opt = slope(c_opt);
    out.pass = std::abs(s_mec - 4.0) <= 0.4 && std::abs(s_opt - 2.0) <= 0.2;
    out.detail = "dc_mec/dlnE = " + fmt(s_mec) + " (want 4 +- 0.4), dc_opt/dlnE = " +
                 fmt(s_opt) + " (want 2 +- 0.2) over " + std::to_string(log_e.size()) +
                 " stable points";
    if (!skipped.empty()) {
        out.detail += "; skipped:";
        for (const auto& s : skipped) out.detail += " " + s;
    }
    return out;
}

Outcome criterion_detection() {
    DetectionParams det;
    det.kappa2 = 0.1;
    det.g2 = 0.01;
    det.delta2 = 1.0;
    const SystemParams p = figure_params(1e-4, 300.0);
    const SteadyAnalysis analysis = steady_covariance(p);
    const Matrix2d v_mec = analysis.cov.v.block<2, 2>(0, 0);

    double worst_exact = 0.0;
    const Matrix2d rec_default =
        reconstruct_mechanical(output_covariance(v_mec, det).v_out, det);
    worst_exact = (rec_default - v_mec).cwiseAbs().maxCoeff();
    for (double g : {0.1, 1.0, 10.0}) {
        DetectionParams d2 = det;
        d2.kappa2 = 0.5;
        d2.g2 = g * std::sqrt(2.0 * d2.kappa2);
        const Matrix2d rec = reconstruct_mechanical(output_covariance(v_mec, d2).v_out, d2);
        worst_exact = std::max(worst_exact, (rec - v_mec).cwiseAbs().maxCoeff());
    }

    int hits = 0;
    const int n_seeds = 100;
    for (int seed = 1; seed <= n_seeds; ++seed) {
        const DetectReport r = run_detect(p, det, 1000000, static_cast<std::uint64_t>(seed));
        if (r.within_5_sigma) ++hits;
    }
    Outcome out;
    out.pass = worst_exact <= 1e-12 && hits >= 95;
    out.detail = "exact round-trip error " + fmt(worst_exact) + "; " +
                 std::to_string(hits) + "/" + std::to_string(n_seeds) +
                 " seeds within 5 standard errors";
    return out;
}

Outcome criterion_physicality() {
    double min_nu = 1e300;
    int points = 0;
    for (const auto& preset : all_presets()) {
        if (!preset.is_sweep()) continue;
        for (const auto& spec : std::get<std::vector<SweepSpec>>(preset.payload)) {
            const int n2 = spec.axis2 ? spec.axis2->points : 1;
            for (int j = 0; j < n2; ++j) {
                SystemParams outer = spec.base;
                if (spec.axis2) apply_param(outer, spec.axis2->param, spec.axis2->value(j));
                for (int i = 0; i < spec.axis1.points; ++i) {
                    SystemParams p = outer;
                    apply_param(p, spec.axis1.param, spec.axis1.value(i));
                    try {
                        const SteadyAnalysis a = steady_covariance(p);
                        min_nu = std::min(min_nu, symplectic_eigenvalues(a.state()).min());
                        DetectionParams det;
                        const Matrix2d block = a.cov.v.block<2, 2>(0, 0);
                        const OutputModel om = output_covariance(block, det);
                        Eigen::SelfAdjointEigenSolver<Matrix2d> es(om.v_out);
                        min_nu = std::min(min_nu, es.eigenvalues().minCoeff());
                        const Matrix2d rec = reconstruct_mechanical(om.v_out, det);
                        min_nu = std::min(min_nu, std::sqrt(std::max(rec.determinant(), 0.0)));
                        ++points;
                    } catch (const StabilityError&) {
                        // unstable grid points have no covariance to check
                    }
                }
            }
        }
    }
    Outcome out;
    out.pass = min_nu >= 1.0 - 1e-9;
    out.detail = "minimum symplectic/output eigenvalue " + fmt(min_nu) + " over " +
                 std::to_string(points) + " stable preset points";
    return out;
}

Outcome criterion_reproducibility() {
    const auto fig3 = find_preset("fig3");
    const auto& sweeps = std::get<std::vector<SweepSpec>>(fig3->payload);
    std::ostringstream a, b;
    write_sweep_csv(a, run_preset_sweeps(sweeps));
    write_sweep_csv(b, run_preset_sweeps(sweeps));

    const char* doc = R"({
        "base": {"gamma_m":0.01,"kappa":0.1,"delta0":1.0,"g0":5e-4,"drive_e":0,"n_th":10},
        "axis1": {"param":"drive_e","from":0,"to":400,"points":9}})";
    std::ostringstream c, d;
    const auto spec = std::get<SweepSpec>(parse_config(nlohmann::json::parse(doc)));
    write_sweep_csv(c, run_sweep(spec));
    write_sweep_csv(d, run_sweep(spec));

    const bool same_records = [] {
        const auto r1 = sample_output_records(Matrix2d::Identity(), 1000, 33);
        const auto r2 = sample_output_records(Matrix2d::Identity(), 1000, 33);
        for (std::size_t i = 0; i < r1.size(); ++i) {
            if ((r1[i] - r2[i]).cwiseAbs().maxCoeff() != 0.0) return false;
        }
        return true;
    }();

    Outcome out;
    out.pass = a.str() == b.str() && c.str() == d.str() && same_records;
    out.detail = out.pass ? "preset CSV, config CSV and record streams are byte-identical"
                          : "re-runs differ";
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"coherence difference equals mutual information (<= 1e-9)", criterion_identity},
        {"Lyapunov residual and time-integration oracle", criterion_lyapunov},
        {"decoupled system matches the analytic thermal-vacuum state", criterion_decoupled},
        {"Routh-Hurwitz vs spectral verdicts on random samples", criterion_stability_cross_oracle},
        {"drive-response shape claims on the coupling grid", criterion_drive_response},
        {"coherence decreases with bath occupation", criterion_thermal_families},
        {"cavity-decay sensitivity ratios at E = 300", criterion_cavity_decay},
        {"coupling threshold of the coherence difference at E = 300", criterion_coupling_threshold},
        {"asymptotic drive slopes on E in [2000, 4000]", criterion_asymptotic_slopes},
        {"detection round trip, exact and statistical", criterion_detection},
        {"physicality of steady and reconstructed covariances", criterion_physicality},
        {"byte-identical reruns of sweeps and record streams", criterion_reproducibility},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        if (!outcome.pass) ++failures;
        std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << (i + 1)
                  << ": " << criteria[i].first << " - " << outcome.detail << "\n";
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size()
              << " criteria passed\n";
    return failures;
}
