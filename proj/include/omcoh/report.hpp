#pragma once

// Single-point and detection reports: the text surfaces behind the CLI.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omcoh/detect.hpp"
#include "omcoh/format.hpp"
#include "omcoh/gaussian.hpp"
#include "omcoh/model.hpp"
#include "omcoh/steady.hpp"
#include "omcoh/sweep.hpp"

namespace omcoh {

struct PointReport {
    SystemParams params;
    SteadyState steady;
    RouthHurwitzResult routh_hurwitz;
    SpectralResult spectral;
    std::string verdict;
    // Present only when the working point is strictly stable:
    std::optional<CovarianceSolution> cov;
    std::optional<SymplecticSpectrum> spectrum;
    std::optional<CoherenceReport> coherence;
    std::optional<RwaDiagnostic> rwa;
};

/// Full single-point evaluation. Never throws on instability; the verdict
/// records it and the covariance-dependent fields stay empty.
inline PointReport run_point(const SystemParams& p) {
    PointReport r;
    r.params = p;
    r.steady = solve_steady_state(p);
    r.routh_hurwitz = stability_routh_hurwitz(p, r.steady);
    r.spectral = stability_spectral(build_drift(p, r.steady));
    if (r.routh_hurwitz.verdict == Verdict::marginal) {
        r.verdict = "marginal";
    } else if (!r.spectral.stable) {
        r.verdict = "unstable";
    } else {
        r.verdict = "stable";
        const SteadyAnalysis analysis = steady_covariance(p);
        r.cov = analysis.cov;
        r.spectrum = symplectic_eigenvalues(analysis.state());
        r.coherence = coherence_difference(analysis.state());
        r.rwa = rwa_mechanical_variance(p, r.steady);
    }
    return r;
}

namespace detail {

inline void print_matrix(std::ostream& os, const Eigen::MatrixXd& m,
                         const char* indent = "  ") {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << indent;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            os << format_sig12(m(i, j)) << (j + 1 < m.cols() ? " " : "");
        }
        os << "\n";
    }
}

}  // namespace detail

inline void print_point(std::ostream& os, const PointReport& r) {
    os << "# steady-state point report (rates in units omega_m = 1; "
          "entropies in nats)\n";
    os << "params: gamma_m=" << format_sig12(r.params.gamma_m)
       << " kappa=" << format_sig12(r.params.kappa)
       << " delta0=" << format_sig12(r.params.delta0)
       << " g0=" << format_sig12(r.params.g0)
       << " drive_e=" << format_sig12(r.params.drive_e)
       << " n_th=" << format_sig12(r.params.n_th) << "\n";
    os << "working point: q_s=" << format_sig12(r.steady.q_s)
       << " p_s=0 alpha_s=" << format_sig12(r.steady.alpha_s)
       << " n_c=" << format_sig12(r.steady.n_c)
       << " delta_eff=" << format_sig12(r.steady.delta_eff)
       << " g_eff=" << format_sig12(r.steady.g_eff) << "\n";
    if (r.steady.multistable()) {
        os << "multistability: " << r.steady.branches.size()
           << " admissible branches (principal = smallest photon number):";
        for (const auto& b : r.steady.branches) {
            os << " (n_c=" << format_sig12(b.n_c)
               << ", delta=" << format_sig12(b.delta_eff) << ")";
        }
        os << "\n";
    }
    os << "stability: " << r.verdict
       << " | routh-hurwitz margins: " << format_sig12(r.routh_hurwitz.margin1)
       << ", " << format_sig12(r.routh_hurwitz.margin2)
       << " | spectral abscissa: " << format_sig12(r.spectral.abscissa) << "\n";
    if (!r.cov) return;

    os << "covariance V (dq, dp, dX, dY; Lyapunov residual "
       << format_sig12(r.cov->residual) << "):\n";
    detail::print_matrix(os, r.cov->v);
    os << "symplectic spectrum:";
    for (double nu : r.spectrum->nus) os << " " << format_sig12(nu);
    os << "\n";
    const CoherenceReport& c = *r.coherence;
    os << "coherence: c_mec=" << format_sig12(c.c_mec)
       << " c_opt=" << format_sig12(c.c_opt) << " c_tot=" << format_sig12(c.c_tot)
       << " delta_c=" << format_sig12(c.delta_c)
       << " mutual_info=" << format_sig12(c.mutual_info) << "\n";
    os << "block determinant roots: a=" << format_sig12(c.a)
       << " b=" << format_sig12(c.b) << " nu1=" << format_sig12(c.nu1)
       << " nu2=" << format_sig12(c.nu2) << "\n";
    os << "rwa mechanical variance (diagnostic";
    if (!r.rwa->regime_ok) os << ", outside omega_m >> G, kappa regime";
    os << "): " << format_sig12(r.rwa->value)
       << " | Lyapunov V_mec_11: " << format_sig12(r.cov->v(0, 0)) << " | ratio: "
       << format_sig12(r.cov->v(0, 0) != 0.0 ? r.rwa->value / r.cov->v(0, 0) : 0.0)
       << "\n";
}

struct DetectReport {
    DetectionParams det;
    Matrix2d v_mec_true = Matrix2d::Identity();
    OutputModel output;
    Matrix2d v_mec_exact = Matrix2d::Identity();   // reconstructed, exact path
    CovarianceEstimate estimate;                   // of the output records
    Matrix2d v_mec_stat = Matrix2d::Identity();    // reconstructed from records
    Matrix2d stat_std_error = Matrix2d::Zero();    // mapped standard errors
    bool within_5_sigma = true;
    std::vector<Vector2d> records;
};

/// Detection pipeline on the steady mechanical block: exact round trip and
/// a statistical reconstruction from m synthetic homodyne records.
inline DetectReport run_detect(const SystemParams& p, const DetectionParams& det,
                               std::size_t m, std::uint64_t seed) {
    const SteadyAnalysis analysis = steady_covariance(p);
    DetectReport r;
    r.det = det;
    r.v_mec_true = analysis.cov.v.block<2, 2>(0, 0);
    r.output = output_covariance(r.v_mec_true, det);
    r.v_mec_exact = reconstruct_mechanical(r.output.v_out, det);
    r.records = sample_output_records(r.output.v_out, m, seed);
    r.estimate = estimate_covariance(r.records);

    const Matrix2d rot = detection_rotation();
    const double g2 = det.gain() * det.gain();
    const Matrix2d excess = r.estimate.cov - Matrix2d::Identity();
    r.v_mec_stat = rot.transpose() * excess * rot / g2;
    r.stat_std_error =
        (rot.transpose() * r.estimate.std_error * rot).cwiseAbs() / g2;
    r.within_5_sigma =
        ((r.v_mec_stat - r.v_mec_true).cwiseAbs().array() <=
         5.0 * r.stat_std_error.array())
            .all();
    return r;
}

inline void print_detect(std::ostream& os, const DetectReport& r) {
    os << "# detection report (vacuum variance = 1; gain g = G2/sqrt(2 kappa2) = "
       << format_sig12(r.det.gain()) << ")\n";
    for (const auto& w : r.output.warnings) os << "warning: " << w << "\n";
    os << "true mechanical covariance:\n";
    detail::print_matrix(os, r.v_mec_true);
    os << "output covariance:\n";
    detail::print_matrix(os, r.output.v_out);
    os << "exact reconstruction (max |error| "
       << format_sig12((r.v_mec_exact - r.v_mec_true).cwiseAbs().maxCoeff())
       << "):\n";
    detail::print_matrix(os, r.v_mec_exact);
    os << "statistical reconstruction from " << r.estimate.samples
       << " records:\n";
    detail::print_matrix(os, r.v_mec_stat);
    os << "standard errors:\n";
    detail::print_matrix(os, r.stat_std_error);
    os << "within 5 standard errors: " << (r.within_5_sigma ? "pass" : "fail")
       << "\n";
}

/// Detection records as CSV: columns x,p; 12 significant digits.
inline void write_records_csv(std::ostream& os, const std::vector<Vector2d>& records) {
    os << "x,p\n";
    for (const auto& rec : records) {
        os << format_sig12(rec(0)) << "," << format_sig12(rec(1)) << "\n";
    }
}

}  // namespace omcoh
