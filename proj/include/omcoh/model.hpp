#pragma once

// Optomechanical model: parameters, classical working point, linearized
// drift/diffusion matrices and stability verdicts. All rates are in units
// of the mechanical frequency (omega_m = 1).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "omcoh/errors.hpp"

namespace omcoh {

struct SystemParams {
    double omega_m = 1.0;  // the unit
    double gamma_m = 0.0;  // mechanical damping rate
    double kappa = 0.0;    // cavity decay rate
    double delta0 = 0.0;   // bare detuning omega_c - omega_d
    double g0 = 0.0;       // single-photon coupling
    double drive_e = 0.0;  // driving amplitude
    double n_th = 0.0;     // mean thermal phonon number

    void validate() const {
        auto bad = [](const char* name, double v) {
            std::ostringstream oss;
            oss << "SystemParams: invalid " << name << " = " << v;
            throw InputError(oss.str());
        };
        if (!std::isfinite(omega_m) || omega_m <= 0.0) bad("omega_m", omega_m);
        if (!std::isfinite(gamma_m) || gamma_m <= 0.0) bad("gamma_m", gamma_m);
        if (!std::isfinite(kappa) || kappa <= 0.0) bad("kappa", kappa);
        if (!std::isfinite(delta0)) bad("delta0", delta0);
        if (!std::isfinite(g0) || g0 < 0.0) bad("g0", g0);
        if (!std::isfinite(drive_e) || drive_e < 0.0) bad("drive_e", drive_e);
        if (!std::isfinite(n_th) || n_th < 0.0) bad("n_th", n_th);
    }
};

/// Classical working point. `branches` lists every admissible
/// (n_c, effective detuning) root of the steady-state cubic, sorted by
/// photon number; the struct fields describe the principal (smallest-n_c)
/// branch.
struct SteadyState {
    double q_s = 0.0;
    double p_s = 0.0;      // zero identically
    double alpha_s = 0.0;  // real by phase choice of the drive
    double n_c = 0.0;      // alpha_s^2
    double delta_eff = 0.0;
    double g_eff = 0.0;

    struct Branch {
        double n_c;
        double delta_eff;
    };
    std::vector<Branch> branches;

    bool multistable() const { return branches.size() > 1; }
};

namespace detail {

// Roots of z^3 - 2 d0 z^2 + (d0^2 + k^2) z - c = 0, the steady-state
// cubic written in the scaled variable z = (g0^2/omega_m) n_c so all
// coefficients stay O(1). Real roots only, ascending.
inline std::vector<double> steady_cubic_roots(double d0, double kappa, double c) {
    const double b2 = -2.0 * d0;
    const double b1 = d0 * d0 + kappa * kappa;
    const double b0 = -c;

    // depressed form t^3 + P t + Q, z = t - b2/3
    const double shift = -b2 / 3.0;
    const double P = b1 - b2 * b2 / 3.0;
    const double Q = 2.0 * b2 * b2 * b2 / 27.0 - b2 * b1 / 3.0 + b0;

    std::vector<double> roots;
    const double disc = -4.0 * P * P * P - 27.0 * Q * Q;
    if (disc > 0.0) {
        // three distinct real roots, trigonometric form
        const double m = 2.0 * std::sqrt(-P / 3.0);
        const double arg = std::clamp(3.0 * Q / (P * m), -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k) {
            roots.push_back(m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) + shift);
        }
    } else {
        // one real root (Cardano); the remaining pair is complex
        const double half_q = -Q / 2.0;
        const double rad = std::sqrt(std::max(Q * Q / 4.0 + P * P * P / 27.0, 0.0));
        const double u = std::cbrt(half_q + rad);
        const double v = std::cbrt(half_q - rad);
        roots.push_back(u + v + shift);
    }

    // Newton polish on g(z) = z (k^2 + (d0 - z)^2) - c
    auto g = [&](double z) { return z * (kappa * kappa + (d0 - z) * (d0 - z)) - c; };
    auto gp = [&](double z) {
        return kappa * kappa + (d0 - z) * (d0 - z) - 2.0 * z * (d0 - z);
    };
    for (double& z : roots) {
        for (int it = 0; it < 4; ++it) {
            const double dgdz = gp(z);
            if (std::abs(dgdz) < 1e-12) break;  // double root at a fold
            const double step = g(z) / dgdz;
            z -= step;
            if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace detail

/// Solves the steady-state cubic
///   n_c [kappa^2 + (delta0 - g0^2 n_c / omega_m)^2] = E^2
/// and fills the working point from the smallest non-negative root.
inline SteadyState solve_steady_state(const SystemParams& p) {
    p.validate();
    SteadyState s;

    const double om = p.omega_m;
    const double beta = p.g0 * p.g0 / om;
    const double e2 = p.drive_e * p.drive_e;

    if (p.drive_e == 0.0) {
        s.branches.push_back({0.0, p.delta0});
    } else if (beta == 0.0) {
        const double nc = e2 / (p.kappa * p.kappa + p.delta0 * p.delta0);
        s.branches.push_back({nc, p.delta0});
    } else {
        const auto zs = detail::steady_cubic_roots(p.delta0, p.kappa, beta * e2);
        for (double z : zs) {
            if (z < -1e-14) continue;
            const double nc = std::max(z, 0.0) / beta;
            s.branches.push_back({nc, p.delta0 - z});
        }
        if (s.branches.empty()) {
            throw NumericalError("solve_steady_state: no admissible root found");
        }
    }

    const auto& principal = s.branches.front();
    s.n_c = principal.n_c;
    s.alpha_s = std::sqrt(principal.n_c);
    s.q_s = std::numbers::sqrt2 * p.g0 * principal.n_c / om;
    s.p_s = 0.0;
    s.delta_eff = principal.delta_eff;
    s.g_eff = std::numbers::sqrt2 * p.g0 * s.alpha_s;
    return s;
}

/// Drift matrix of the linearized fluctuations, ordering
/// (dq, dp, dX, dY):
///   [[ 0,    om,   0,    0 ],
///    [-om,  -gm,   G,    0 ],
///    [ 0,    0,   -k,    D ],
///    [ G,    0,   -D,   -k ]].
inline Eigen::Matrix4d build_drift(const SystemParams& p, const SteadyState& s) {
    Eigen::Matrix4d a = Eigen::Matrix4d::Zero();
    a(0, 1) = p.omega_m;
    a(1, 0) = -p.omega_m;
    a(1, 1) = -p.gamma_m;
    a(1, 2) = s.g_eff;
    a(2, 2) = -p.kappa;
    a(2, 3) = s.delta_eff;
    a(3, 0) = s.g_eff;
    a(3, 2) = -s.delta_eff;
    a(3, 3) = -p.kappa;
    return a;
}

/// Diffusion matrix diag(0, 2 gm (2 n_th + 1), 2 k, 2 k).
inline Eigen::Matrix4d build_diffusion(const SystemParams& p) {
    Eigen::Matrix4d d = Eigen::Matrix4d::Zero();
    d(1, 1) = 2.0 * p.gamma_m * (2.0 * p.n_th + 1.0);
    d(2, 2) = 2.0 * p.kappa;
    d(3, 3) = 2.0 * p.kappa;
    return d;
}

enum class Verdict { stable, marginal, unstable };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::stable: return "stable";
        case Verdict::marginal: return "marginal";
        default: return "unstable";
    }
}

/// Margins are declared marginal when within this band of zero; the
/// steady covariance diverges there and downstream refuses to evaluate.
inline constexpr double kMarginalBand = 1e-8;

struct RouthHurwitzResult {
    Verdict verdict = Verdict::unstable;
    double margin1 = 0.0;
    double margin2 = 0.0;

    bool stable() const { return verdict == Verdict::stable; }
};

/// Routh-Hurwitz stability conditions for the drift matrix:
///   m1 = om (D^2 + k^2) - G^2 D
///   m2 = 2 gm k {s+ s- + gm [v (D^2 + k^2) + 2 k om^2]} + D om G^2 v
/// with s+- = k^2 + (om +- D)^2 and v = gm + 2k. Stable iff both > 0.
inline RouthHurwitzResult stability_routh_hurwitz(const SystemParams& p,
                                                  const SteadyState& s) {
    const double om = p.omega_m, gm = p.gamma_m, k = p.kappa;
    const double d = s.delta_eff, g = s.g_eff;

    RouthHurwitzResult r;
    r.margin1 = om * (d * d + k * k) - g * g * d;
    const double sp = k * k + (om + d) * (om + d);
    const double sm = k * k + (om - d) * (om - d);
    const double v = gm + 2.0 * k;
    r.margin2 = 2.0 * gm * k * (sp * sm + gm * (v * (d * d + k * k) + 2.0 * k * om * om)) +
                d * om * g * g * v;

    if (r.margin1 > kMarginalBand && r.margin2 > kMarginalBand) {
        r.verdict = Verdict::stable;
    } else if (r.margin1 < -kMarginalBand || r.margin2 < -kMarginalBand) {
        r.verdict = Verdict::unstable;
    } else {
        r.verdict = Verdict::marginal;
    }
    return r;
}

struct SpectralResult {
    bool stable = false;
    double abscissa = 0.0;  // max Re(eigenvalue)
};

/// Spectral stability: stable iff every eigenvalue of A has real part
/// below -1e-12. Independent of (and authoritative over) the
/// Routh-Hurwitz margins.
inline SpectralResult stability_spectral(const Eigen::Matrix4d& a) {
    if (!a.allFinite()) {
        throw InputError("stability_spectral: non-finite drift matrix");
    }
    Eigen::EigenSolver<Eigen::Matrix4d> solver(a, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("stability_spectral: eigensolver failed");
    }
    SpectralResult r;
    r.abscissa = solver.eigenvalues().real().maxCoeff();
    r.stable = r.abscissa < -1e-12;
    return r;
}

}  // namespace omcoh
