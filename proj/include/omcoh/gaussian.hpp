#pragma once

// Gaussian-state toolkit for quadrature covariance matrices.
//
// Conventions used throughout:
//   - quadratures q = b + b^dag, p = i(b^dag - b), mode-major ordering
//     (q1, p1, q2, p2, ...), so the vacuum covariance is the identity and
//     a thermal mode with occupation n has variance 2n + 1;
//   - every entropy-like quantity is in nats (natural logarithm).

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "omcoh/errors.hpp"

namespace omcoh {

using Eigen::Matrix2d;
using Eigen::Matrix4d;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector4d;
using Eigen::VectorXd;

/// A symplectic eigenvalue this far below 1 is treated as rounding noise
/// and snapped to the vacuum value.
inline constexpr double kVacuumSnap = 1e-9;

/// Bosonic entropy function
///   F(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2),  x >= 1,
/// evaluated in the cancellation-free form u log1p(1/u) + log1p(u) with
/// u = (x-1)/2. F(1) = 0 by the x -> 1 limit.
inline double f_entropy(double x) {
    if (!std::isfinite(x)) {
        throw InputError("f_entropy: non-finite argument");
    }
    if (x < 1.0 - kVacuumSnap) {
        std::ostringstream oss;
        oss << "f_entropy: argument " << x << " below the physical bound 1";
        throw PhysicalityError(oss.str());
    }
    const double u = 0.5 * (x - 1.0);
    if (u <= 0.0) return 0.0;
    return u * std::log1p(1.0 / u) + std::log1p(u);
}

/// N-mode Gaussian state: covariance V (2N x 2N, symmetric) and first
/// moments d (length 2N).
struct GaussianState {
    int n_modes = 0;
    MatrixXd V;
    VectorXd d;

    GaussianState(MatrixXd cov, VectorXd mean)
        : n_modes(static_cast<int>(mean.size()) / 2),
          V(std::move(cov)),
          d(std::move(mean)) {
        if (d.size() < 2 || d.size() % 2 != 0) {
            throw InputError("GaussianState: first-moment vector must have even length >= 2");
        }
        if (V.rows() != d.size() || V.cols() != d.size()) {
            throw InputError("GaussianState: covariance shape does not match moment vector");
        }
        if (!V.allFinite() || !d.allFinite()) {
            throw InputError("GaussianState: non-finite entries");
        }
        const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
        if ((V - V.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
            throw InputError("GaussianState: covariance is not symmetric");
        }
        V = 0.5 * (V + V.transpose().eval());
    }

    Matrix2d mode_block(int i) const { return V.block<2, 2>(2 * i, 2 * i); }
    Vector2d mode_mean(int i) const { return d.segment<2>(2 * i); }
};

/// Block-diagonal symplectic form, [[0,1],[-1,0]] per mode.
inline MatrixXd symplectic_form(int n_modes) {
    MatrixXd omega = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int i = 0; i < n_modes; ++i) {
        omega(2 * i, 2 * i + 1) = 1.0;
        omega(2 * i + 1, 2 * i) = -1.0;
    }
    return omega;
}

/// Symplectic spectrum, sorted descending.
struct SymplecticSpectrum {
    std::vector<double> nus;

    double min() const { return nus.back(); }
};

/// Symplectic eigenvalues as the moduli of the eigenvalues of i Omega V.
/// The 2N eigenvalues of Omega V come in +-(i nu) pairs; the moduli are
/// collected, sorted descending and de-duplicated pairwise.
inline SymplecticSpectrum symplectic_eigenvalues(const GaussianState& state) {
    const int n = state.n_modes;
    const MatrixXd m = symplectic_form(n) * state.V;
    Eigen::EigenSolver<MatrixXd> solver(m, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("symplectic_eigenvalues: eigensolver failed");
    }
    std::vector<double> mods(2 * n);
    for (int i = 0; i < 2 * n; ++i) mods[i] = std::abs(solver.eigenvalues()[i]);
    std::sort(mods.begin(), mods.end(), std::greater<double>());

    SymplecticSpectrum spec;
    spec.nus.reserve(n);
    for (int i = 0; i < n; ++i) {
        double nu = 0.5 * (mods[2 * i] + mods[2 * i + 1]);
        if (nu > 1.0 - kVacuumSnap && nu < 1.0) nu = 1.0;
        spec.nus.push_back(nu);
    }
    return spec;
}

/// Two-mode closed form: with Gamma = Det V_mec + Det V_opt + 2 Det V_cor,
///   nu_{1,2}^2 = (Gamma +- sqrt(Gamma^2 - 4 Det V)) / 2.
/// Returns (nu1, nu2) with nu1 >= nu2.
inline std::pair<double, double> symplectic_eigenvalues_closed_form(const Matrix4d& v) {
    if (!v.allFinite()) {
        throw InputError("symplectic_eigenvalues_closed_form: non-finite covariance");
    }
    const double det_mec = v.block<2, 2>(0, 0).determinant();
    const double det_opt = v.block<2, 2>(2, 2).determinant();
    const double det_cor = v.block<2, 2>(0, 2).determinant();
    const double gamma = det_mec + det_opt + 2.0 * det_cor;
    const double det_v = v.determinant();

    double disc = gamma * gamma - 4.0 * det_v;
    const double disc_scale = std::max(1.0, gamma * gamma);
    if (disc < -kVacuumSnap * disc_scale) {
        std::ostringstream oss;
        oss << "symplectic_eigenvalues_closed_form: negative discriminant " << disc;
        throw PhysicalityError(oss.str());
    }
    disc = std::max(disc, 0.0);

    const double root = std::sqrt(disc);
    const double nu1sq = 0.5 * (gamma + root);
    const double nu2sq = std::max(0.5 * (gamma - root), 0.0);
    double nu1 = std::sqrt(std::max(nu1sq, 0.0));
    double nu2 = std::sqrt(nu2sq);
    if (nu1 > 1.0 - kVacuumSnap && nu1 < 1.0) nu1 = 1.0;
    if (nu2 > 1.0 - kVacuumSnap && nu2 < 1.0) nu2 = 1.0;
    return {nu1, nu2};
}

/// S(V) = sum_i F(nu_i), in nats.
inline double von_neumann_entropy(const GaussianState& state) {
    const SymplecticSpectrum spec = symplectic_eigenvalues(state);
    double s = 0.0;
    for (double nu : spec.nus) s += f_entropy(nu);
    return s;
}

/// Mean occupation of one mode, n = (V11 + V22 + d1^2 + d2^2 - 2) / 4.
inline double mean_occupation(const Matrix2d& v_block, const Vector2d& d_block) {
    if (!v_block.allFinite() || !d_block.allFinite()) {
        throw InputError("mean_occupation: non-finite input");
    }
    const double n =
        0.25 * (v_block(0, 0) + v_block(1, 1) + d_block(0) * d_block(0) +
                d_block(1) * d_block(1) - 2.0);
    if (n < -1e-6) {
        std::ostringstream oss;
        oss << "mean_occupation: negative occupation " << n;
        throw PhysicalityError(oss.str());
    }
    return std::max(n, 0.0);
}

/// Relative-entropy coherence of a one-mode Gaussian state,
///   C = -F(nu) + F(2 n + 1),  nu = sqrt(Det V).
/// Zero exactly for any displaced-free thermal state.
inline double coherence_one_mode(const Matrix2d& v_block, const Vector2d& d_block) {
    const double det = v_block.determinant();
    if (det < 0.0) {
        std::ostringstream oss;
        oss << "coherence_one_mode: negative block determinant " << det;
        throw PhysicalityError(oss.str());
    }
    double nu = std::sqrt(det);
    if (nu > 1.0 - kVacuumSnap && nu < 1.0) nu = 1.0;
    const double n = mean_occupation(v_block, d_block);
    const double c = -f_entropy(nu) + f_entropy(2.0 * n + 1.0);
    return (c < 0.0 && c >= -kVacuumSnap) ? 0.0 : c;
}

/// Relative-entropy coherence of a two-mode Gaussian state,
///   C = sum_i [-F(nu_i) + F(2 n_i + 1)],
/// with nu_i the symplectic spectrum of the full covariance and n_i the
/// per-mode occupations.
inline double coherence_two_mode(const GaussianState& state) {
    if (state.n_modes != 2) {
        throw InputError("coherence_two_mode: expects a two-mode state");
    }
    const SymplecticSpectrum spec = symplectic_eigenvalues(state);
    double c = 0.0;
    for (double nu : spec.nus) c -= f_entropy(nu);
    for (int i = 0; i < 2; ++i) {
        const double n = mean_occupation(state.mode_block(i), state.mode_mean(i));
        c += f_entropy(2.0 * n + 1.0);
    }
    return (c < 0.0 && c >= -kVacuumSnap) ? 0.0 : c;
}

/// Mutual information of a two-mode Gaussian state,
///   I = F(a) + F(b) - F(nu1) - F(nu2),
/// with a = sqrt(Det V_mec), b = sqrt(Det V_opt) and the closed-form
/// symplectic eigenvalues of the full covariance.
inline double mutual_information(const GaussianState& state) {
    if (state.n_modes != 2) {
        throw InputError("mutual_information: expects a two-mode state");
    }
    const Matrix4d v = state.V;
    auto [nu1, nu2] = symplectic_eigenvalues_closed_form(v);
    double a = std::sqrt(std::max(v.block<2, 2>(0, 0).determinant(), 0.0));
    double b = std::sqrt(std::max(v.block<2, 2>(2, 2).determinant(), 0.0));
    if (a > 1.0 - kVacuumSnap && a < 1.0) a = 1.0;
    if (b > 1.0 - kVacuumSnap && b < 1.0) b = 1.0;
    const double mi = f_entropy(a) + f_entropy(b) - f_entropy(nu1) - f_entropy(nu2);
    return (mi < 0.0 && mi >= -kVacuumSnap) ? 0.0 : mi;
}

/// Coherence budget of one two-mode state. delta_c is stored exactly as
/// c_tot - c_mec - c_opt; mutual_info is computed independently through
/// the closed-form spectrum, so |delta_c - mutual_info| is a live
/// cross-check of the two spectral routes.
struct CoherenceReport {
    double c_mec = 0.0;
    double c_opt = 0.0;
    double c_tot = 0.0;
    double delta_c = 0.0;
    double mutual_info = 0.0;
    double nu1 = 1.0;
    double nu2 = 1.0;
    double a = 1.0;
    double b = 1.0;
};

inline CoherenceReport coherence_difference(const GaussianState& state) {
    if (state.n_modes != 2) {
        throw InputError("coherence_difference: expects a two-mode state");
    }
    CoherenceReport report;
    report.c_mec = coherence_one_mode(state.mode_block(0), state.mode_mean(0));
    report.c_opt = coherence_one_mode(state.mode_block(1), state.mode_mean(1));
    report.c_tot = coherence_two_mode(state);
    report.delta_c = report.c_tot - report.c_mec - report.c_opt;
    report.mutual_info = mutual_information(state);

    const Matrix4d v = state.V;
    auto [nu1, nu2] = symplectic_eigenvalues_closed_form(v);
    report.nu1 = nu1;
    report.nu2 = nu2;
    report.a = std::sqrt(std::max(v.block<2, 2>(0, 0).determinant(), 0.0));
    report.b = std::sqrt(std::max(v.block<2, 2>(2, 2).determinant(), 0.0));
    return report;
}

}  // namespace omcoh
