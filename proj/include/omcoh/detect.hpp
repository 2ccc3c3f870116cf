#pragma once

// All-optical readout of the mechanical covariance through a second,
// adiabatically eliminated cavity. The output field image of the
// mechanical quadratures is
//   v_out = g^2 R V_mec R^T + I,  g = G2 / sqrt(2 k2),
// where R = [[0,-1],[1,0]] is the quarter-turn the factor i in the
// output relation produces on (q, p), and the identity is the vacuum
// noise of the readout input.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "omcoh/errors.hpp"
#include "omcoh/gaussian.hpp"

namespace omcoh {

struct DetectionParams {
    double kappa2 = 0.1;  // decay rate of the readout cavity
    double g2 = 0.01;     // effective coupling
    double delta2 = 1.0;  // effective detuning; the scheme tunes it to omega_m
    double omega_m = 1.0;

    double gain() const { return g2 / std::sqrt(2.0 * kappa2); }

    void validate() const {
        if (!(kappa2 > 0.0) || !std::isfinite(kappa2)) {
            throw InputError("DetectionParams: kappa2 must be positive");
        }
        if (!(g2 >= 0.0) || !std::isfinite(g2)) {
            throw InputError("DetectionParams: g2 must be non-negative");
        }
        if (!std::isfinite(delta2)) {
            throw InputError("DetectionParams: delta2 must be finite");
        }
    }

    /// Validity conditions of the adiabatic output relation. A ratio
    /// threshold of 10 stands in for "much greater than"; each violated
    /// condition produces one warning, none otherwise.
    std::vector<std::string> validity_warnings() const {
        std::vector<std::string> w;
        if (delta2 != omega_m) {
            std::ostringstream oss;
            oss << "detuning delta2 = " << delta2 << " is not tuned to omega_m = "
                << omega_m;
            w.push_back(oss.str());
        }
        if (omega_m < 10.0 * kappa2) {
            std::ostringstream oss;
            oss << "resolved-sideband ratio omega_m/kappa2 = " << omega_m / kappa2
                << " below 10";
            w.push_back(oss.str());
        }
        if (g2 > 0.0 && kappa2 < 10.0 * g2) {
            std::ostringstream oss;
            oss << "bad-cavity ratio kappa2/g2 = " << kappa2 / g2 << " below 10";
            w.push_back(oss.str());
        }
        return w;
    }
};

inline Matrix2d detection_rotation() {
    Matrix2d r;
    r << 0.0, -1.0, 1.0, 0.0;
    return r;
}

struct OutputModel {
    double gain = 0.0;
    Matrix2d v_out = Matrix2d::Identity();
    std::vector<std::string> warnings;
};

namespace detail {

inline void require_physical_one_mode(const Matrix2d& v, const char* who) {
    if (!v.allFinite()) {
        throw InputError(std::string(who) + ": non-finite covariance");
    }
    if (std::abs(v(0, 1) - v(1, 0)) > 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff())) {
        throw InputError(std::string(who) + ": covariance not symmetric");
    }
    const double det = v.determinant();
    if (det < (1.0 - kVacuumSnap) * (1.0 - kVacuumSnap) || v(0, 0) <= 0.0) {
        std::ostringstream oss;
        oss << who << ": covariance below the vacuum bound (det " << det << ")";
        throw PhysicalityError(oss.str());
    }
}

}  // namespace detail

/// Mechanical covariance -> covariance of the readout output quadratures.
inline OutputModel output_covariance(const Matrix2d& v_mec, const DetectionParams& det) {
    det.validate();
    detail::require_physical_one_mode(v_mec, "output_covariance");

    OutputModel out;
    out.gain = det.gain();
    const Matrix2d r = detection_rotation();
    out.v_out = out.gain * out.gain * r * v_mec * r.transpose() + Matrix2d::Identity();
    out.v_out = 0.5 * (out.v_out + out.v_out.transpose()).eval();
    out.warnings = det.validity_warnings();
    return out;
}

/// Inverse map: V_mec = R^T (v_out - I) R / g^2. Exact round trip with
/// output_covariance.
inline Matrix2d reconstruct_mechanical(const Matrix2d& v_out, const DetectionParams& det) {
    det.validate();
    if (!(det.g2 > 0.0)) {
        throw InputError("reconstruct_mechanical: requires positive coupling g2");
    }
    if (!v_out.allFinite()) {
        throw InputError("reconstruct_mechanical: non-finite covariance");
    }
    const Matrix2d excess = v_out - Matrix2d::Identity();
    Eigen::SelfAdjointEigenSolver<Matrix2d> es(0.5 * (excess + excess.transpose()));
    if (es.eigenvalues().minCoeff() < -1e-6) {
        std::ostringstream oss;
        oss << "reconstruct_mechanical: output covariance below the vacuum floor "
               "(excess eigenvalue "
            << es.eigenvalues().minCoeff() << ")";
        throw MeasurementError(oss.str());
    }
    const double g = det.gain();
    const Matrix2d r = detection_rotation();
    return (r.transpose() * excess * r / (g * g)).eval();
}

/// m zero-mean Gaussian 2-vectors with covariance v_out, drawn from a
/// seeded generator through the principal matrix square root. Identical
/// (seed, m, v_out) reproduce identical records.
inline std::vector<Vector2d> sample_output_records(const Matrix2d& v_out, std::size_t m,
                                                   std::uint64_t seed) {
    if (m < 2) {
        throw InputError("sample_output_records: need at least 2 records");
    }
    if (!v_out.allFinite()) {
        throw InputError("sample_output_records: non-finite covariance");
    }
    Eigen::SelfAdjointEigenSolver<Matrix2d> es(0.5 * (v_out + v_out.transpose()));
    if (es.eigenvalues().minCoeff() <= 0.0) {
        std::ostringstream oss;
        oss << "sample_output_records: covariance not positive definite (eigenvalue "
            << es.eigenvalues().minCoeff() << ")";
        throw PhysicalityError(oss.str());
    }
    const Matrix2d sqrt_v = es.eigenvectors() *
                            es.eigenvalues().cwiseSqrt().asDiagonal() *
                            es.eigenvectors().transpose();

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<Vector2d> records(m);
    for (std::size_t i = 0; i < m; ++i) {
        Vector2d z;
        z << normal(rng), normal(rng);
        records[i] = sqrt_v * z;
    }
    return records;
}

struct CovarianceEstimate {
    Matrix2d cov = Matrix2d::Zero();
    Matrix2d std_error = Matrix2d::Zero();
    std::size_t samples = 0;
    bool degenerate = false;
};

/// Unbiased sample covariance with per-entry standard errors
/// SE_ij = sqrt((S_ii S_jj + S_ij^2) / (m - 1)).
inline CovarianceEstimate estimate_covariance(const std::vector<Vector2d>& records) {
    if (records.size() < 2) {
        throw InputError("estimate_covariance: need at least 2 records");
    }
    const double m = static_cast<double>(records.size());
    Vector2d mean = Vector2d::Zero();
    for (const auto& r : records) mean += r;
    mean /= m;

    Matrix2d s = Matrix2d::Zero();
    for (const auto& r : records) {
        const Vector2d c = r - mean;
        s += c * c.transpose();
    }
    s /= (m - 1.0);

    CovarianceEstimate est;
    est.cov = s;
    est.samples = records.size();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            est.std_error(i, j) = std::sqrt(
                std::max(s(i, i) * s(j, j) + s(i, j) * s(i, j), 0.0) / (m - 1.0));
        }
    }
    est.degenerate = s.cwiseAbs().maxCoeff() == 0.0;
    return est;
}

}  // namespace omcoh
