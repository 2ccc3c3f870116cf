#pragma once

// Steady covariance of the linearized fluctuations: Lyapunov solve with a
// time-integration oracle, plus the full params -> Gaussian state pipeline.

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "omcoh/errors.hpp"
#include "omcoh/gaussian.hpp"
#include "omcoh/model.hpp"

namespace omcoh {

enum class CovMethod { lyapunov, ode_integration };

struct CovarianceSolution {
    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    double residual = 0.0;  // ||A V + V A^T + D||_F
    CovMethod method = CovMethod::lyapunov;
};

namespace detail {

inline double lyapunov_residual(const Eigen::Matrix4d& a, const Eigen::Matrix4d& d,
                                const Eigen::Matrix4d& v) {
    return (a * v + v * a.transpose() + d).norm();
}

}  // namespace detail

/// Solves A V + V A^T = -D by vectorizing into the 16x16 system
/// (I (x) A + A (x) I) vec(V) = -vec(D), then symmetrizing. Requires a
/// strictly stable A.
inline CovarianceSolution solve_lyapunov(const Eigen::Matrix4d& a,
                                         const Eigen::Matrix4d& d) {
    const SpectralResult spec = stability_spectral(a);
    if (!spec.stable) {
        std::ostringstream oss;
        oss << "solve_lyapunov: drift matrix not strictly stable (abscissa "
            << spec.abscissa << ")";
        throw StabilityError(oss.str(), 0.0, 0.0, spec.abscissa);
    }

    // M = I (x) A + A (x) I acting on column-major vec(V):
    // vec(A V) = (I (x) A) vec(V), vec(V A^T) = (A (x) I) vec(V).
    Eigen::Matrix<double, 16, 16> m = Eigen::Matrix<double, 16, 16>::Zero();
    for (int col = 0; col < 4; ++col) {
        m.block<4, 4>(4 * col, 4 * col) += a;
        for (int k = 0; k < 4; ++k) {
            m.block<4, 4>(4 * col, 4 * k).diagonal().array() += a(col, k);
        }
    }

    Eigen::Matrix<double, 16, 1> rhs;
    for (int col = 0; col < 4; ++col) rhs.segment<4>(4 * col) = -d.col(col);

    Eigen::FullPivLU<Eigen::Matrix<double, 16, 16>> lu(m);
    if (!lu.isInvertible()) {
        throw NumericalError("solve_lyapunov: singular vectorized system");
    }
    const Eigen::Matrix<double, 16, 1> x = lu.solve(rhs);

    CovarianceSolution sol;
    for (int col = 0; col < 4; ++col) sol.v.col(col) = x.segment<4>(4 * col);
    sol.v = 0.5 * (sol.v + sol.v.transpose()).eval();
    sol.residual = detail::lyapunov_residual(a, d, sol.v);
    sol.method = CovMethod::lyapunov;

    if (sol.residual > 1e-9 * std::max(1.0, sol.v.norm())) {
        std::ostringstream oss;
        oss << "solve_lyapunov: residual " << sol.residual << " above tolerance";
        throw NumericalError(oss.str());
    }
    return sol;
}

/// Integrates dV/dt = A V + V A^T + D from v0 with classical RK4 until the
/// derivative norm falls below 1e-10 (converged) or t_end is reached
/// (convergence error). Oracle path for solve_lyapunov.
inline CovarianceSolution integrate_covariance_ode(const Eigen::Matrix4d& a,
                                                   const Eigen::Matrix4d& d,
                                                   const Eigen::Matrix4d& v0,
                                                   double dt, double t_end) {
    if (!(dt > 0.0) || !(t_end > 0.0)) {
        throw InputError("integrate_covariance_ode: dt and t_end must be positive");
    }
    const SpectralResult spec = stability_spectral(a);
    if (!spec.stable) {
        std::ostringstream oss;
        oss << "integrate_covariance_ode: drift matrix not strictly stable (abscissa "
            << spec.abscissa << ")";
        throw StabilityError(oss.str(), 0.0, 0.0, spec.abscissa);
    }
    // accuracy precondition dt <= 0.01 / max rate
    const double max_rate = a.cwiseAbs().maxCoeff();
    if (dt * max_rate > 0.011) {
        std::ostringstream oss;
        oss << "integrate_covariance_ode: dt " << dt << " too large for rate "
            << max_rate;
        throw InputError(oss.str());
    }

    auto deriv = [&](const Eigen::Matrix4d& v) -> Eigen::Matrix4d {
        return a * v + v * a.transpose() + d;
    };

    constexpr double kDerivTol = 1e-10;
    Eigen::Matrix4d v = 0.5 * (v0 + v0.transpose());
    double deriv_norm = deriv(v).norm();
    const long n_steps = static_cast<long>(std::ceil(t_end / dt));
    for (long step = 0; step < n_steps; ++step) {
        const Eigen::Matrix4d k1 = deriv(v);
        deriv_norm = k1.norm();
        if (deriv_norm <= kDerivTol) break;
        const Eigen::Matrix4d k2 = deriv(v + 0.5 * dt * k1);
        const Eigen::Matrix4d k3 = deriv(v + 0.5 * dt * k2);
        const Eigen::Matrix4d k4 = deriv(v + dt * k3);
        v += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (deriv_norm > kDerivTol) {
        std::ostringstream oss;
        oss << "integrate_covariance_ode: derivative norm " << deriv_norm
            << " after t_end " << t_end;
        throw ConvergenceError(oss.str(), deriv_norm);
    }

    CovarianceSolution sol;
    sol.v = 0.5 * (v + v.transpose()).eval();
    sol.residual = detail::lyapunov_residual(a, d, sol.v);
    sol.method = CovMethod::ode_integration;
    return sol;
}

/// Oracle defaults: dt resolving the fastest oscillation, horizon
/// outlasting the slowest decay.
inline CovarianceSolution integrate_covariance_ode(const SystemParams& p,
                                                   const Eigen::Matrix4d& a,
                                                   const Eigen::Matrix4d& d,
                                                   const Eigen::Matrix4d& v0) {
    const double dt = 1e-3 / p.omega_m;
    const double t_end = 50.0 / std::min(p.gamma_m, p.kappa);
    return integrate_covariance_ode(a, d, v0, dt, t_end);
}

/// Full pipeline result: working point, steady covariance and the first
/// moments (q_s, 0, 2 alpha_s, 0) of the quadrature vector.
struct SteadyAnalysis {
    SteadyState steady;
    CovarianceSolution cov;
    Eigen::Vector4d displacement = Eigen::Vector4d::Zero();
    RouthHurwitzResult routh_hurwitz;
    SpectralResult spectral;

    GaussianState state() const {
        return GaussianState(cov.v, displacement);
    }
};

/// params -> working point -> drift/diffusion -> Lyapunov covariance.
/// Refuses marginal or unstable principal branches with a StabilityError
/// carrying the Routh-Hurwitz margins.
inline SteadyAnalysis steady_covariance(const SystemParams& p) {
    SteadyAnalysis out;
    out.steady = solve_steady_state(p);
    const Eigen::Matrix4d a = build_drift(p, out.steady);
    out.routh_hurwitz = stability_routh_hurwitz(p, out.steady);
    out.spectral = stability_spectral(a);

    if (out.routh_hurwitz.verdict == Verdict::marginal) {
        std::ostringstream oss;
        oss << "steady_covariance: marginally stable working point (margins "
            << out.routh_hurwitz.margin1 << ", " << out.routh_hurwitz.margin2 << ")";
        throw MarginalStabilityError(oss.str(), out.routh_hurwitz.margin1,
                                     out.routh_hurwitz.margin2, out.spectral.abscissa);
    }
    if (!out.spectral.stable) {
        std::ostringstream oss;
        oss << "steady_covariance: unstable working point (abscissa "
            << out.spectral.abscissa << ", margins " << out.routh_hurwitz.margin1
            << ", " << out.routh_hurwitz.margin2 << ")";
        throw StabilityError(oss.str(), out.routh_hurwitz.margin1,
                             out.routh_hurwitz.margin2, out.spectral.abscissa);
    }

    out.cov = solve_lyapunov(a, build_diffusion(p));
    out.displacement << out.steady.q_s, 0.0, 2.0 * out.steady.alpha_s, 0.0;
    return out;
}

/// Rotating-wave closed form for the mechanical variance,
///   n_th + 1/2 - 2 G^2 k (1/2 - n_th) / ((gm + 2k)(2 gm k + G^2)).
/// Reported as a diagnostic next to the Lyapunov value; the two use
/// different variance conventions and are not asserted equal.
struct RwaDiagnostic {
    double value = 0.0;
    bool regime_ok = false;  // omega_m >> G, kappa (factor 10)
};

inline RwaDiagnostic rwa_mechanical_variance(const SystemParams& p,
                                             const SteadyState& s) {
    const double g = s.g_eff, k = p.kappa, gm = p.gamma_m;
    RwaDiagnostic out;
    out.regime_ok = p.omega_m >= 10.0 * g && p.omega_m >= 10.0 * k;
    const double denom = (gm + 2.0 * k) * (2.0 * gm * k + g * g);
    double correction = 0.0;
    if (denom > 0.0) {
        correction = 2.0 * g * g * k * (0.5 - p.n_th) / denom;
    }
    out.value = p.n_th + 0.5 - correction;
    return out;
}

}  // namespace omcoh
