#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "elbowsim/sim.hpp"

namespace elbowsim {

/// Per-joint closed-loop characteristic polynomial s^3 + kd s^2 + kp s + ki
/// of the inverse-dynamics law.
struct CubicCharPoly {
    double kd = 0.0;
    double kp = 0.0;
    double ki = 0.0;
};

struct HurwitzResult {
    bool stable = false;
    double margin = 0.0;  ///< kd * kp - ki; positive is necessary for stability
};

/// Routh-Hurwitz test for the cubic: stable iff kd > 0, ki > 0 and kd*kp > ki.
HurwitzResult hurwitz_check(const CubicCharPoly& poly);

/// Asymptotic tracking error left by a constant per-joint disturbance delta.
/// The closed-loop transfer from delta has a zero at s = 0, so the final
/// value is exactly 0 for every Hurwitz gain triple. Throws std::domain_error
/// for non-Hurwitz polynomials (no final value) and std::invalid_argument for
/// non-finite delta.
double steady_state_error(const CubicCharPoly& poly, double delta);

/// One audited inequality or identity over a simulation trace.
struct CertificateCheck {
    std::string name;
    bool passed = false;
    double worst_violation = 0.0;  ///< most positive violation found (finite even on failure)
    std::size_t worst_step = 0;
    double tolerance = 0.0;
};

struct CertificateReport {
    std::vector<CertificateCheck> checks;
    bool all_passed() const;
    const CertificateCheck& check(const std::string& name) const;
};

/// Tolerances for lyapunov_certificates. Negative means "derive the default
/// from the trace": the per-step monotonicity bound becomes
/// max(1e-4 * |V(0)|, 1e-8) and the finite-difference bound c * dt^2.
struct CertificateTolerances {
    double v_step_increase = -1.0;  ///< absolute per-step allowance for V(k+1) - V(k)
    double vdot_coeff = 500.0;      ///< c in |dV/dt + sigma' Kd sigma| < c * dt^2 * max(1, |V0|)
    double l2_budget_slack = -1.0;  ///< allowance on running integral vs V(0); default scales like dt^2
    double passivity_rel = 1e-4;    ///< relative bound on the passivity identity mismatch
};

/// Audits a Lyapunov-controller trace against the law's own stability story:
///   v_monotone        V(k+1) - V(k) stays below the per-step allowance
///   vdot_dissipation  central-difference dV/dt matches -sigma' Kd sigma
///   l2_budget         running integral of sigma' Kd sigma never exceeds V(0)
///   passivity         integral of -sigma' d_tilde equals V1(t) - V1(0)
/// true_d is the simulation-side knowledge of the injected disturbance.
/// Throws std::invalid_argument if the trace was not produced by the
/// Lyapunov law (missing sigma/d_hat/V channels) or is too short.
CertificateReport lyapunov_certificates(const SimResult& trace, const LyapGains& gains,
                                        const Vec2& true_d,
                                        const CertificateTolerances& tol = {});

}  // namespace elbowsim
