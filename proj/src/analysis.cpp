#include "elbowsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace elbowsim {

HurwitzResult hurwitz_check(const CubicCharPoly& poly) {
    HurwitzResult r;
    r.margin = poly.kd * poly.kp - poly.ki;
    r.stable = poly.kd > 0.0 && poly.ki > 0.0 && r.margin > 0.0;
    return r;
}

double steady_state_error(const CubicCharPoly& poly, double delta) {
    if (!std::isfinite(delta)) {
        throw std::invalid_argument("steady_state_error: delta must be finite");
    }
    if (!hurwitz_check(poly).stable) {
        throw std::domain_error(
            "steady_state_error: polynomial is not Hurwitz, final value undefined");
    }
    // lim_{s->0} s * s/(s^3 + kd s^2 + kp s + ki) * delta/s = 0 * delta / ki.
    return 0.0 * delta;
}

bool CertificateReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const CertificateCheck& c) { return c.passed; });
}

const CertificateCheck& CertificateReport::check(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw std::out_of_range("no certificate named " + name);
}

CertificateReport lyapunov_certificates(const SimResult& trace, const LyapGains& gains,
                                        const Vec2& true_d, const CertificateTolerances& tol) {
    if (!trace.has_sigma() || !trace.has_d_hat() || !trace.has_v()) {
        throw std::invalid_argument(
            "lyapunov_certificates: trace lacks sigma/d_hat/V channels "
            "(not produced by the Lyapunov controller)");
    }
    const std::size_t n = trace.size();
    if (n < 3) throw std::invalid_argument("lyapunov_certificates: trace too short");

    const double dt = trace.t[1] - trace.t[0];
    const double v0 = trace.v_lyap.front();
    const double v_scale = std::max(1.0, std::abs(v0));

    CertificateReport report;

    // sigma' Kd sigma per step, shared by several checks.
    std::vector<double> power(n);
    for (std::size_t k = 0; k < n; ++k) power[k] = gains.kd * trace.sigma[k].squaredNorm();

    {
        CertificateCheck c;
        c.name = "v_monotone";
        c.tolerance = tol.v_step_increase >= 0.0
                          ? tol.v_step_increase
                          : std::max(1e-4 * std::abs(v0), 1e-8);
        c.worst_violation = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double rise = trace.v_lyap[k + 1] - trace.v_lyap[k];
            if (rise > c.worst_violation) {
                c.worst_violation = rise;
                c.worst_step = k + 1;
            }
        }
        c.passed = c.worst_violation < c.tolerance;
        report.checks.push_back(c);
    }

    {
        CertificateCheck c;
        c.name = "vdot_dissipation";
        c.tolerance = tol.vdot_coeff * dt * dt * v_scale;
        c.worst_violation = 0.0;
        for (std::size_t k = 1; k + 1 < n; ++k) {
            const double vdot = (trace.v_lyap[k + 1] - trace.v_lyap[k - 1]) / (2.0 * dt);
            const double residual = std::abs(vdot + power[k]);
            if (residual > c.worst_violation) {
                c.worst_violation = residual;
                c.worst_step = k;
            }
        }
        c.passed = c.worst_violation < c.tolerance;
        report.checks.push_back(c);
    }

    {
        CertificateCheck c;
        c.name = "l2_budget";
        c.tolerance = tol.l2_budget_slack >= 0.0 ? tol.l2_budget_slack
                                                 : 100.0 * dt * dt * v_scale;
        c.worst_violation = -std::numeric_limits<double>::infinity();
        double integral = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0) integral += 0.5 * dt * (power[k - 1] + power[k]);
            const double excess = integral - v0;
            if (excess > c.worst_violation) {
                c.worst_violation = excess;
                c.worst_step = k;
            }
        }
        c.passed = c.worst_violation < c.tolerance;
        report.checks.push_back(c);
    }

    {
        CertificateCheck c;
        c.name = "passivity";
        // V1 = (1/2) d_tilde' Ki^{-1} d_tilde; supply rate -sigma' d_tilde.
        auto v1_at = [&](std::size_t k) {
            const Vec2 d_tilde = true_d - trace.d_hat[k];
            return 0.5 * d_tilde.squaredNorm() / gains.ki;
        };
        const double v1_0 = v1_at(0);
        c.tolerance = tol.passivity_rel * std::max(1.0, std::abs(v1_0));
        c.worst_violation = 0.0;
        double supplied = 0.0;
        double prev_rate = -trace.sigma[0].dot(true_d - trace.d_hat[0]);
        for (std::size_t k = 1; k < n; ++k) {
            const double rate = -trace.sigma[k].dot(true_d - trace.d_hat[k]);
            supplied += 0.5 * dt * (prev_rate + rate);
            prev_rate = rate;
            const double mismatch = std::abs(supplied - (v1_at(k) - v1_0));
            if (mismatch > c.worst_violation) {
                c.worst_violation = mismatch;
                c.worst_step = k;
            }
        }
        c.passed = c.worst_violation < c.tolerance;
        report.checks.push_back(c);
    }

    return report;
}

}  // namespace elbowsim
