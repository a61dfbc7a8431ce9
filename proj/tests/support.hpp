// Shared helpers for the C++ test suites.
#pragma once

#include "elbowsim/dynamics.hpp"
#include "elbowsim/integrate.hpp"
#include "elbowsim/sim.hpp"

namespace testsupport {

using namespace elbowsim;

/// Closed-loop trace with the estimator update deliberately sign-flipped
/// (d_hat' = -ki sigma). The certificates must catch this; it guards the
/// checks themselves against being vacuous.
inline SimResult flipped_estimator_trace(const LyapGains& gains, const Vec2& d, double t_end,
                                         double dt) {
    ManipulatorParams p;
    SimConfig cfg;
    cfg.controller = gains;
    cfg.disturbance.d = d;
    cfg.t_end = t_end;
    cfg.dt = dt;

    auto deriv = [&](double t, const Eigen::VectorXd& y) {
        JointState s{y.segment<2>(0), y.segment<2>(2)};
        const TrajectoryPoint tr = desired_trajectory(t);
        const Vec2 d_hat = y.segment<2>(4);
        Eigen::VectorXd dy(6);
        dy.segment<2>(0) = s.qdot;
        dy.segment<2>(2) = forward_dynamics(p, s, lyapunov_torque(p, s, tr, gains, d_hat), d);
        dy.segment<2>(4) = -gains.ki * sliding_variables(s, tr, gains.lambda).sigma;
        return dy;
    };

    SimResult trace;
    trace.config = cfg;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(6);
    const std::size_t steps = cfg.step_count();
    auto record = [&](double t) {
        JointState s{y.segment<2>(0), y.segment<2>(2)};
        const TrajectoryPoint tr = desired_trajectory(t);
        const Vec2 d_hat = y.segment<2>(4);
        const Vec2 sigma = sliding_variables(s, tr, gains.lambda).sigma;
        trace.t.push_back(t);
        trace.q.push_back(s.q);
        trace.qdot.push_back(s.qdot);
        trace.qd.push_back(tr.qd);
        trace.qd_dot.push_back(tr.qd_dot);
        trace.u.push_back(lyapunov_torque(p, s, tr, gains, d_hat));
        trace.q_tilde.push_back(s.q - tr.qd);
        trace.sigma.push_back(sigma);
        trace.d_hat.push_back(d_hat);
        trace.v_lyap.push_back(0.5 * sigma.dot(mass_matrix(p, s.q) * sigma) +
                               0.5 * (d - d_hat).squaredNorm() / gains.ki);
    };
    record(0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        y = rk4_step(deriv, y, static_cast<double>(k) * dt, dt);
        record(static_cast<double>(k + 1) * dt);
    }
    return trace;
}

}  // namespace testsupport
