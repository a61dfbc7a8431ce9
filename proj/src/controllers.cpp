#include "elbowsim/controllers.hpp"

#include <cmath>

#include "elbowsim/dynamics.hpp"

namespace elbowsim {

SlidingVars sliding_variables(const JointState& s, const TrajectoryPoint& traj, double lambda) {
    SlidingVars v;
    v.q_tilde = s.q - traj.qd;
    const Vec2 q_tilde_dot = s.qdot - traj.qd_dot;
    v.xi_dot = traj.qd_dot - lambda * v.q_tilde;
    v.xi_ddot = traj.qd_ddot - lambda * q_tilde_dot;
    v.sigma = q_tilde_dot + lambda * v.q_tilde;  // equals qdot - xi_dot
    return v;
}

Vec2 inverse_dynamics_torque(const ManipulatorParams& p, const JointState& s,
                             const TrajectoryPoint& traj, const InvDynGains& gains,
                             const Vec2& integral_error) {
    const Vec2 v = traj.qd_ddot + gains.kd * (traj.qd_dot - s.qdot) +
                   gains.kp * (traj.qd - s.q) + gains.ki * integral_error;
    return mass_matrix(p, s.q) * v + coriolis_matrix(p, s.q, s.qdot) * s.qdot +
           gravity_vector(p, s.q);
}

Vec2 inverse_dynamics_control(const ManipulatorParams& p, const JointState& s,
                              const TrajectoryPoint& traj, const InvDynGains& gains,
                              InvDynState& ctl, double dt) {
    const Vec2 u = inverse_dynamics_torque(p, s, traj, gains, ctl.integral_error);
    const Vec2 err = traj.qd - s.q;
    // Trapezoid over [t - dt, t]; the first call has no left endpoint yet.
    const Vec2 left = ctl.has_prev ? ctl.prev_error : err;
    ctl.integral_error += 0.5 * dt * (left + err);
    ctl.prev_error = err;
    ctl.has_prev = true;
    return u;
}

Vec2 lyapunov_torque(const ManipulatorParams& p, const JointState& s,
                     const TrajectoryPoint& traj, const LyapGains& gains,
                     const Vec2& d_hat) {
    const SlidingVars sv = sliding_variables(s, traj, gains.lambda);
    return mass_matrix(p, s.q) * sv.xi_ddot + coriolis_matrix(p, s.q, s.qdot) * sv.xi_dot +
           gravity_vector(p, s.q) - gains.kd * sv.sigma - d_hat;
}

Vec2 lyapunov_control(const ManipulatorParams& p, const JointState& s,
                      const TrajectoryPoint& traj, const LyapGains& gains,
                      LyapState& ctl, double dt) {
    const Vec2 u = lyapunov_torque(p, s, traj, gains, ctl.d_hat);
    const Vec2 sigma = sliding_variables(s, traj, gains.lambda).sigma;
    const Vec2 left = ctl.has_prev ? ctl.prev_sigma : sigma;
    ctl.d_hat += 0.5 * dt * gains.ki * (left + sigma);
    ctl.prev_sigma = sigma;
    ctl.has_prev = true;
    return u;
}

Vec2 saturated_direction(const Vec2& sigma, double epsilon) {
    const double n = sigma.norm();
    if (n >= epsilon) return sigma / n;
    return sigma / epsilon;
}

Vec2 discontinuous_control(const ManipulatorParams& p, const JointState& s,
                           const TrajectoryPoint& traj, const DiscGains& gains) {
    const SlidingVars sv = sliding_variables(s, traj, gains.lambda);
    return mass_matrix(p, s.q) * sv.xi_ddot + coriolis_matrix(p, s.q, s.qdot) * sv.xi_dot +
           gravity_vector(p, s.q) -
           gains.kd_switch * saturated_direction(sv.sigma, gains.epsilon);
}

}  // namespace elbowsim
