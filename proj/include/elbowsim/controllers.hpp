#pragma once

#include "elbowsim/types.hpp"

namespace elbowsim {

/// Combined tracking-error signals used by the Lyapunov-based laws.
///   q_tilde = q - qd
///   xi_dot  = qd_dot - lambda * q_tilde
///   xi_ddot = qd_ddot - lambda * (qdot - qd_dot)
///   sigma   = qdot - xi_dot  (= qtilde_dot + lambda * q_tilde)
struct SlidingVars {
    Vec2 sigma;
    Vec2 xi_dot;
    Vec2 xi_ddot;
    Vec2 q_tilde;
};

SlidingVars sliding_variables(const JointState& s, const TrajectoryPoint& traj, double lambda);

// ---------------------------------------------------------------------------
// Inverse dynamics (computed torque) with integral action
// ---------------------------------------------------------------------------

/// Scalar gains, each multiplying the 2x2 identity.
struct InvDynGains {
    double kd = 12.0;
    double kp = 21.0;
    double ki = 10.0;
};

/// Mutable controller state: the accumulated position-error integral.
struct InvDynState {
    Vec2 integral_error = Vec2::Zero();  ///< accumulated integral of (qd - q) [rad s]
    Vec2 prev_error = Vec2::Zero();      ///< last sampled (qd - q), for the trapezoidal update
    bool has_prev = false;
};

/// Torque for a given integral accumulator value (pure; no state update).
/// u = D(q) v + C(q, qdot) qdot + G(q) with
/// v = qd_ddot + kd (qd_dot - qdot) + kp (qd - q) + ki * integral_error.
Vec2 inverse_dynamics_torque(const ManipulatorParams& p, const JointState& s,
                             const TrajectoryPoint& traj, const InvDynGains& gains,
                             const Vec2& integral_error);

/// Discrete controller step: computes the torque from the current accumulator,
/// then advances the accumulator by the trapezoidal rule over dt.
Vec2 inverse_dynamics_control(const ManipulatorParams& p, const JointState& s,
                              const TrajectoryPoint& traj, const InvDynGains& gains,
                              InvDynState& ctl, double dt);

// ---------------------------------------------------------------------------
// Lyapunov-based controller with disturbance estimator
// ---------------------------------------------------------------------------

struct LyapGains {
    double kd = 2.0;      ///< damping gain on sigma
    double ki = 1.0;      ///< estimator gain (d_hat rate = ki * sigma)
    double lambda = 2.0;  ///< error-mix gain
};

struct LyapState {
    Vec2 d_hat = Vec2::Zero();      ///< disturbance estimate [N m], zero at t = 0
    Vec2 prev_sigma = Vec2::Zero(); ///< last sampled sigma, for the trapezoidal update
    bool has_prev = false;
};

/// u = D(q) xi_ddot + C(q, qdot) xi_dot + G(q) - kd * sigma - d_hat  (pure).
Vec2 lyapunov_torque(const ManipulatorParams& p, const JointState& s,
                     const TrajectoryPoint& traj, const LyapGains& gains,
                     const Vec2& d_hat);

/// Discrete controller step: torque from the current estimate, then
/// d_hat advanced by the trapezoidal rule on ki * sigma.
Vec2 lyapunov_control(const ManipulatorParams& p, const JointState& s,
                      const TrajectoryPoint& traj, const LyapGains& gains,
                      LyapState& ctl, double dt);

// ---------------------------------------------------------------------------
// Discontinuous Lyapunov-based controller (boundary-layer regularized)
// ---------------------------------------------------------------------------

struct DiscGains {
    double kd_switch = 5.0;  ///< switching gain [N m]; must dominate the disturbance
    double lambda = 2.0;
    double epsilon = 1e-2;   ///< boundary-layer width [rad/s]
};

/// sigma / ||sigma|| outside the boundary layer, sigma / epsilon inside.
/// Norm never exceeds 1.
Vec2 saturated_direction(const Vec2& sigma, double epsilon);

/// u = D(q) xi_ddot + C(q, qdot) xi_dot + G(q) - kd_switch * sat(sigma).
/// Stateless.
Vec2 discontinuous_control(const ManipulatorParams& p, const JointState& s,
                           const TrajectoryPoint& traj, const DiscGains& gains);

}  // namespace elbowsim
