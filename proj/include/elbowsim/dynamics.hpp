#pragma once

#include "elbowsim/types.hpp"

namespace elbowsim {

/// Inertia matrix D(q). Symmetric positive definite for all q.
Mat2 mass_matrix(const ManipulatorParams& p, const Vec2& q);

/// Coriolis/centrifugal matrix C(q, qdot), Christoffel construction.
/// This choice makes dD/dt - 2C skew-symmetric along any trajectory.
Mat2 coriolis_matrix(const ManipulatorParams& p, const Vec2& q, const Vec2& qdot);

/// Gravity torque G(q), the configuration gradient of potential_energy.
Vec2 gravity_vector(const ManipulatorParams& p, const Vec2& q);

/// Gravitational potential U(q), zero at q = (0, 0).
double potential_energy(const ManipulatorParams& p, const Vec2& q);

/// Joint accelerations under torque u plus load disturbance d:
/// solves D(q) qddot = u + d - C(q, qdot) qdot - G(q).
/// Throws std::invalid_argument on non-finite input and std::domain_error
/// if D(q) is not positive definite (unreachable for valid params).
Vec2 forward_dynamics(const ManipulatorParams& p, const JointState& s,
                      const Vec2& u, const Vec2& d);

/// Kinetic plus potential energy [J].
double total_energy(const ManipulatorParams& p, const JointState& s);

}  // namespace elbowsim
