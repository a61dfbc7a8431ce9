#pragma once

#include <Eigen/Dense>

namespace elbowsim {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Physical constants of the two-link planar elbow arm.
/// Defaults are the benchmark arm used by the bundled presets.
struct ManipulatorParams {
    double m1 = 1.0;    ///< link masses [kg]
    double m2 = 1.0;
    double I1 = 0.25;   ///< rotational inertias about each link's center of mass [kg m^2]
    double I2 = 0.25;
    double l1 = 0.5;    ///< link lengths [m]
    double l2 = 0.5;
    double lc1 = 0.25;  ///< joint-to-center-of-mass distances [m]
    double lc2 = 0.25;
    double g = 9.81;    ///< gravitational acceleration [m/s^2]; 0 allowed for gravity-free tests

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Joint angles and velocities. q1 is measured from the horizontal,
/// q2 relative to link 1.
struct JointState {
    Vec2 q = Vec2::Zero();      ///< [rad]
    Vec2 qdot = Vec2::Zero();   ///< [rad/s]

    bool finite() const;
};

/// Desired position, velocity and acceleration at one instant.
struct TrajectoryPoint {
    Vec2 qd = Vec2::Zero();
    Vec2 qd_dot = Vec2::Zero();
    Vec2 qd_ddot = Vec2::Zero();
};

}  // namespace elbowsim
