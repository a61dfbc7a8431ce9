#pragma once

#include <Eigen/Dense>

namespace elbowsim {

/// One classical 4th-order Runge-Kutta step for y' = f(t, y).
/// f must return a vector of the same size as y.
template <typename F>
Eigen::VectorXd rk4_step(F&& f, const Eigen::VectorXd& y, double t, double dt) {
    const Eigen::VectorXd k1 = f(t, y);
    const Eigen::VectorXd k2 = f(t + 0.5 * dt, (y + 0.5 * dt * k1).eval());
    const Eigen::VectorXd k3 = f(t + 0.5 * dt, (y + 0.5 * dt * k2).eval());
    const Eigen::VectorXd k4 = f(t + dt, (y + dt * k3).eval());
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace elbowsim
