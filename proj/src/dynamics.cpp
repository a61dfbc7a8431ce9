#include "elbowsim/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace elbowsim {

namespace {

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string("ManipulatorParams.") + name +
                                    ": must be strictly positive and finite");
    }
}

}  // namespace

void ManipulatorParams::validate() const {
    check_positive(m1, "m1");
    check_positive(m2, "m2");
    check_positive(I1, "I1");
    check_positive(I2, "I2");
    check_positive(l1, "l1");
    check_positive(l2, "l2");
    check_positive(lc1, "lc1");
    check_positive(lc2, "lc2");
    if (lc1 > l1) throw std::invalid_argument("ManipulatorParams.lc1: must not exceed l1");
    if (lc2 > l2) throw std::invalid_argument("ManipulatorParams.lc2: must not exceed l2");
    if (!(g >= 0.0) || !std::isfinite(g)) {
        throw std::invalid_argument("ManipulatorParams.g: must be finite and >= 0");
    }
}

bool JointState::finite() const {
    return q.allFinite() && qdot.allFinite();
}

Mat2 mass_matrix(const ManipulatorParams& p, const Vec2& q) {
    const double c2 = std::cos(q[1]);
    const double d11 = p.m1 * p.lc1 * p.lc1 +
                       p.m2 * (p.l1 * p.l1 + p.lc2 * p.lc2 + 2.0 * p.l1 * p.lc2 * c2) +
                       p.I1 + p.I2;
    const double d12 = p.m2 * (p.lc2 * p.lc2 + p.l1 * p.lc2 * c2) + p.I2;
    const double d22 = p.m2 * p.lc2 * p.lc2 + p.I2;
    Mat2 d;
    d << d11, d12,
         d12, d22;
    return d;
}

Mat2 coriolis_matrix(const ManipulatorParams& p, const Vec2& q, const Vec2& qdot) {
    const double h = -p.m2 * p.l1 * p.lc2 * std::sin(q[1]);
    Mat2 c;
    c << h * qdot[1], h * (qdot[0] + qdot[1]),
        -h * qdot[0], 0.0;
    return c;
}

Vec2 gravity_vector(const ManipulatorParams& p, const Vec2& q) {
    const double c1 = std::cos(q[0]);
    const double c12 = std::cos(q[0] + q[1]);
    return {(p.m1 * p.lc1 + p.m2 * p.l1) * p.g * c1 + p.m2 * p.lc2 * p.g * c12,
            p.m2 * p.lc2 * p.g * c12};
}

double potential_energy(const ManipulatorParams& p, const Vec2& q) {
    const double s1 = std::sin(q[0]);
    const double s12 = std::sin(q[0] + q[1]);
    return p.g * (p.m1 * p.lc1 * s1 + p.m2 * (p.l1 * s1 + p.lc2 * s12));
}

Vec2 forward_dynamics(const ManipulatorParams& p, const JointState& s,
                      const Vec2& u, const Vec2& d) {
    if (!s.finite() || !u.allFinite() || !d.allFinite()) {
        throw std::invalid_argument("forward_dynamics: non-finite input");
    }
    const Mat2 dm = mass_matrix(p, s.q);
    const double det = dm(0, 0) * dm(1, 1) - dm(0, 1) * dm(1, 0);
    if (!(dm(0, 0) > 0.0) || !(det > 0.0)) {
        throw std::domain_error("forward_dynamics: mass matrix not positive definite");
    }
    const Vec2 rhs = u + d - coriolis_matrix(p, s.q, s.qdot) * s.qdot - gravity_vector(p, s.q);
    return Vec2{(dm(1, 1) * rhs[0] - dm(0, 1) * rhs[1]) / det,
                (dm(0, 0) * rhs[1] - dm(1, 0) * rhs[0]) / det};
}

double total_energy(const ManipulatorParams& p, const JointState& s) {
    const Mat2 d = mass_matrix(p, s.q);
    return 0.5 * s.qdot.dot(d * s.qdot) + potential_energy(p, s.q);
}

}  // namespace elbowsim
