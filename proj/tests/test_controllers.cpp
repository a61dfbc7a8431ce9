#include <doctest.h>

#include <numbers>
#include <random>

#include "elbowsim/controllers.hpp"
#include "elbowsim/dynamics.hpp"
#include "elbowsim/sim.hpp"

using namespace elbowsim;

namespace {

TrajectoryPoint random_traj(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TrajectoryPoint t;
    t.qd = {u(rng), u(rng)};
    t.qd_dot = {u(rng), u(rng)};
    t.qd_ddot = {u(rng), u(rng)};
    return t;
}

Vec2 feedforward(const ManipulatorParams& p, const TrajectoryPoint& tr) {
    JointState s{tr.qd, tr.qd_dot};
    return mass_matrix(p, tr.qd) * tr.qd_ddot + coriolis_matrix(p, tr.qd, tr.qd_dot) * tr.qd_dot +
           gravity_vector(p, tr.qd);
}

}  // namespace

TEST_CASE("sliding variables") {
    SUBCASE("vanish on the trajectory") {
        TrajectoryPoint tr = desired_trajectory(1.3);
        JointState s{tr.qd, tr.qd_dot};
        const SlidingVars v = sliding_variables(s, tr, 2.0);
        CHECK(v.sigma.norm() == 0.0);
        CHECK(v.q_tilde.norm() == 0.0);
    }

    SUBCASE("position error alone scales by lambda") {
        TrajectoryPoint tr;  // zero reference
        JointState s;
        s.q = {0.1, 0.0};
        const SlidingVars v = sliding_variables(s, tr, 2.0);
        CHECK(v.sigma[0] == doctest::Approx(0.2).epsilon(1e-15));
        CHECK(v.sigma[1] == 0.0);
    }

    SUBCASE("sigma equals qtilde_dot + lambda qtilde exactly") {
        std::mt19937 rng(201);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int i = 0; i < 200; ++i) {
            TrajectoryPoint tr = random_traj(rng);
            JointState s{{u(rng), u(rng)}, {u(rng), u(rng)}};
            const double lambda = std::abs(u(rng)) + 0.1;
            const SlidingVars v = sliding_variables(s, tr, lambda);
            const Vec2 expected = (s.qdot - tr.qd_dot) + lambda * (s.q - tr.qd);
            CHECK((v.sigma - expected).norm() == 0.0);
        }
    }
}

TEST_CASE("all three laws reduce to the same feedforward at zero error") {
    ManipulatorParams p;
    std::mt19937 rng(202);
    for (int i = 0; i < 20; ++i) {
        TrajectoryPoint tr = random_traj(rng);
        JointState s{tr.qd, tr.qd_dot};
        const Vec2 ff = feedforward(p, tr);

        const Vec2 u_inv = inverse_dynamics_torque(p, s, tr, InvDynGains{}, Vec2::Zero());
        const Vec2 u_lyap = lyapunov_torque(p, s, tr, LyapGains{}, Vec2::Zero());
        const Vec2 u_disc = discontinuous_control(p, s, tr, DiscGains{});
        CHECK((u_inv - ff).norm() < 1e-12);
        CHECK((u_lyap - ff).norm() < 1e-12);
        CHECK((u_disc - ff).norm() < 1e-12);
    }
}

TEST_CASE("inverse dynamics discrete step advances the integral trapezoidally") {
    ManipulatorParams p;
    InvDynGains gains;
    InvDynState ctl;
    TrajectoryPoint tr;  // zero reference
    JointState s;
    s.q = {0.2, -0.4};
    const double dt = 0.1;

    // First call: no left endpoint yet, so the rectangle rule applies.
    inverse_dynamics_control(p, s, tr, gains, ctl, dt);
    const Vec2 e0 = -s.q;
    CHECK((ctl.integral_error - dt * e0).norm() < 1e-15);

    JointState s2;
    s2.q = {0.1, -0.1};
    inverse_dynamics_control(p, s2, tr, gains, ctl, dt);
    const Vec2 e1 = -s2.q;
    CHECK((ctl.integral_error - (dt * e0 + 0.5 * dt * (e0 + e1))).norm() < 1e-15);
}

TEST_CASE("lyapunov discrete step: torque uses the current estimate, then updates it") {
    ManipulatorParams p;
    LyapGains gains;
    LyapState ctl;
    TrajectoryPoint tr = desired_trajectory(0.0);
    JointState s;  // off trajectory
    const double dt = 0.05;

    const Vec2 u0 = lyapunov_control(p, s, tr, gains, ctl, dt);
    CHECK((u0 - lyapunov_torque(p, s, tr, gains, Vec2::Zero())).norm() == 0.0);

    const Vec2 sigma0 = sliding_variables(s, tr, gains.lambda).sigma;
    CHECK((ctl.d_hat - dt * gains.ki * sigma0).norm() < 1e-15);
}

TEST_CASE("perfect estimate cancels the disturbance") {
    // With sigma = 0 and d_hat = d, the closed loop accelerates exactly
    // along xi_ddot.
    ManipulatorParams p;
    LyapGains gains;
    const Vec2 d{0.7, -0.3};
    TrajectoryPoint tr = desired_trajectory(0.4);
    JointState s{tr.qd, tr.qd_dot};
    const Vec2 u = lyapunov_torque(p, s, tr, gains, d);
    const Vec2 qdd = forward_dynamics(p, s, u, d);
    const SlidingVars v = sliding_variables(s, tr, gains.lambda);
    CHECK((qdd - v.xi_ddot).norm() < 1e-12);
}

TEST_CASE("saturated direction") {
    SUBCASE("zero input, zero output") {
        CHECK(saturated_direction(Vec2::Zero(), 1e-2).norm() == 0.0);
    }

    SUBCASE("unit norm outside the boundary layer, direction only") {
        const Vec2 sigma{3.0, -4.0};
        const Vec2 dir = saturated_direction(sigma, 1e-2);
        CHECK(dir.norm() == doctest::Approx(1.0).epsilon(1e-15));
        const Vec2 dir_scaled = saturated_direction((2.5 * sigma).eval(), 1e-2);
        CHECK((dir - dir_scaled).norm() < 1e-15);
    }

    SUBCASE("linear inside the layer, norm never above one") {
        std::mt19937 rng(203);
        std::uniform_real_distribution<double> u(-1e-2, 1e-2);
        for (int i = 0; i < 200; ++i) {
            const Vec2 sigma{u(rng), u(rng)};
            const Vec2 dir = saturated_direction(sigma, 1e-2);
            CHECK(dir.norm() <= 1.0 + 1e-15);
            if (sigma.norm() < 1e-2) {
                CHECK((dir - sigma / 1e-2).norm() == 0.0);
            }
        }
    }
}

TEST_CASE("discontinuous law: switching torque is capped by the gain") {
    SimConfig cfg;
    cfg.controller = DiscGains{5.0, 2.0, 1e-2};
    cfg.disturbance.d = {1.0, 0.5};
    cfg.t_end = 5.0;
    cfg.dt = 5e-4;
    const SimResult r = simulate(cfg);
    double worst = 0.0;
    bool saw_outside_layer = false;
    for (std::size_t k = 0; k < r.size(); ++k) {
        const double n = 5.0 * saturated_direction(r.sigma[k], 1e-2).norm();
        worst = std::max(worst, n);
        if (r.sigma[k].norm() >= 1e-2) {
            saw_outside_layer = true;
            CHECK(n == doctest::Approx(5.0).epsilon(1e-12));
        }
    }
    CHECK(worst <= 5.0 * (1.0 + 1e-12));
    CHECK(saw_outside_layer);
}

TEST_CASE("closed loop: inverse dynamics tracks the reference") {
    SUBCASE("no load: errors decay well below the start") {
        SimConfig cfg;
        cfg.controller = InvDynGains{12.0, 21.0, 10.0};
        cfg.t_end = 10.0;
        const SimResult r = simulate(cfg);
        CHECK(r.q_tilde.front().norm() == doctest::Approx(0.5));
        CHECK(r.q_tilde.back().norm() < 1e-3);
        CHECK(metrics(r, 2.0).steady_state_rms < 1e-3);
    }

    SUBCASE("constant load: integral action rejects the DC component") {
        // The load enters the error dynamics through the configuration-
        // dependent inverse inertia, so a small zero-mean ripple at twice
        // the trajectory frequency survives; the mean over one ripple
        // period converges to zero.
        SimConfig cfg;
        cfg.controller = InvDynGains{12.0, 21.0, 10.0};
        cfg.disturbance.d = {1.0, 1.0};
        cfg.t_end = 30.0;
        const SimResult r = simulate(cfg);
        Vec2 mean = Vec2::Zero();
        int count = 0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r.t[k] >= 30.0 - std::numbers::pi) {
                mean += r.q_tilde[k];
                ++count;
            }
        }
        mean /= count;
        CHECK(mean.norm() < 1e-4);          // DC rejected
        CHECK(r.q_tilde.back().norm() < 0.02);  // ripple stays small
    }
}

TEST_CASE("closed loop: estimator converges to the true load") {
    SimConfig cfg;
    cfg.controller = LyapGains{2.0, 1.0, 2.0};
    cfg.disturbance.d = {1.0, 0.5};
    cfg.t_end = 30.0;
    const SimResult r = simulate(cfg);
    CHECK((r.d_hat.back() - cfg.disturbance.d).norm() < 0.05);
    CHECK(r.sigma.back().norm() < 1e-2);
    CHECK(r.q_tilde.back().norm() < 1e-3);
    CHECK(r.d_hat.front().norm() == 0.0);  // estimate starts at zero
}

TEST_CASE("closed loop: per-joint error dynamics hold along the trace") {
    // Substituting the law into the motion equation leaves, per joint,
    // e''' + kd e'' + kp e' + ki e = (d/dt)(D^-1 d). Checked with
    // finite-difference derivatives; the bound scales as dt^2.
    ManipulatorParams p;
    SimConfig cfg;
    cfg.controller = InvDynGains{12.0, 21.0, 10.0};
    cfg.disturbance.d = {1.0, 1.0};
    cfg.t_end = 10.0;
    cfg.dt = 1e-3;
    const SimResult r = simulate(cfg);
    const double dt = cfg.dt;

    std::vector<Vec2> delta(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        delta[k] = mass_matrix(p, r.q[k]).inverse() * cfg.disturbance.d;
    }
    double worst_all = 0.0, worst_settled = 0.0;
    for (std::size_t k = 2; k + 2 < r.size(); ++k) {
        auto e = [&](std::size_t i) { return r.q_tilde[i]; };
        const Vec2 d3 =
            (e(k + 2) - 2.0 * e(k + 1) + 2.0 * e(k - 1) - e(k - 2)) / (2.0 * dt * dt * dt);
        const Vec2 d2 = (e(k + 1) - 2.0 * e(k) + e(k - 1)) / (dt * dt);
        const Vec2 d1 = (e(k + 1) - e(k - 1)) / (2.0 * dt);
        const Vec2 delta_dot = (delta[k + 1] - delta[k - 1]) / (2.0 * dt);
        const double res = (d3 + 12.0 * d2 + 21.0 * d1 + 10.0 * e(k) - delta_dot).norm();
        worst_all = std::max(worst_all, res);
        if (r.t[k] >= 1.0) worst_settled = std::max(worst_settled, res);
    }
    CHECK(worst_all < 1e4 * dt * dt);      // fast transient dominates the FD error
    CHECK(worst_settled < 50.0 * dt * dt);
}

TEST_CASE("closed loop: sigma dynamics hold along the trace") {
    // D sigma_dot + C sigma + kd sigma = d - d_hat, finite-difference check.
    ManipulatorParams p;
    SimConfig cfg;
    cfg.controller = LyapGains{2.0, 1.0, 2.0};
    cfg.disturbance.d = {1.0, 0.5};
    cfg.t_end = 30.0;
    cfg.dt = 1e-3;
    const SimResult r = simulate(cfg);
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < r.size(); ++k) {
        const Vec2 sigma_dot = (r.sigma[k + 1] - r.sigma[k - 1]) / (2.0 * cfg.dt);
        const Vec2 d_tilde = cfg.disturbance.d - r.d_hat[k];
        const Vec2 res = mass_matrix(p, r.q[k]) * sigma_dot +
                         coriolis_matrix(p, r.q[k], r.qdot[k]) * r.sigma[k] +
                         2.0 * r.sigma[k] - d_tilde;
        worst = std::max(worst, res.norm());
    }
    CHECK(worst < 500.0 * cfg.dt * cfg.dt);
}

TEST_CASE("boundary layer width controls the residual error band") {
    auto run_band = [](double epsilon, double dt) {
        SimConfig cfg;
        cfg.controller = DiscGains{5.0, 2.0, epsilon};
        cfg.disturbance.d = {1.0, 0.5};
        cfg.t_end = 10.0;
        cfg.dt = dt;
        const SimResult r = simulate(cfg);
        double band = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r.t[k] >= 8.0) band = std::max(band, r.q_tilde[k].norm());
        }
        return band;
    };
    const double wide = run_band(1e-2, 5e-4);
    const double narrow = run_band(1e-3, 5e-5);
    CHECK(wide < 5e-3);
    CHECK(narrow < wide / 2.0);  // band shrinks with epsilon
}
