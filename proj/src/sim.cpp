#include "elbowsim/sim.hpp"

#include <cmath>
#include <string>

#include "elbowsim/dynamics.hpp"
#include "elbowsim/integrate.hpp"

namespace elbowsim {

TrajectoryPoint desired_trajectory(double t) {
    TrajectoryPoint p;
    p.qd = 0.5 * Vec2{std::sin(t), std::cos(t)};
    p.qd_dot = 0.5 * Vec2{std::cos(t), -std::sin(t)};
    p.qd_ddot = -p.qd;
    return p;
}

void DisturbanceSpec::validate() const {
    if (!d.allFinite()) throw std::invalid_argument("disturbance.d: must be finite");
    if (!(limit > 0.0) || !std::isfinite(limit)) {
        throw std::invalid_argument("disturbance.limit: must be positive and finite");
    }
    if (d.cwiseAbs().maxCoeff() > limit) {
        throw std::invalid_argument("disturbance.d: max |d_i| exceeds the configured limit");
    }
}

const char* controller_type_name(const ControllerSpec& spec) {
    struct Visitor {
        const char* operator()(const InvDynGains&) const { return "inverse_dynamics"; }
        const char* operator()(const LyapGains&) const { return "lyapunov"; }
        const char* operator()(const DiscGains&) const { return "discontinuous"; }
    };
    return std::visit(Visitor{}, spec);
}

void SimConfig::validate() const {
    params.validate();
    disturbance.validate();
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("sim.dt: must be positive and finite");
    }
    if (dt > 0.01) throw std::invalid_argument("sim.dt: must not exceed 0.01 s");
    if (!(t_end >= dt) || !std::isfinite(t_end)) {
        throw std::invalid_argument("sim.t_end: must be finite and at least dt");
    }
    if (!initial_state.finite()) {
        throw std::invalid_argument("sim initial state: must be finite");
    }
}

std::size_t SimConfig::step_count() const {
    // floor(t_end / dt), nudged so exact multiples are not lost to rounding.
    return static_cast<std::size_t>(std::floor(t_end / dt + 1e-9));
}

DivergedError::DivergedError(std::size_t step, double t)
    : std::runtime_error("simulation diverged at step " + std::to_string(step) +
                         " (t = " + std::to_string(t) + " s)"),
      step_(step),
      time_(t) {}

namespace {

constexpr double kDivergedVelocity = 1e6;

// Per-law hooks for the combined plant + controller ODE.
struct ControllerHooks {
    int state_dim = 0;
    Vec2 (*torque)(const ManipulatorParams&, const JointState&, const TrajectoryPoint&,
                   const ControllerSpec&, const Eigen::VectorXd& ctl);
    void (*ctl_rate)(const JointState&, const TrajectoryPoint&, const ControllerSpec&,
                     Eigen::Ref<Eigen::VectorXd> rate);
};

ControllerHooks hooks_for(const ControllerSpec& spec) {
    struct Visitor {
        ControllerHooks operator()(const InvDynGains&) const {
            return {2,
                    [](const ManipulatorParams& p, const JointState& s, const TrajectoryPoint& tr,
                       const ControllerSpec& c, const Eigen::VectorXd& ctl) {
                        return inverse_dynamics_torque(p, s, tr, std::get<InvDynGains>(c),
                                                       Vec2(ctl));
                    },
                    [](const JointState& s, const TrajectoryPoint& tr, const ControllerSpec&,
                       Eigen::Ref<Eigen::VectorXd> rate) { rate = tr.qd - s.q; }};
        }
        ControllerHooks operator()(const LyapGains&) const {
            return {2,
                    [](const ManipulatorParams& p, const JointState& s, const TrajectoryPoint& tr,
                       const ControllerSpec& c, const Eigen::VectorXd& ctl) {
                        return lyapunov_torque(p, s, tr, std::get<LyapGains>(c), Vec2(ctl));
                    },
                    [](const JointState& s, const TrajectoryPoint& tr, const ControllerSpec& c,
                       Eigen::Ref<Eigen::VectorXd> rate) {
                        const LyapGains& g = std::get<LyapGains>(c);
                        rate = g.ki * sliding_variables(s, tr, g.lambda).sigma;
                    }};
        }
        ControllerHooks operator()(const DiscGains&) const {
            return {0,
                    [](const ManipulatorParams& p, const JointState& s, const TrajectoryPoint& tr,
                       const ControllerSpec& c, const Eigen::VectorXd&) {
                        return discontinuous_control(p, s, tr, std::get<DiscGains>(c));
                    },
                    [](const JointState&, const TrajectoryPoint&, const ControllerSpec&,
                       Eigen::Ref<Eigen::VectorXd>) {}};
        }
    };
    return std::visit(Visitor{}, spec);
}

JointState unpack_state(const Eigen::VectorXd& y) {
    JointState s;
    s.q = y.segment<2>(0);
    s.qdot = y.segment<2>(2);
    return s;
}

}  // namespace

SimResult simulate(const SimConfig& config) {
    config.validate();

    const ControllerHooks hooks = hooks_for(config.controller);
    const std::size_t steps = config.step_count();
    const double dt = config.dt;
    const Vec2 d = config.disturbance.d;

    const bool lyap = std::holds_alternative<LyapGains>(config.controller);
    const bool disc = std::holds_alternative<DiscGains>(config.controller);

    auto deriv = [&](double t, const Eigen::VectorXd& y) {
        const JointState s = unpack_state(y);
        const TrajectoryPoint tr = desired_trajectory(t);
        const Vec2 u = hooks.torque(config.params, s, tr, config.controller, y.tail(hooks.state_dim));
        Eigen::VectorXd dy(y.size());
        dy.segment<2>(0) = s.qdot;
        dy.segment<2>(2) = forward_dynamics(config.params, s, u, d);
        if (hooks.state_dim > 0) hooks.ctl_rate(s, tr, config.controller, dy.tail(hooks.state_dim));
        return dy;
    };

    SimResult result;
    result.config = config;
    const std::size_t n = steps + 1;
    result.t.reserve(n);
    result.q.reserve(n);
    result.qdot.reserve(n);
    result.qd.reserve(n);
    result.qd_dot.reserve(n);
    result.u.reserve(n);
    result.q_tilde.reserve(n);
    if (lyap || disc) result.sigma.reserve(n);
    if (lyap) {
        result.d_hat.reserve(n);
        result.v_lyap.reserve(n);
    }

    Eigen::VectorXd y = Eigen::VectorXd::Zero(4 + hooks.state_dim);
    y.segment<2>(0) = config.initial_state.q;
    y.segment<2>(2) = config.initial_state.qdot;

    auto record = [&](std::size_t k, double t) {
        const JointState s = unpack_state(y);
        const TrajectoryPoint tr = desired_trajectory(t);
        result.t.push_back(t);
        result.q.push_back(s.q);
        result.qdot.push_back(s.qdot);
        result.qd.push_back(tr.qd);
        result.qd_dot.push_back(tr.qd_dot);
        result.u.push_back(
            hooks.torque(config.params, s, tr, config.controller, y.tail(hooks.state_dim)));
        result.q_tilde.push_back(s.q - tr.qd);
        if (lyap) {
            const LyapGains& g = std::get<LyapGains>(config.controller);
            const Vec2 sigma = sliding_variables(s, tr, g.lambda).sigma;
            const Vec2 d_hat = y.tail<2>();
            const Vec2 d_tilde = d - d_hat;
            result.sigma.push_back(sigma);
            result.d_hat.push_back(d_hat);
            result.v_lyap.push_back(0.5 * sigma.dot(mass_matrix(config.params, s.q) * sigma) +
                                    0.5 * d_tilde.squaredNorm() / g.ki);
        } else if (disc) {
            const DiscGains& g = std::get<DiscGains>(config.controller);
            result.sigma.push_back(sliding_variables(s, tr, g.lambda).sigma);
        }
        (void)k;
    };

    record(0, 0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;  // exact grid, no accumulation
        y = rk4_step(deriv, y, t, dt);
        if (!y.allFinite() || y.segment<2>(2).cwiseAbs().maxCoeff() > kDivergedVelocity) {
            throw DivergedError(k + 1, static_cast<double>(k + 1) * dt);
        }
        record(k + 1, static_cast<double>(k + 1) * dt);
    }
    return result;
}

Metrics metrics(const SimResult& result, double settle_window) {
    if (result.size() == 0) throw std::invalid_argument("metrics: empty result");
    const double t_end = result.t.back();
    if (!(settle_window > 0.0) || settle_window >= t_end) {
        throw std::invalid_argument("metrics: settle_window must lie in (0, t_end)");
    }

    Metrics m;
    double sum_sq = 0.0;
    double settle_sum_sq = 0.0;
    std::size_t settle_count = 0;
    const double settle_from = t_end - settle_window - 1e-12;
    for (std::size_t k = 0; k < result.size(); ++k) {
        const double e2 = result.q_tilde[k].squaredNorm();
        sum_sq += e2;
        m.max_abs_torque = m.max_abs_torque.cwiseMax(result.u[k].cwiseAbs());
        if (result.t[k] >= settle_from) {
            settle_sum_sq += e2;
            ++settle_count;
        }
    }
    m.rms_error = std::sqrt(sum_sq / static_cast<double>(result.size()));
    m.steady_state_rms = std::sqrt(settle_sum_sq / static_cast<double>(settle_count));
    m.terminal_error = result.q_tilde.back().norm();
    if (result.has_d_hat()) {
        m.estimator_terminal_error = (result.d_hat.back() - result.config.disturbance.d).norm();
    }
    return m;
}

}  // namespace elbowsim
