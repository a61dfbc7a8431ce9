#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "elbowsim/controllers.hpp"
#include "elbowsim/types.hpp"

namespace elbowsim {

/// Reference signal tracked by all bundled experiments:
/// qd = (sin t, cos t) / 2, so qd_ddot = -qd.
TrajectoryPoint desired_trajectory(double t);

/// Constant load torque applied at the joints for a whole run.
struct DisturbanceSpec {
    Vec2 d = Vec2::Zero();  ///< [N m]
    double limit = 50.0;    ///< max allowed |d_i|, keeps the disturbance bounded

    void validate() const;
};

/// Which control law drives the run, with its gains.
using ControllerSpec = std::variant<InvDynGains, LyapGains, DiscGains>;

const char* controller_type_name(const ControllerSpec& spec);

struct SimConfig {
    ManipulatorParams params;
    ControllerSpec controller = InvDynGains{};
    DisturbanceSpec disturbance;
    double t_end = 10.0;  ///< [s]
    double dt = 1e-3;     ///< [s]; capped at 0.01 for the switching law's sake
    JointState initial_state;

    /// Throws std::invalid_argument naming the violated invariant.
    void validate() const;
    std::size_t step_count() const;  ///< floor(t_end / dt), tolerant of FP division
};

/// Thrown when a run blows up; carries the step at which it happened.
class DivergedError : public std::runtime_error {
public:
    DivergedError(std::size_t step, double t);
    std::size_t step() const { return step_; }
    double time() const { return time_; }

private:
    std::size_t step_;
    double time_;
};

/// Time-indexed record of one closed-loop run. Controller-specific
/// channels (sigma, d_hat, v_lyap) are empty when the law does not define them.
struct SimResult {
    std::vector<double> t;
    std::vector<Vec2> q, qdot;
    std::vector<Vec2> qd, qd_dot;
    std::vector<Vec2> u;
    std::vector<Vec2> q_tilde;
    std::vector<Vec2> sigma;    ///< Lyapunov + discontinuous laws
    std::vector<Vec2> d_hat;    ///< Lyapunov law only
    std::vector<double> v_lyap; ///< Lyapunov function value, Lyapunov law only
    SimConfig config;           ///< echo of the producing configuration

    std::size_t size() const { return t.size(); }
    bool has_sigma() const { return !sigma.empty(); }
    bool has_d_hat() const { return !d_hat.empty(); }
    bool has_v() const { return !v_lyap.empty(); }
};

/// Fixed-step RK4 integration of the closed loop from t = 0 to t_end.
/// Plant state and controller state (integral accumulator or disturbance
/// estimate) form one combined ODE; the torque is re-evaluated at every
/// RK stage. Records every step, including t = 0.
SimResult simulate(const SimConfig& config);

/// Scalar summaries of a run.
struct Metrics {
    double rms_error = 0.0;           ///< RMS of ||q_tilde|| over the whole run
    Vec2 max_abs_torque = Vec2::Zero();
    double terminal_error = 0.0;      ///< ||q_tilde(t_end)||
    double steady_state_rms = 0.0;    ///< RMS of ||q_tilde|| over the final settle window
    std::optional<double> estimator_terminal_error;  ///< ||d_hat - d|| at t_end, when defined
};

/// settle_window must be < t_end of the producing run.
Metrics metrics(const SimResult& result, double settle_window);

}  // namespace elbowsim
