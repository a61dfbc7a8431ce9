#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "elbowsim/analysis.hpp"
#include "elbowsim/dynamics.hpp"
#include "elbowsim/presets.hpp"
#include "elbowsim/runner.hpp"

namespace py = pybind11;
using namespace elbowsim;

namespace {

// std::vector<Vec2> -> numpy array of shape (n, 2)
py::array_t<double> stack(const std::vector<Vec2>& rows) {
    py::array_t<double> out({rows.size(), std::size_t(2)});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        view(i, 0) = rows[i][0];
        view(i, 1) = rows[i][1];
    }
    return out;
}

py::array_t<double> column(const std::vector<double>& values) {
    py::array_t<double> out(values.size());
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-link planar elbow manipulator: dynamics, tracking controllers, "
              "closed-loop simulation and stability diagnostics";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DivergedError>(m, "DivergedError");

    py::class_<ManipulatorParams>(m, "ManipulatorParams")
        .def(py::init<>())
        .def_readwrite("m1", &ManipulatorParams::m1)
        .def_readwrite("m2", &ManipulatorParams::m2)
        .def_readwrite("I1", &ManipulatorParams::I1)
        .def_readwrite("I2", &ManipulatorParams::I2)
        .def_readwrite("l1", &ManipulatorParams::l1)
        .def_readwrite("l2", &ManipulatorParams::l2)
        .def_readwrite("lc1", &ManipulatorParams::lc1)
        .def_readwrite("lc2", &ManipulatorParams::lc2)
        .def_readwrite("g", &ManipulatorParams::g)
        .def("validate", &ManipulatorParams::validate);

    py::class_<JointState>(m, "JointState")
        .def(py::init<>())
        .def(py::init([](const Vec2& q, const Vec2& qdot) {
                 return JointState{q, qdot};
             }),
             py::arg("q"), py::arg("qdot"))
        .def_readwrite("q", &JointState::q)
        .def_readwrite("qdot", &JointState::qdot);

    py::class_<TrajectoryPoint>(m, "TrajectoryPoint")
        .def(py::init<>())
        .def_readwrite("qd", &TrajectoryPoint::qd)
        .def_readwrite("qd_dot", &TrajectoryPoint::qd_dot)
        .def_readwrite("qd_ddot", &TrajectoryPoint::qd_ddot);

    m.def("mass_matrix", &mass_matrix, py::arg("params"), py::arg("q"));
    m.def("coriolis_matrix", &coriolis_matrix, py::arg("params"), py::arg("q"), py::arg("qdot"));
    m.def("gravity_vector", &gravity_vector, py::arg("params"), py::arg("q"));
    m.def("potential_energy", &potential_energy, py::arg("params"), py::arg("q"));
    m.def("forward_dynamics", &forward_dynamics, py::arg("params"), py::arg("state"),
          py::arg("u"), py::arg("d"));
    m.def("total_energy", &total_energy, py::arg("params"), py::arg("state"));

    py::class_<SlidingVars>(m, "SlidingVars")
        .def_readonly("sigma", &SlidingVars::sigma)
        .def_readonly("xi_dot", &SlidingVars::xi_dot)
        .def_readonly("xi_ddot", &SlidingVars::xi_ddot)
        .def_readonly("q_tilde", &SlidingVars::q_tilde);
    m.def("sliding_variables", &sliding_variables, py::arg("state"), py::arg("traj"),
          py::arg("lambda_"));

    py::class_<InvDynGains>(m, "InvDynGains")
        .def(py::init<>())
        .def(py::init([](double kd, double kp, double ki) {
                 return InvDynGains{kd, kp, ki};
             }),
             py::arg("kd"), py::arg("kp"), py::arg("ki"))
        .def_readwrite("kd", &InvDynGains::kd)
        .def_readwrite("kp", &InvDynGains::kp)
        .def_readwrite("ki", &InvDynGains::ki);

    py::class_<InvDynState>(m, "InvDynState")
        .def(py::init<>())
        .def_readwrite("integral_error", &InvDynState::integral_error);

    py::class_<LyapGains>(m, "LyapGains")
        .def(py::init<>())
        .def(py::init([](double kd, double ki, double lambda) {
                 return LyapGains{kd, ki, lambda};
             }),
             py::arg("kd"), py::arg("ki"), py::arg("lambda_"))
        .def_readwrite("kd", &LyapGains::kd)
        .def_readwrite("ki", &LyapGains::ki)
        .def_readwrite("lambda_", &LyapGains::lambda);

    py::class_<LyapState>(m, "LyapState")
        .def(py::init<>())
        .def_readwrite("d_hat", &LyapState::d_hat);

    py::class_<DiscGains>(m, "DiscGains")
        .def(py::init<>())
        .def(py::init([](double kd_switch, double lambda, double epsilon) {
                 return DiscGains{kd_switch, lambda, epsilon};
             }),
             py::arg("kd_switch"), py::arg("lambda_"), py::arg("epsilon"))
        .def_readwrite("kd_switch", &DiscGains::kd_switch)
        .def_readwrite("lambda_", &DiscGains::lambda)
        .def_readwrite("epsilon", &DiscGains::epsilon);

    m.def("inverse_dynamics_torque", &inverse_dynamics_torque, py::arg("params"),
          py::arg("state"), py::arg("traj"), py::arg("gains"), py::arg("integral_error"));
    m.def("inverse_dynamics_control", &inverse_dynamics_control, py::arg("params"),
          py::arg("state"), py::arg("traj"), py::arg("gains"), py::arg("ctl"), py::arg("dt"),
          "Torque from the current accumulator, then the trapezoidal state update");
    m.def("lyapunov_torque", &lyapunov_torque, py::arg("params"), py::arg("state"),
          py::arg("traj"), py::arg("gains"), py::arg("d_hat"));
    m.def("lyapunov_control", &lyapunov_control, py::arg("params"), py::arg("state"),
          py::arg("traj"), py::arg("gains"), py::arg("ctl"), py::arg("dt"));
    m.def("saturated_direction", &saturated_direction, py::arg("sigma"), py::arg("epsilon"));
    m.def("discontinuous_control", &discontinuous_control, py::arg("params"), py::arg("state"),
          py::arg("traj"), py::arg("gains"));

    m.def("desired_trajectory", &desired_trajectory, py::arg("t"));

    py::class_<DisturbanceSpec>(m, "DisturbanceSpec")
        .def(py::init<>())
        .def_readwrite("d", &DisturbanceSpec::d)
        .def_readwrite("limit", &DisturbanceSpec::limit);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("params", &SimConfig::params)
        .def_readwrite("controller", &SimConfig::controller)
        .def_readwrite("disturbance", &SimConfig::disturbance)
        .def_readwrite("t_end", &SimConfig::t_end)
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("initial_state", &SimConfig::initial_state)
        .def("validate", &SimConfig::validate);

    py::class_<SimResult>(m, "SimResult")
        .def_property_readonly("t", [](const SimResult& r) { return column(r.t); })
        .def_property_readonly("q", [](const SimResult& r) { return stack(r.q); })
        .def_property_readonly("qdot", [](const SimResult& r) { return stack(r.qdot); })
        .def_property_readonly("qd", [](const SimResult& r) { return stack(r.qd); })
        .def_property_readonly("qd_dot", [](const SimResult& r) { return stack(r.qd_dot); })
        .def_property_readonly("u", [](const SimResult& r) { return stack(r.u); })
        .def_property_readonly("q_tilde", [](const SimResult& r) { return stack(r.q_tilde); })
        .def_property_readonly("sigma", [](const SimResult& r) { return stack(r.sigma); })
        .def_property_readonly("d_hat", [](const SimResult& r) { return stack(r.d_hat); })
        .def_property_readonly("v_lyap", [](const SimResult& r) { return column(r.v_lyap); })
        .def_property_readonly("config", [](const SimResult& r) { return r.config; })
        .def("has_sigma", &SimResult::has_sigma)
        .def("has_d_hat", &SimResult::has_d_hat)
        .def("has_v", &SimResult::has_v)
        .def("__len__", &SimResult::size);

    m.def("simulate", &simulate, py::arg("config"),
          py::call_guard<py::gil_scoped_release>());

    py::class_<Metrics>(m, "Metrics")
        .def_readonly("rms_error", &Metrics::rms_error)
        .def_readonly("max_abs_torque", &Metrics::max_abs_torque)
        .def_readonly("terminal_error", &Metrics::terminal_error)
        .def_readonly("steady_state_rms", &Metrics::steady_state_rms)
        .def_readonly("estimator_terminal_error", &Metrics::estimator_terminal_error);
    m.def("metrics", &metrics, py::arg("result"), py::arg("settle_window"));

    py::class_<CubicCharPoly>(m, "CubicCharPoly")
        .def(py::init([](double kd, double kp, double ki) {
                 return CubicCharPoly{kd, kp, ki};
             }),
             py::arg("kd"), py::arg("kp"), py::arg("ki"))
        .def_readwrite("kd", &CubicCharPoly::kd)
        .def_readwrite("kp", &CubicCharPoly::kp)
        .def_readwrite("ki", &CubicCharPoly::ki);

    py::class_<HurwitzResult>(m, "HurwitzResult")
        .def_readonly("stable", &HurwitzResult::stable)
        .def_readonly("margin", &HurwitzResult::margin);
    m.def("hurwitz_check", &hurwitz_check, py::arg("poly"));
    m.def("steady_state_error", &steady_state_error, py::arg("poly"), py::arg("delta"));

    py::class_<CertificateCheck>(m, "CertificateCheck")
        .def_readonly("name", &CertificateCheck::name)
        .def_readonly("passed", &CertificateCheck::passed)
        .def_readonly("worst_violation", &CertificateCheck::worst_violation)
        .def_readonly("worst_step", &CertificateCheck::worst_step)
        .def_readonly("tolerance", &CertificateCheck::tolerance);

    py::class_<CertificateTolerances>(m, "CertificateTolerances")
        .def(py::init<>())
        .def_readwrite("v_step_increase", &CertificateTolerances::v_step_increase)
        .def_readwrite("vdot_coeff", &CertificateTolerances::vdot_coeff)
        .def_readwrite("l2_budget_slack", &CertificateTolerances::l2_budget_slack)
        .def_readwrite("passivity_rel", &CertificateTolerances::passivity_rel);

    py::class_<CertificateReport>(m, "CertificateReport")
        .def_readonly("checks", &CertificateReport::checks)
        .def("all_passed", &CertificateReport::all_passed)
        .def("check", &CertificateReport::check, py::return_value_policy::copy);
    m.def("lyapunov_certificates", &lyapunov_certificates, py::arg("trace"), py::arg("gains"),
          py::arg("true_d"), py::arg("tolerances") = CertificateTolerances{});

    py::class_<OutputSpec>(m, "OutputSpec")
        .def(py::init<>())
        .def_readwrite("name", &OutputSpec::name)
        .def_readwrite("dir", &OutputSpec::dir)
        .def_readwrite("states", &OutputSpec::states)
        .def_readwrite("controls", &OutputSpec::controls)
        .def_readwrite("diagnostics", &OutputSpec::diagnostics);

    py::class_<RunManifest>(m, "RunManifest")
        .def(py::init<>())
        .def_readwrite("output", &RunManifest::output)
        .def_readwrite("config", &RunManifest::config)
        .def("validate", &RunManifest::validate);

    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("parse_config_file", &parse_config_file, py::arg("path"));
    m.def("render_config", &render_config, py::arg("manifest"));
    m.def("render_csv", &render_csv, py::arg("result"), py::arg("output") = OutputSpec{});

    py::class_<RunOptions>(m, "RunOptions")
        .def(py::init<>())
        .def_readwrite("workers", &RunOptions::workers)
        .def_readwrite("strict_certificates", &RunOptions::strict_certificates)
        .def_readwrite("certificate_tolerances", &RunOptions::certificate_tolerances);

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("name", &RunRecord::name)
        .def_readonly("csv_path", &RunRecord::csv_path)
        .def_readonly("diverged", &RunRecord::diverged)
        .def_readonly("diverged_step", &RunRecord::diverged_step)
        .def_readonly("error", &RunRecord::error)
        .def_readonly("metrics", &RunRecord::run_metrics)
        .def_readonly("certificates", &RunRecord::certificates);

    py::class_<BatchOutcome>(m, "BatchOutcome")
        .def_readonly("runs", &BatchOutcome::runs)
        .def_readonly("exit_code", &BatchOutcome::exit_code);

    m.def("run_experiments", &run_experiments, py::arg("manifests"),
          py::arg("options") = RunOptions{}, py::call_guard<py::gil_scoped_release>());

    m.def("preset_names", &preset_names);
    m.def("preset_manifests", &preset_manifests, py::arg("name"));

    m.attr("__version__") = "0.1.0";
}
