#include "elbowsim/presets.hpp"

namespace elbowsim {

namespace {

// The three benchmark closed-loop setups. Each drives the harmonic
// reference from rest at the origin with no load torque; figN/figN+1
// pairs are the same run published once for states and once for controls.
RunManifest tracking_run(const std::string& name, ControllerSpec controller, double t_end,
                         double dt) {
    RunManifest m;
    m.output.name = name;
    m.config.controller = controller;
    m.config.t_end = t_end;
    m.config.dt = dt;
    return m;
}

RunManifest make_preset(const std::string& name) {
    if (name == "fig2" || name == "fig3") {
        return tracking_run(name, InvDynGains{12.0, 21.0, 10.0}, 10.0, 1e-3);
    }
    if (name == "fig4" || name == "fig5") {
        return tracking_run(name, LyapGains{2.0, 1.0, 2.0}, 30.0, 1e-3);
    }
    if (name == "fig6" || name == "fig7") {
        // Smaller step: the boundary-layer feedback is stiff (gain kd_switch/epsilon).
        return tracking_run(name, DiscGains{5.0, 2.0, 1e-2}, 30.0, 2e-4);
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "paper"};
}

std::vector<RunManifest> preset_manifests(const std::string& name) {
    if (name == "paper") {
        std::vector<RunManifest> batch;
        for (const char* fig : {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}) {
            batch.push_back(make_preset(fig));
        }
        return batch;
    }
    return {make_preset(name)};
}

}  // namespace elbowsim
