// Command-line front end: runs tracking experiments from config files or
// bundled presets and writes CSV time series plus a JSON summary.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elbowsim/presets.hpp"
#include "elbowsim/runner.hpp"

namespace {

struct CommonFlags {
    std::string out_dir;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<std::pair<double, double>> disturbance;
    long seed = 0;  // reserved; the dynamics are deterministic
    int workers = 1;
    bool strict_certificates = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--out", flags.out_dir, "Output directory (overrides the manifests)");
    cmd->add_option("--dt", flags.dt, "Time step override [s]");
    cmd->add_option("--t-end", flags.t_end, "Run length override [s]");
    cmd->add_option(
           "--disturbance",
           [&flags](const std::vector<std::string>& vals) {
               double d1 = 0.0, d2 = 0.0;
               if (std::sscanf(vals[0].c_str(), "%lf,%lf", &d1, &d2) != 2) return false;
               flags.disturbance = {d1, d2};
               return true;
           },
           "Constant load torque override, as d1,d2 [N m]")
        ->type_name("D1,D2");
    cmd->add_option("--seed", flags.seed, "Reserved (runs are deterministic)");
    cmd->add_option("--workers", flags.workers, "Parallel runs for batches")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--strict-certificates", flags.strict_certificates,
                  "Exit nonzero when a stability certificate fails");
}

void apply_overrides(std::vector<elbowsim::RunManifest>& manifests, const CommonFlags& flags) {
    for (auto& m : manifests) {
        if (!flags.out_dir.empty()) m.output.dir = flags.out_dir;
        if (flags.dt) m.config.dt = *flags.dt;
        if (flags.t_end) m.config.t_end = *flags.t_end;
        if (flags.disturbance) {
            m.config.disturbance.d = {flags.disturbance->first, flags.disturbance->second};
        }
        m.validate();
    }
}

int execute(std::vector<elbowsim::RunManifest> manifests, const CommonFlags& flags) {
    apply_overrides(manifests, flags);
    elbowsim::RunOptions options;
    options.workers = flags.workers;
    options.strict_certificates = flags.strict_certificates;
    const elbowsim::BatchOutcome outcome = elbowsim::run_experiments(manifests, options);
    for (const auto& r : outcome.runs) {
        if (r.diverged) {
            std::fprintf(stderr, "run %s: %s\n", r.name.c_str(), r.error.c_str());
        } else {
            std::printf("run %s: wrote %s (steady-state rms %.3e rad)\n", r.name.c_str(),
                        r.csv_path.string().c_str(), r.run_metrics->steady_state_rms);
            if (r.certificates && !r.certificates->all_passed()) {
                for (const auto& c : r.certificates->checks) {
                    if (!c.passed) {
                        std::fprintf(stderr,
                                     "run %s: certificate %s failed (violation %.3e, step %zu)\n",
                                     r.name.c_str(), c.name.c_str(), c.worst_violation,
                                     c.worst_step);
                    }
                }
            }
        }
    }
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop tracking experiments for a two-link planar elbow manipulator"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    std::vector<std::string> config_files;
    CLI::App* run = app.add_subcommand("run", "Run experiments from config files");
    run->add_option("config", config_files, "INI config file(s), one experiment each")
        ->required()
        ->check(CLI::ExistingFile);
    add_common_flags(run, run_flags);

    CommonFlags preset_flags;
    std::string preset_name;
    CLI::App* preset = app.add_subcommand("preset", "Run a bundled experiment preset");
    preset->add_option("name", preset_name, "fig2..fig7, or 'paper' for all six")->required();
    add_common_flags(preset, preset_flags);

    CLI::App* list = app.add_subcommand("list-presets", "List bundled preset names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& name : elbowsim::preset_names()) std::printf("%s\n", name.c_str());
            return 0;
        }
        if (run->parsed()) {
            std::vector<elbowsim::RunManifest> manifests;
            for (const auto& file : config_files) {
                manifests.push_back(elbowsim::parse_config_file(file));
            }
            return execute(std::move(manifests), run_flags);
        }
        return execute(elbowsim::preset_manifests(preset_name), preset_flags);
    } catch (const elbowsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
