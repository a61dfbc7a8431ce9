#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "elbowsim/presets.hpp"
#include "elbowsim/runner.hpp"

using namespace elbowsim;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path fresh_dir(const std::string& tag) {
    const auto dir = std::filesystem::temp_directory_path() / ("elbowsim_test_" + tag);
    std::filesystem::remove_all(dir);
    return dir;
}

RunManifest quick_manifest(const std::string& name, ControllerSpec spec,
                           const std::filesystem::path& dir) {
    RunManifest m;
    m.output.name = name;
    m.output.dir = dir;
    m.config.controller = spec;
    m.config.t_end = 2.0;
    m.config.dt = 1e-3;
    return m;
}

}  // namespace

TEST_CASE("csv layout follows the emit flags") {
    SimConfig cfg;
    cfg.controller = LyapGains{};
    cfg.disturbance.d = {0.5, 0.0};
    cfg.t_end = 0.01;
    cfg.dt = 0.005;
    const SimResult r = simulate(cfg);

    OutputSpec full;
    const std::string csv = render_csv(r, full);
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "t,q1,q2,qd1,qd2,q1dot,q2dot,u1,u2,err1,err2,sigma1,sigma2,dhat1,dhat2,V");
    int rows = 0;
    for (std::string line; std::getline(lines, line);) ++rows;
    CHECK(rows == 3);  // floor(0.01/0.005) + 1

    OutputSpec lean;
    lean.controls = false;
    lean.diagnostics = false;
    std::istringstream lean_lines(render_csv(r, lean));
    std::getline(lean_lines, header);
    CHECK(header == "t,q1,q2,qd1,qd2,q1dot,q2dot");

    SimConfig inv = cfg;
    inv.controller = InvDynGains{};
    std::istringstream inv_lines(render_csv(simulate(inv), full));
    std::getline(inv_lines, header);
    CHECK(header == "t,q1,q2,qd1,qd2,q1dot,q2dot,u1,u2,err1,err2");
}

TEST_CASE("csv numbers carry nine significant digits") {
    SimConfig cfg;
    cfg.controller = InvDynGains{};
    cfg.t_end = 0.002;
    cfg.dt = 0.001;
    const SimResult r = simulate(cfg);
    const std::string csv = render_csv(r, OutputSpec{});
    // The reference column at t = 0.001: qd1 = sin(0.001)/2 = 4.99999917e-4.
    CHECK(csv.find("0.000499999917") != std::string::npos);
}

TEST_CASE("run_experiments writes csv, resolved manifest and summary") {
    const auto dir = fresh_dir("basic");
    std::vector<RunManifest> batch{
        quick_manifest("alpha", InvDynGains{12.0, 21.0, 10.0}, dir),
        quick_manifest("beta", LyapGains{2.0, 1.0, 2.0}, dir),
    };
    const BatchOutcome outcome = run_experiments(batch);
    CHECK(outcome.exit_code == 0);
    REQUIRE(outcome.runs.size() == 2);
    CHECK(std::filesystem::exists(dir / "alpha.csv"));
    CHECK(std::filesystem::exists(dir / "beta.csv"));
    CHECK(std::filesystem::exists(dir / "summary.json"));

    // Resolved manifests re-parse to the same configuration.
    const RunManifest echoed = parse_config_file(dir / "alpha.resolved.ini");
    CHECK(render_config(echoed) == render_config(batch[0]));

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    REQUIRE(summary["runs"].size() == 2);
    CHECK(summary["runs"][0]["name"] == "alpha");
    CHECK(summary["runs"][0]["certificates"].is_null());
    CHECK(summary["runs"][1]["certificates"]["passed"].get<bool>());
    CHECK(summary["runs"][0]["metrics"]["rms_error"].get<double>() > 0.0);
    CHECK(summary["exit_code"] == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("identical manifests give byte-identical csv output") {
    const auto dir_a = fresh_dir("det_a");
    const auto dir_b = fresh_dir("det_b");
    auto batch_in = [&](const std::filesystem::path& dir) {
        std::vector<RunManifest> batch{
            quick_manifest("one", InvDynGains{12.0, 21.0, 10.0}, dir),
            quick_manifest("two", LyapGains{2.0, 1.0, 2.0}, dir),
            quick_manifest("three", DiscGains{5.0, 2.0, 1e-2}, dir),
        };
        batch[2].config.dt = 5e-4;
        return batch;
    };
    RunOptions serial;
    serial.workers = 1;
    RunOptions parallel;
    parallel.workers = 3;  // scheduling must not leak into the bytes
    run_experiments(batch_in(dir_a), serial);
    run_experiments(batch_in(dir_b), parallel);
    for (const char* name : {"one.csv", "two.csv", "three.csv"}) {
        CHECK(slurp(dir_a / name) == slurp(dir_b / name));
    }
    CHECK(slurp(dir_a / "summary.json") == slurp(dir_b / "summary.json"));
    std::filesystem::remove_all(dir_a);
    std::filesystem::remove_all(dir_b);
}

TEST_CASE("a diverged run fails the batch but leaves the others intact") {
    const auto dir = fresh_dir("diverge");
    std::vector<RunManifest> batch{
        quick_manifest("good", InvDynGains{12.0, 21.0, 10.0}, dir),
        quick_manifest("bad", InvDynGains{0.1, 0.1, 50.0}, dir),  // blows up
    };
    batch[1].config.t_end = 10.0;
    const BatchOutcome outcome = run_experiments(batch);
    CHECK(outcome.exit_code == 2);
    CHECK_FALSE(outcome.runs[0].diverged);
    CHECK(outcome.runs[1].diverged);
    CHECK(outcome.runs[1].diverged_step > 0);
    CHECK(std::filesystem::exists(dir / "good.csv"));
    CHECK_FALSE(std::filesystem::exists(dir / "bad.csv"));
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["runs"][1]["diverged"].get<bool>());
    std::filesystem::remove_all(dir);
}

TEST_CASE("strict certificates gate the exit code") {
    const auto dir = fresh_dir("strict");
    std::vector<RunManifest> batch{quick_manifest("lyap", LyapGains{2.0, 1.0, 2.0}, dir)};
    batch[0].config.disturbance.d = {1.0, 0.5};
    batch[0].config.t_end = 5.0;

    RunOptions strict;
    strict.strict_certificates = true;
    CHECK(run_experiments(batch, strict).exit_code == 0);

    // An impossible tolerance turns the certificate red; only strict mode
    // propagates that into the exit code.
    RunOptions impossible = strict;
    impossible.certificate_tolerances.vdot_coeff = 0.0;
    CHECK(run_experiments(batch, impossible).exit_code == 3);
    impossible.strict_certificates = false;
    CHECK(run_experiments(batch, impossible).exit_code == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("batch hygiene") {
    const auto dir = fresh_dir("hygiene");
    SUBCASE("duplicate names are rejected") {
        std::vector<RunManifest> batch{
            quick_manifest("same", InvDynGains{}, dir),
            quick_manifest("same", LyapGains{}, dir),
        };
        CHECK_THROWS_AS(run_experiments(batch), ConfigError);
    }
    SUBCASE("empty batches are rejected") {
        CHECK_THROWS_AS(run_experiments({}), ConfigError);
    }
    std::filesystem::remove_all(dir);
}
