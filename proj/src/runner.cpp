#include "elbowsim/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <set>
#include <thread>

#include <json.hpp>

namespace elbowsim {

namespace {

// Locale-free formatting, 9 significant digits.
void append_number(std::string& out, double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                         std::chars_format::general, 9);
    out.append(buf, ptr);
}

double settle_window_for(const SimConfig& config) {
    return std::min(2.0, 0.5 * config.t_end);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

nlohmann::ordered_json metrics_json(const Metrics& m) {
    nlohmann::ordered_json j;
    j["rms_error"] = m.rms_error;
    j["max_abs_torque"] = {m.max_abs_torque[0], m.max_abs_torque[1]};
    j["terminal_error"] = m.terminal_error;
    j["steady_state_rms"] = m.steady_state_rms;
    if (m.estimator_terminal_error) {
        j["estimator_terminal_error"] = *m.estimator_terminal_error;
    } else {
        j["estimator_terminal_error"] = nullptr;
    }
    return j;
}

nlohmann::ordered_json certificates_json(const CertificateReport& report) {
    nlohmann::ordered_json j;
    j["passed"] = report.all_passed();
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["passed"] = c.passed;
        cj["worst_violation"] = c.worst_violation;
        cj["worst_step"] = c.worst_step;
        cj["tolerance"] = c.tolerance;
        checks.push_back(cj);
    }
    j["checks"] = checks;
    return j;
}

RunRecord execute_run(const RunManifest& manifest, const RunOptions& options) {
    RunRecord record;
    record.name = manifest.output.name;
    const std::filesystem::path dir = manifest.output.dir;
    std::filesystem::create_directories(dir);
    write_file(dir / (manifest.output.name + ".resolved.ini"), render_config(manifest));
    try {
        const SimResult result = simulate(manifest.config);
        record.csv_path = dir / (manifest.output.name + ".csv");
        write_file(record.csv_path, render_csv(result, manifest.output));
        record.run_metrics = metrics(result, settle_window_for(manifest.config));
        if (const auto* gains = std::get_if<LyapGains>(&manifest.config.controller)) {
            record.certificates = lyapunov_certificates(
                result, *gains, manifest.config.disturbance.d, options.certificate_tolerances);
        }
    } catch (const DivergedError& e) {
        record.diverged = true;
        record.diverged_step = e.step();
        record.error = e.what();
    }
    return record;
}

}  // namespace

std::string render_csv(const SimResult& result, const OutputSpec& output) {
    std::string out;
    out.reserve(result.size() * 160);

    std::vector<std::string> header{"t"};
    if (output.states) {
        for (const char* c : {"q1", "q2", "qd1", "qd2", "q1dot", "q2dot"}) header.push_back(c);
    }
    if (output.controls) {
        header.push_back("u1");
        header.push_back("u2");
    }
    if (output.diagnostics) {
        header.push_back("err1");
        header.push_back("err2");
        if (result.has_sigma()) {
            header.push_back("sigma1");
            header.push_back("sigma2");
        }
        if (result.has_d_hat()) {
            header.push_back("dhat1");
            header.push_back("dhat2");
        }
        if (result.has_v()) header.push_back("V");
    }
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out += ',';
        out += header[i];
    }
    out += '\n';

    for (std::size_t k = 0; k < result.size(); ++k) {
        append_number(out, result.t[k]);
        if (output.states) {
            for (double v : {result.q[k][0], result.q[k][1], result.qd[k][0], result.qd[k][1],
                             result.qdot[k][0], result.qdot[k][1]}) {
                out += ',';
                append_number(out, v);
            }
        }
        if (output.controls) {
            out += ',';
            append_number(out, result.u[k][0]);
            out += ',';
            append_number(out, result.u[k][1]);
        }
        if (output.diagnostics) {
            out += ',';
            append_number(out, result.q_tilde[k][0]);
            out += ',';
            append_number(out, result.q_tilde[k][1]);
            if (result.has_sigma()) {
                out += ',';
                append_number(out, result.sigma[k][0]);
                out += ',';
                append_number(out, result.sigma[k][1]);
            }
            if (result.has_d_hat()) {
                out += ',';
                append_number(out, result.d_hat[k][0]);
                out += ',';
                append_number(out, result.d_hat[k][1]);
            }
            if (result.has_v()) {
                out += ',';
                append_number(out, result.v_lyap[k]);
            }
        }
        out += '\n';
    }
    return out;
}

BatchOutcome run_experiments(const std::vector<RunManifest>& manifests,
                             const RunOptions& options) {
    if (manifests.empty()) throw ConfigError("empty batch: nothing to run");
    std::set<std::string> names;
    for (const auto& m : manifests) {
        m.validate();
        if (!names.insert(m.output.name).second) {
            throw ConfigError("duplicate experiment name '" + m.output.name + "' in batch");
        }
    }

    BatchOutcome outcome;
    outcome.runs.resize(manifests.size());

    const int workers = std::clamp<int>(options.workers, 1,
                                        static_cast<int>(manifests.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= manifests.size()) break;
            outcome.runs[i] = execute_run(manifests[i], options);
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    bool any_diverged = false;
    bool any_cert_failed = false;
    nlohmann::ordered_json summary;
    summary["runs"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < outcome.runs.size(); ++i) {
        const RunRecord& r = outcome.runs[i];
        nlohmann::ordered_json j;
        j["name"] = r.name;
        j["controller"] = controller_type_name(manifests[i].config.controller);
        j["csv"] = r.csv_path.filename().string();
        j["diverged"] = r.diverged;
        if (r.diverged) {
            j["diverged_step"] = r.diverged_step;
            j["error"] = r.error;
            any_diverged = true;
        }
        j["metrics"] = r.run_metrics ? metrics_json(*r.run_metrics) : nlohmann::ordered_json();
        if (r.certificates) {
            j["certificates"] = certificates_json(*r.certificates);
            if (!r.certificates->all_passed()) any_cert_failed = true;
        } else {
            j["certificates"] = nullptr;
        }
        summary["runs"].push_back(j);
    }
    outcome.exit_code = any_diverged ? 2
                        : (options.strict_certificates && any_cert_failed) ? 3
                                                                           : 0;
    summary["exit_code"] = outcome.exit_code;

    std::set<std::filesystem::path> dirs;
    for (const auto& m : manifests) dirs.insert(m.output.dir);
    for (const auto& dir : dirs) {
        write_file(dir / "summary.json", summary.dump(2) + "\n");
    }
    return outcome;
}

}  // namespace elbowsim
