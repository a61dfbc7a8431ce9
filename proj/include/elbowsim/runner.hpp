#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "elbowsim/analysis.hpp"
#include "elbowsim/config.hpp"

namespace elbowsim {

/// CSV serialization of a run. Columns: t, then (per emit flags) states
/// q1,q2,qd1,qd2,q1dot,q2dot; controls u1,u2; diagnostics err1,err2 plus
/// sigma1,sigma2 / dhat1,dhat2 / V when the controller defines them.
/// Numbers carry 9 significant digits; output is locale-independent and
/// byte-deterministic for identical runs.
std::string render_csv(const SimResult& result, const OutputSpec& output);

struct RunOptions {
    int workers = 1;
    bool strict_certificates = false;
    CertificateTolerances certificate_tolerances;
};

/// What one experiment produced.
struct RunRecord {
    std::string name;
    std::filesystem::path csv_path;      ///< empty if the run diverged
    bool diverged = false;
    std::size_t diverged_step = 0;
    std::string error;                   ///< human-readable failure, empty on success
    std::optional<Metrics> run_metrics;
    std::optional<CertificateReport> certificates;  ///< Lyapunov runs only
};

struct BatchOutcome {
    std::vector<RunRecord> runs;
    int exit_code = 0;  ///< 0 ok, 2 diverged run, 3 certificate failure (strict mode)
};

/// Executes the manifests (up to options.workers in parallel), writing per
/// run a CSV, a resolved-manifest echo, and finally one summary.json for
/// the whole batch. Experiment names must be unique; output directories
/// are created as needed.
BatchOutcome run_experiments(const std::vector<RunManifest>& manifests,
                             const RunOptions& options = {});

}  // namespace elbowsim
