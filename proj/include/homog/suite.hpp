// Batch execution: a SuiteConfig names a model file and a list of jobs
// (verify / sharpness / semigroup / besov / maxhardy / weighted / nonlocal),
// each with a params map and a seed. Jobs are isolated (a failing job does
// not disturb the others) and may run concurrently; identical configs
// reproduce non-stochastic outputs byte-identically and stochastic ones
// seed-identically.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "homog/model_io.hpp"
#include "homog/report.hpp"

namespace homog {

inline constexpr const char* kToolVersion = "homogineq 0.1.0";

struct SuiteJob {
    std::string command;   // verify|sharpness|semigroup|besov|maxhardy|weighted|nonlocal
    nlohmann::json params; // command-specific
    std::uint64_t seed = 0;
};

struct SuiteConfig {
    std::string model_path;
    std::vector<SuiteJob> jobs;

    static SuiteConfig from_json(const nlohmann::json& j);
    static SuiteConfig from_file(const std::string& path);
};

struct JobOutcome {
    int index = 0;
    std::string command;
    std::string status; // "ok" | "violated" | "error: ..."
    double wall_ms = 0.0;
    std::vector<std::string> outputs;
};

struct RunManifest {
    std::string tool_version;
    std::string model_hash;
    std::vector<JobOutcome> jobs;
    bool any_error = false;
    bool any_violation = false;

    nlohmann::json to_json() const;
    int exit_code() const { return (any_error || any_violation) ? 1 : 0; }
};

// Executes every job, writing one JSON report per job into out_dir plus an
// aggregate markdown table for verify-style jobs. jobs_parallel caps the
// number of concurrently running jobs.
RunManifest run_suite(const SuiteConfig& config, const std::string& out_dir, int jobs_parallel = 1);

// Runs a single job against a loaded model; returns the job summary JSON.
// `outputs` collects any extra files written (CSV dumps). Throws on error.
nlohmann::json run_job(const ModelConfig& model, const SuiteJob& job, const std::string& out_dir,
                       int index, std::vector<std::string>* outputs, bool* violated);

struct EmittedReports {
    std::string markdown;
    std::string csv;
};

// name | lhs | rhs | constant | ratio | status | err-estimate. The CSV is
// numerically identical to the JSON (shortest round-trip formatting).
EmittedReports emit_report(const std::vector<InequalityReport>& reports);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

// FNV-1a 64 over the file bytes, hex-encoded; used for the model hash.
std::string hash_file(const std::string& path);

} // namespace homog
