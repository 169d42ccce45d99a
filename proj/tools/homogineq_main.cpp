// Command-line front door. Every subcommand is routed through the same job
// executor as the batch suite so that interactive runs and suite runs
// produce identical files.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "homog/suite.hpp"

namespace {

using homog::SuiteJob;

std::string resolve_out_dir(const std::string& flag_value) {
    if (const char* env = std::getenv("HOMOG_INEQ_OUT"); env && *env) return env;
    return flag_value;
}

int execute_single(const std::string& model_path, const SuiteJob& job, const std::string& out_dir) {
    homog::SuiteConfig cfg;
    cfg.model_path = model_path;
    cfg.jobs.push_back(job);
    const auto manifest = homog::run_suite(cfg, out_dir, 1);
    for (const auto& outcome : manifest.jobs) {
        std::cout << "[" << outcome.status << "] " << outcome.command;
        for (const auto& path : outcome.outputs) std::cout << " " << path;
        std::cout << "\n";
    }
    return manifest.exit_code();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for Euler-operator functional inequalities on homogeneous groups"};
    app.require_subcommand(1);

    std::string model_path;
    std::string out_flag = "out";
    std::uint64_t seed = 42;
    app.add_option("--model", model_path, "model definition JSON")->required();
    app.add_option("--out", out_flag, "output directory (env HOMOG_INEQ_OUT overrides)");
    app.add_option("--seed", seed, "global seed for stochastic jobs");

    // suite
    auto* suite_cmd = app.add_subcommand("suite", "run a batch suite config");
    std::string suite_path;
    int jobs_parallel = 1;
    suite_cmd->add_option("--suite", suite_path, "suite config JSON")->required();
    suite_cmd->add_option("--jobs", jobs_parallel, "max concurrent jobs");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run inequality checks from a checks file");
    std::string checks_path;
    verify_cmd->add_option("--suite", checks_path, "JSON list of {name, field, params}")->required();

    // sharpness
    auto* sharp_cmd = app.add_subcommand("sharpness", "probe a sharp constant with an extremizer family");
    std::string sharp_ineq = "stubbe", sharp_family = "bliss";
    int budget = 200;
    double sharp_delta = 0.0;
    sharp_cmd->add_option("--ineq", sharp_ineq, "stubbe|hardy");
    sharp_cmd->add_option("--family", sharp_family, "extremizer family (informational)");
    sharp_cmd->add_option("--budget", budget, "optimizer evaluation budget");
    sharp_cmd->add_option("--delta", sharp_delta, "delta for the Stubbe probe");

    // semigroup
    auto* semi_cmd = app.add_subcommand("semigroup", "evolve a field through both heat-semigroup routes");
    double semi_t = 0.1;
    std::string semi_ctor = "gaussian";
    std::vector<std::string> ctor_params;
    semi_cmd->add_option("--t", semi_t, "evolution time");
    semi_cmd->add_option("--ctor", semi_ctor, "field constructor name");
    semi_cmd->add_option("--param", ctor_params, "constructor parameter key=value");

    // besov
    auto* besov_cmd = app.add_subcommand("besov", "Besov-type norm of a field");
    double alpha = -1.0;
    std::string besov_ctor = "bump";
    besov_cmd->add_option("--alpha", alpha, "negative Besov exponent");
    besov_cmd->add_option("--ctor", besov_ctor, "field constructor name");
    besov_cmd->add_option("--param", ctor_params, "constructor parameter key=value");

    // maxhardy
    auto* maxhardy_cmd = app.add_subcommand("maxhardy", "geometric-mean Hardy inequality");
    std::string phi_ctor, psi_ctor;
    double witness_r = 0.0;
    maxhardy_cmd->add_option("--phi", phi_ctor, "weight phi constructor (default 1)");
    maxhardy_cmd->add_option("--psi", psi_ctor, "weight psi constructor (default 1)");
    maxhardy_cmd->add_option("--witness", witness_r, "also evaluate the witness at R");

    // weighted
    auto* weighted_cmd = app.add_subcommand("weighted", "radially weighted Hardy / uncertainty checks");
    std::string form = "radial-weight-additive";
    std::string weighted_phi = "log";
    double weighted_a = 1.0, weighted_p = 2.0, weighted_q = 2.0;
    std::string weighted_ctor = "bump";
    weighted_cmd->add_option("--form", form,
                             "radial-weight-additive|radial-weight-multiplicative|"
                             "radial-weight-conjugate|critical-hardy|hpw-improved|hpw-classical");
    weighted_cmd->add_option("--phi", weighted_phi, "log|power");
    weighted_cmd->add_option("--a", weighted_a, "power-profile exponent");
    weighted_cmd->add_option("--p", weighted_p, "exponent p");
    weighted_cmd->add_option("--q", weighted_q, "conjugate exponent q");
    weighted_cmd->add_option("--ctor", weighted_ctor, "field constructor name");
    weighted_cmd->add_option("--param", ctor_params, "constructor parameter key=value");

    // nonlocal
    auto* nonlocal_cmd = app.add_subcommand("nonlocal", "Monte Carlo nonlocal functional I_delta");
    double delta = 0.1;
    double samples = 1e6;
    std::string nonlocal_ctor = "gaussian";
    nonlocal_cmd->add_option("--delta", delta, "threshold delta");
    nonlocal_cmd->add_option("--samples", samples, "Monte Carlo samples");
    nonlocal_cmd->add_option("--ctor", nonlocal_ctor, "field constructor name");
    nonlocal_cmd->add_option("--param", ctor_params, "constructor parameter key=value");

    CLI11_PARSE(app, argc, argv);
    const std::string out_dir = resolve_out_dir(out_flag);

    auto ctor_spec = [&](const std::string& name) {
        nlohmann::json spec;
        spec["ctor"] = name;
        nlohmann::json params = nlohmann::json::object();
        for (const auto& kv : ctor_params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--param expects key=value, got " + kv);
            params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
        spec["params"] = std::move(params);
        return spec;
    };

    try {
        if (*suite_cmd) {
            auto cfg = homog::SuiteConfig::from_file(suite_path);
            if (!model_path.empty()) cfg.model_path = model_path;
            const auto manifest = homog::run_suite(cfg, out_dir, jobs_parallel);
            std::cout << manifest.to_json().dump(2) << "\n";
            return manifest.exit_code();
        }

        SuiteJob job;
        job.seed = seed;
        if (*verify_cmd) {
            std::ifstream in(checks_path);
            if (!in) throw std::invalid_argument("verify: cannot open " + checks_path);
            nlohmann::json checks;
            in >> checks;
            job.command = "verify";
            job.params["checks"] = std::move(checks);
        } else if (*sharp_cmd) {
            job.command = "sharpness";
            job.params["ineq"] = sharp_ineq;
            job.params["family"] = sharp_family;
            job.params["budget"] = budget;
            job.params["delta"] = sharp_delta;
        } else if (*semi_cmd) {
            job.command = "semigroup";
            job.params["t"] = semi_t;
            job.params["field"] = ctor_spec(semi_ctor);
        } else if (*besov_cmd) {
            job.command = "besov";
            job.params["alpha"] = alpha;
            job.params["field"] = ctor_spec(besov_ctor);
        } else if (*maxhardy_cmd) {
            job.command = "maxhardy";
            if (!phi_ctor.empty()) job.params["phi"] = ctor_spec(phi_ctor);
            if (!psi_ctor.empty()) job.params["psi"] = ctor_spec(psi_ctor);
            if (witness_r > 0.0) job.params["witness_R"] = witness_r;
        } else if (*weighted_cmd) {
            job.command = "weighted";
            job.params["form"] = form;
            job.params["phi"] = weighted_phi;
            job.params["a"] = weighted_a;
            job.params["p"] = weighted_p;
            job.params["q"] = weighted_q;
            job.params["field"] = ctor_spec(weighted_ctor);
        } else if (*nonlocal_cmd) {
            job.command = "nonlocal";
            job.params["delta"] = delta;
            job.params["samples"] = samples;
            job.params["field"] = ctor_spec(nonlocal_ctor);
        }
        return execute_single(model_path, job, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
