#include "homog/suite.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "homog/inequalities.hpp"
#include "homog/maximal_hardy.hpp"
#include "homog/semigroup.hpp"
#include "homog/weighted_radial.hpp"

namespace homog {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("hash_file: cannot open " + path);
    std::uint64_t h = 1469598103934665603ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

SuiteConfig SuiteConfig::from_json(const nlohmann::json& j) {
    SuiteConfig cfg;
    cfg.model_path = j.at("model").get<std::string>();
    int idx = 0;
    for (const auto& job_j : j.at("jobs")) {
        SuiteJob job;
        job.command = job_j.at("command").get<std::string>();
        job.params = job_j.value("params", nlohmann::json::object());
        if (!job_j.contains("seed")) {
            if (job.command == "nonlocal" || job.command == "sharpness" ||
                job.command == "maxhardy")
                throw std::invalid_argument("SuiteConfig: job " + std::to_string(idx) +
                                            " (" + job.command + ") requires an explicit seed");
            job.seed = 0;
        } else {
            job.seed = job_j.at("seed").get<std::uint64_t>();
        }
        cfg.jobs.push_back(std::move(job));
        ++idx;
    }
    return cfg;
}

SuiteConfig SuiteConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("SuiteConfig: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("SuiteConfig: parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["tool_version"] = tool_version;
    j["model_hash"] = model_hash;
    j["any_error"] = any_error;
    j["any_violation"] = any_violation;
    auto arr = nlohmann::json::array();
    for (const auto& job : jobs) {
        nlohmann::json jj;
        jj["index"] = job.index;
        jj["command"] = job.command;
        jj["status"] = job.status;
        jj["wall_ms"] = job.wall_ms;
        jj["outputs"] = job.outputs;
        arr.push_back(std::move(jj));
    }
    j["jobs"] = std::move(arr);
    return j;
}

EmittedReports emit_report(const std::vector<InequalityReport>& reports) {
    EmittedReports out;
    std::ostringstream md, csv;
    md << "| name | lhs | rhs | constant | ratio | status | err-estimate |\n";
    md << "|---|---|---|---|---|---|---|\n";
    csv << "name,lhs,rhs,constant,ratio,status,err-estimate\n";
    for (const auto& r : reports) {
        md << "| " << r.name << " | " << format_double(r.lhs) << " | " << format_double(r.rhs)
           << " | " << format_double(r.constant_used) << " | " << format_double(r.ratio) << " | "
           << to_string(r.status) << " | " << format_double(r.err_estimate) << " |\n";
        csv << r.name << ',' << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
            << format_double(r.constant_used) << ',' << format_double(r.ratio) << ','
            << to_string(r.status) << ',' << format_double(r.err_estimate) << '\n';
    }
    out.markdown = md.str();
    out.csv = csv.str();
    return out;
}

namespace {

Field field_from_spec(const ModelConfig& model, const nlohmann::json& spec) {
    const std::string ctor = spec.at("ctor").get<std::string>();
    std::map<std::string, double> params;
    if (spec.contains("params"))
        for (const auto& [key, value] : spec.at("params").items())
            params[key] = value.get<double>();
    return construct_field(model.model, model.grid, ctor, params);
}

InequalityReport dispatch_check(const ModelConfig& model, const nlohmann::json& check,
                                std::vector<InequalityReport>* extra) {
    const std::string name = check.at("name").get<std::string>();
    const Field f = field_from_spec(model, check.at("field"));
    const double p = check.value("p", 2.0);
    const double q = check.value("q", 4.0);

    if (name == "sobolev") return check_sobolev_type(f, p);
    if (name == "hardy") return check_hardy(f);
    if (name == "gn") return check_gn(f, p, q).report;
    if (name == "stubbe") return check_stubbe(f, check.value("delta", 0.0));
    if (name == "bliss") {
        std::vector<double> r(f.rows()), fr(f.rows());
        for (std::size_t i = 0; i < f.rows(); ++i) {
            r[i] = f.grid.r(static_cast<int>(i));
            fr[i] = f.at(i, 0).real();
        }
        return check_bliss(r, fr, p, q);
    }
    if (name == "hpw-improved") return check_uncertainty_hpw(f, HpwVariant::improved);
    if (name == "hpw-classical") return check_uncertainty_hpw(f, HpwVariant::classical);
    if (name == "radial-weight-additive" || name == "radial-weight-multiplicative" ||
        name == "radial-weight-conjugate" || name == "critical-hardy") {
        RadialWeightFn phi = RadialWeightFn::log_profile();
        if (check.value("phi", "log") == std::string("power"))
            phi = RadialWeightFn::power_profile(check.value("a", 1.0));
        if (name == "radial-weight-additive") return check_radial_weight_additive(phi, f, p);
        if (name == "radial-weight-multiplicative")
            return check_radial_weight_multiplicative(phi, f, p);
        if (name == "radial-weight-conjugate") {
            auto pair = check_radial_weight_conjugate(phi, f, p, q);
            if (extra) extra->push_back(pair.second);
            return pair.first;
        }
        // critical Hardy: phi = log, p = Q on an isotropic model
        const double n = f.model->homogeneous_dimension();
        auto rep = check_radial_weight_additive(RadialWeightFn::log_profile(), f, n);
        rep.name = "critical-hardy";
        return rep;
    }
    // interpolation corollaries
    for (const auto& cname : corollary_names())
        if (cname == name) {
            CorollaryParams prm;
            prm.p = p;
            prm.q = q;
            prm.delta = check.value("delta", 0.0);
            prm.support_halfwidth = check.value("lambda", 0.0);
            prm.annulus_R = check.value("R", 0.0);
            return check_corollary(name, f, prm);
        }
    throw std::invalid_argument("verify: unknown check '" + name + "'");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

} // namespace

nlohmann::json run_job(const ModelConfig& model, const SuiteJob& job, const std::string& out_dir,
                       int index, std::vector<std::string>* outputs, bool* violated) {
    nlohmann::json summary;
    summary["command"] = job.command;
    summary["seed"] = job.seed;

    if (job.command == "verify") {
        std::vector<InequalityReport> reports;
        for (const auto& check : job.params.at("checks")) {
            std::vector<InequalityReport> extra;
            reports.push_back(dispatch_check(model, check, &extra));
            for (auto& r : extra) reports.push_back(std::move(r));
        }
        auto arr = nlohmann::json::array();
        for (const auto& r : reports) {
            if (r.status == IneqStatus::violated && violated) *violated = true;
            arr.push_back(r.to_json());
        }
        summary["reports"] = std::move(arr);
        const auto emitted = emit_report(reports);
        const std::string md_path = out_dir + "/job_" + std::to_string(index) + "_verify.md";
        const std::string csv_path = out_dir + "/job_" + std::to_string(index) + "_verify.csv";
        write_text(md_path, emitted.markdown);
        write_text(csv_path, emitted.csv);
        if (outputs) {
            outputs->push_back(md_path);
            outputs->push_back(csv_path);
        }
        return summary;
    }

    if (job.command == "sharpness") {
        const std::string ineq = job.params.at("ineq").get<std::string>();
        const int budget = job.params.value("budget", 200);
        SharpnessResult res;
        if (ineq == "stubbe")
            res = probe_stubbe_sharpness(model.model, model.grid, job.params.value("delta", 0.0),
                                         budget, job.seed);
        else if (ineq == "hardy")
            res = probe_hardy_sharpness(model.model, model.grid, budget, job.seed);
        else
            throw std::invalid_argument("sharpness: unknown inequality '" + ineq + "'");
        summary["best_ratio"] = res.best_ratio;
        summary["best_params"] = res.best_params;
        summary["evaluations"] = res.evaluations;
        return summary;
    }

    if (job.command == "semigroup") {
        const double t = job.params.at("t").get<double>();
        const Field f = field_from_spec(model, job.params.at("field"));
        const Field kernel_route = euler_heat_kernel(f, t);
        const Field spectral_route = euler_heat_spectral(f, t);
        summary["t"] = t;
        summary["l2_before"] = lp_norm(f, 2.0);
        summary["l2_after"] = lp_norm(spectral_route, 2.0);
        summary["route"] = "kernel+spectral";
        summary["max_route_disagreement"] = l2_relative_error(kernel_route, spectral_route);
        const std::string csv_path =
            out_dir + "/job_" + std::to_string(index) + "_semigroup_evolved.csv";
        std::ofstream csv(csv_path, std::ios::binary);
        export_field_csv(spectral_route, csv);
        if (outputs) outputs->push_back(csv_path);
        return summary;
    }

    if (job.command == "besov") {
        const double alpha = job.params.at("alpha").get<double>();
        const Field f = field_from_spec(model, job.params.at("field"));
        TimeGrid grid;
        if (job.params.contains("t_min")) grid.t_min = job.params.at("t_min").get<double>();
        if (job.params.contains("ratio")) grid.ratio = job.params.at("ratio").get<double>();
        if (job.params.contains("count")) grid.count = job.params.at("count").get<int>();
        const BesovResult res = besov_norm(f, alpha, grid);
        summary["value"] = res.value;
        summary["argmax_t"] = res.argmax_t;
        summary["endpoint"] = res.endpoint;
        summary["refined_value"] = res.refined_value;
        return summary;
    }

    if (job.command == "maxhardy") {
        const Field phi = job.params.contains("phi")
                              ? field_from_spec(model, job.params.at("phi"))
                              : make_radial_field(model.model, model.grid, [](double) { return 1.0; });
        const Field psi = job.params.contains("psi")
                              ? field_from_spec(model, job.params.at("psi"))
                              : make_radial_field(model.model, model.grid, [](double) { return 1.0; });
        const auto a = a_functional(phi, psi);
        summary["A"] = a.divergent ? nlohmann::json("divergent") : nlohmann::json(a.value);
        summary["argmax_R"] = a.argmax_R;
        summary["A_r_independent"] = a.r_independent;
        auto reports = nlohmann::json::array();
        if (!a.divergent) {
            std::vector<Field> fields;
            if (job.params.contains("fields"))
                for (const auto& spec : job.params.at("fields"))
                    fields.push_back(field_from_spec(model, spec));
            else
                fields = positive_corpus(model.model, model.grid, 3, job.seed);
            for (const auto& f : fields) {
                auto rep = check_max_hardy(phi, psi, f);
                if (rep.status == IneqStatus::violated && violated) *violated = true;
                summary["C_used"] = rep.constant_used;
                reports.push_back(rep.to_json());
            }
        }
        summary["reports"] = std::move(reports);
        if (job.params.contains("witness_R")) {
            const double big_r = job.params.at("witness_R").get<double>();
            summary["witness_mass"] =
                max_hardy_witness_mass(*model.model, big_r, 1 << 17);
            const auto probe = necessity_probe(phi, psi, {big_r});
            summary["witness_lhs"] = probe.at(0).lhs;
            summary["witness_lower_bound"] = probe.at(0).lower_bound;
        }
        return summary;
    }

    if (job.command == "weighted") {
        // routed through the same dispatch as verify for consistent reports
        nlohmann::json check = job.params;
        check["name"] = job.params.at("form").get<std::string>();
        std::vector<InequalityReport> extra;
        auto rep = dispatch_check(model, check, &extra);
        if (rep.status == IneqStatus::violated && violated) *violated = true;
        summary["report"] = rep.to_json();
        if (!extra.empty()) {
            auto arr = nlohmann::json::array();
            for (const auto& r : extra) arr.push_back(r.to_json());
            summary["extra_reports"] = std::move(arr);
        }
        return summary;
    }

    if (job.command == "nonlocal") {
        const double delta = job.params.at("delta").get<double>();
        const auto samples = static_cast<std::int64_t>(job.params.value("samples", 1e6));
        const Field f = field_from_spec(model, job.params.at("field"));
        const auto est = nonlocal_functional(f, delta, samples, job.seed);
        summary["value"] = est.value;
        summary["std_error"] = est.std_error;
        summary["tail_correction"] = est.tail_correction;
        summary["samples"] = est.samples;
        summary["z_min"] = est.z_min;
        summary["z_max"] = est.z_max;
        return summary;
    }

    throw std::invalid_argument("run_job: unknown command '" + job.command + "'");
}

RunManifest run_suite(const SuiteConfig& config, const std::string& out_dir, int jobs_parallel) {
    fs::create_directories(out_dir);
    RunManifest manifest;
    manifest.tool_version = kToolVersion;
    manifest.model_hash = hash_file(config.model_path);
    const ModelConfig model = load_model_file(config.model_path);

    manifest.jobs.resize(config.jobs.size());
    const int parallel = std::max(1, jobs_parallel);

    auto run_one = [&](int idx) {
        JobOutcome& outcome = manifest.jobs[static_cast<std::size_t>(idx)];
        outcome.index = idx;
        outcome.command = config.jobs[static_cast<std::size_t>(idx)].command;
        const auto start = std::chrono::steady_clock::now();
        bool violated = false;
        try {
            auto summary = run_job(model, config.jobs[static_cast<std::size_t>(idx)], out_dir, idx,
                                   &outcome.outputs, &violated);
            const std::string path = out_dir + "/job_" + std::to_string(idx) + "_" +
                                     outcome.command + ".json";
            write_text(path, summary.dump(2) + "\n");
            outcome.outputs.insert(outcome.outputs.begin(), path);
            outcome.status = violated ? "violated" : "ok";
        } catch (const std::exception& e) {
            outcome.status = std::string("error: ") + e.what();
        }
        outcome.wall_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    };

    for (std::size_t base = 0; base < config.jobs.size(); base += static_cast<std::size_t>(parallel)) {
        std::vector<std::future<void>> batch;
        for (std::size_t i = base;
             i < std::min(config.jobs.size(), base + static_cast<std::size_t>(parallel)); ++i)
            batch.push_back(std::async(std::launch::async, run_one, static_cast<int>(i)));
        for (auto& fut : batch) fut.get();
    }

    for (const auto& job : manifest.jobs) {
        if (job.status == "violated") manifest.any_violation = true;
        if (job.status.rfind("error", 0) == 0) manifest.any_error = true;
    }
    write_text(out_dir + "/manifest.json", manifest.to_json().dump(2) + "\n");
    return manifest;
}

} // namespace homog
