#include "homog/model_io.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <sstream>

#include "homog/inequalities.hpp"
#include "homog/maximal_hardy.hpp"

namespace homog {

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double smooth_window(double s, double lo, double hi, double taper) {
    return smooth_step((s - lo) / taper) * smooth_step((hi - s) / taper);
}

ModelConfig load_model(const nlohmann::json& j) {
    ModelConfig cfg;
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        cfg.grid = RadialGridSpec(g.at("s_min").get<double>(), g.at("s_max").get<double>(),
                                  g.at("N").get<int>());
    }
    const double q = j.at("Q").get<double>();
    const std::string kind = j.contains("norm") ? j.at("norm").at("kind").get<std::string>()
                                                : std::string("abstract");
    if (kind == "abstract") {
        cfg.model = std::make_shared<GroupModel>(
            GroupModel::abstract_radial(q, j.value("sphere_measure", 1.0)));
        return cfg;
    }
    if (kind == "anisotropic") {
        const auto& nj = j.at("norm");
        auto weights = nj.at("weights").get<std::vector<double>>();
        const double power = nj.at("power").get<double>();
        const double wp = j.at("sphere_measure").get<double>();
        cfg.model = std::make_shared<GroupModel>(
            GroupModel::anisotropic_radial(std::move(weights), power, wp));
        return cfg;
    }
    if (kind == "euclidean") {
        const int n = j.at("ambient_dim").get<int>();
        const auto& pj = j.at("norm").at("p");
        const double p = pj.is_string() ? std::numeric_limits<double>::infinity()
                                        : pj.get<double>();
        if (pj.is_string() && pj.get<std::string>() != "inf")
            throw std::invalid_argument("load_model: norm p must be a number or \"inf\"");
        const int resolution = j.value("sphere_resolution", 32);
        if (j.contains("sphere_csv")) {
            std::ifstream in(j.at("sphere_csv").get<std::string>());
            if (!in) throw std::invalid_argument("load_model: cannot open sphere_csv");
            auto nodes = load_sphere_csv(in, n);
            cfg.model = std::make_shared<GroupModel>(GroupModel::from_sphere_table(
                n, q, QuasiNormSpec::euclidean(p), std::move(nodes)));
        } else {
            if (std::abs(q - static_cast<double>(n)) > 1e-12)
                throw std::invalid_argument("load_model: isotropic euclidean models require Q = n");
            cfg.model = std::make_shared<GroupModel>(GroupModel::euclidean(n, p, resolution));
        }
        return cfg;
    }
    throw std::invalid_argument("load_model: unknown norm kind '" + kind + "'");
}

ModelConfig load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_model_file: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return load_model(j);
}

std::vector<SphereNode> load_sphere_csv(std::istream& in, int ambient_dim) {
    std::vector<SphereNode> nodes;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<int>(vals.size()) != ambient_dim + 1)
            throw std::invalid_argument("load_sphere_csv: expected coords...,weight per row");
        SphereNode node;
        node.coords.assign(vals.begin(), vals.end() - 1);
        node.weight = vals.back();
        nodes.push_back(std::move(node));
    }
    if (nodes.empty()) throw std::invalid_argument("load_sphere_csv: no rows");
    return nodes;
}

namespace {

double param(const std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

} // namespace

const std::vector<std::string>& field_constructor_names() {
    static const std::vector<std::string> names = {
        "gaussian",       "exp-decay", "bump",     "power-window",
        "bliss-extremizer", "rational", "stubbe-extremal", "witness",
    };
    return names;
}

Field construct_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                      const std::string& name, const std::map<std::string, double>& params) {
    if (name == "gaussian") {
        const double b = param(params, "b", 1.0);
        return make_radial_field(std::move(model), grid,
                                 [b](double r) { return std::exp(-b * r * r); });
    }
    if (name == "exp-decay") {
        const double b = param(params, "b", 1.0);
        return make_radial_field(std::move(model), grid,
                                 [b](double r) { return std::exp(-b * r); });
    }
    if (name == "bump") {
        const double center = param(params, "center", 0.0);
        const double width = param(params, "width", 2.0);
        const double amp = param(params, "amp", 1.0);
        return make_radial_field(std::move(model), grid, [=](double r) {
            const double u = (std::log(r) - center) / width;
            return std::abs(u) < 1.0 ? amp * std::exp(1.0 - 1.0 / (1.0 - u * u)) : 0.0;
        });
    }
    if (name == "power-window") {
        const double a = param(params, "a", 1.0);
        const double center = param(params, "center", 0.0);
        const double width = param(params, "width", 3.0);
        const double taper = param(params, "taper", 1.0);
        return make_radial_field(std::move(model), grid, [=](double r) {
            const double s = std::log(r);
            return std::pow(r, a) * smooth_window(s, center - width, center + width, taper);
        });
    }
    if (name == "bliss-extremizer") {
        const BlissExtremizer ext(param(params, "c1", 1.0), param(params, "c2", 1.0),
                                  param(params, "p", 2.0), param(params, "q", 6.0));
        return make_radial_field(std::move(model), grid, [ext](double r) { return ext(r); });
    }
    if (name == "rational") {
        const double a = param(params, "a", 2.0);
        const double c = param(params, "c", 1.0);
        return make_radial_field(std::move(model), grid,
                                 [=](double r) { return std::pow(1.0 + c * r * r, -a); });
    }
    if (name == "stubbe-extremal")
        return stubbe_extremal_field(std::move(model), grid, param(params, "delta", 0.0),
                                     param(params, "c2", 1.0));
    if (name == "witness")
        return max_hardy_witness(std::move(model), grid, param(params, "R", 1.0));
    throw std::invalid_argument("construct_field: unknown constructor '" + name + "'");
}

Field random_smooth_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                          Rng& rng, bool radial, bool complex_valued) {
    const int bumps = 3 + static_cast<int>(rng.raw() % 3);
    const double margin = 3.0;
    const double lo = grid.s_min + margin, hi = grid.s_max - margin;
    // per-node amplitudes are drawn independently so that sign patterns
    // (and hence zero crossings) differ across sphere columns
    struct Bump {
        double center, width;
        std::vector<cplx> amp;
    };
    std::vector<Bump> parts;
    const std::size_t cols = model->node_count();
    for (int b = 0; b < bumps; ++b) {
        Bump bump;
        bump.center = rng.uniform(lo + 1.0, hi - 1.0);
        bump.width = rng.uniform(0.8, 2.0);
        bump.amp.resize(cols);
        const cplx shared = complex_valued
                                ? cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
                                : cplx(rng.uniform(-1.0, 1.0), 0.0);
        for (auto& a : bump.amp) {
            if (radial || cols == 1) {
                a = shared;
            } else {
                a = complex_valued ? cplx(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
                                   : cplx(rng.uniform(-1.0, 1.0), 0.0);
            }
        }
        parts.push_back(std::move(bump));
    }
    return make_field(std::move(model), grid, [&](double r, std::size_t k) {
        const double s = std::log(r);
        cplx acc(0.0, 0.0);
        for (const auto& b : parts) {
            const double u = (s - b.center) / b.width;
            if (std::abs(u) >= 1.0) continue;
            acc += b.amp[k] * std::exp(1.0 - 1.0 / (1.0 - u * u));
        }
        return acc;
    });
}

std::vector<Field> builtin_smooth_corpus(std::shared_ptr<const GroupModel> model,
                                         const RadialGridSpec& grid, int count,
                                         std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        out.push_back(random_smooth_field(model, grid, rng, /*radial=*/model->node_count() == 1));
    return out;
}

std::vector<Field> positive_corpus(std::shared_ptr<const GroupModel> model,
                                   const RadialGridSpec& grid, int count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        // strictly positive profiles with power-law tails (stay far above the
        // 1e-300 floor of the geometric-mean transform on wide grids)
        const double a = rng.uniform(2.0, 4.0);
        const double b = rng.uniform(2.5, 5.0);
        const double c = std::exp(rng.uniform(-1.0, 1.0));
        const double mix = rng.uniform(0.1, 1.0);
        out.push_back(make_radial_field(model, grid, [=](double r) {
            return std::pow(1.0 + c * r * r, -a) + mix * std::pow(1.0 + r, -b);
        }));
    }
    return out;
}

void export_field_csv(const Field& f, std::ostream& out) {
    out << "s,node_index,re,im\n";
    char buf[64];
    auto put = [&](double v) {
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        out.write(buf, res.ptr - buf);
    };
    for (std::size_t i = 0; i < f.rows(); ++i)
        for (std::size_t k = 0; k < f.cols(); ++k) {
            put(f.grid.s(static_cast<int>(i)));
            out << ',' << k << ',';
            put(f.at(i, k).real());
            out << ',';
            put(f.at(i, k).imag());
            out << '\n';
        }
}

Field import_field_csv(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                       std::istream& in) {
    Field f = zero_field(std::move(model), grid);
    std::string line;
    if (!std::getline(in, line) || line.rfind("s,node_index", 0) != 0)
        throw std::invalid_argument("import_field_csv: missing header row");
    const double h = grid.step();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 4) throw std::invalid_argument("import_field_csv: bad row: " + line);
        const double s = std::stod(cells[0]);
        const auto k = static_cast<std::size_t>(std::stoul(cells[1]));
        const auto i_f = (s - grid.s_min) / h;
        const auto i = static_cast<std::size_t>(std::llround(i_f));
        if (i >= f.rows() || std::abs(i_f - std::round(i_f)) > 1e-6 || k >= f.cols())
            throw std::invalid_argument("import_field_csv: sample off the declared grid: " + line);
        f.at(i, k) = cplx(std::stod(cells[2]), std::stod(cells[3]));
    }
    return f;
}

} // namespace homog
