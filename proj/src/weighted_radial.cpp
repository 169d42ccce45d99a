#include "homog/weighted_radial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "homog/rng.hpp"

namespace homog {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double integral_p(const Field& f, double p, const RadialWeight& w = {}) {
    return std::pow(lp_norm(f, p, w), p);
}

std::map<std::string, std::string> base_metadata(const Field& f) {
    return {
        {"grid_n", std::to_string(f.grid.n)},
        {"Q", fmt(f.model->homogeneous_dimension())},
    };
}

} // namespace

RadialWeightFn RadialWeightFn::log_profile() {
    return RadialWeightFn{[](double r) { return std::log(r); },
                          [](double r) { return 1.0 / r; }, "log"};
}

RadialWeightFn RadialWeightFn::power_profile(double a) {
    return RadialWeightFn{[a](double r) { return std::pow(r, a); },
                          [a](double r) { return a * std::pow(r, a - 1.0); },
                          "power-" + fmt(a)};
}

void RadialWeightFn::validate_on(const RadialGridSpec& grid, double tol) const {
    grid.validate();
    for (int i = 4; i < grid.n - 4; i += std::max(1, grid.n / 64)) {
        const double r = grid.r(i);
        const double dr = 1e-6 * r;
        const double fd = (value(r + dr) - value(r - dr)) / (2.0 * dr);
        const double an = derivative(r);
        const double scale = std::max({std::abs(an), std::abs(fd), 1.0});
        if (std::abs(fd - an) > tol * scale)
            throw std::invalid_argument("RadialWeightFn: derivative callable disagrees with finite "
                                        "differences at r=" + fmt(r));
    }
}

namespace {

struct WeightIntegrals {
    double lhs = 0.0;       // int phi'/|x|^{Q-1} |f|^p
    double deriv = 0.0;     // int |R f|^p
    double weighted = 0.0;  // int |phi|^e / |x|^{e(Q-1)} |f|^p with e the dual exponent
};

WeightIntegrals weight_integrals(const RadialWeightFn& phi, const Field& f, double p,
                                 double dual_exp) {
    const double q_dim = f.model->homogeneous_dimension();
    WeightIntegrals out;
    out.lhs = integral_p(f, p, [&](double r) {
        return phi.derivative(r) / std::pow(r, q_dim - 1.0);
    });
    out.deriv = integral_p(radial_derivative_apply(f), p);
    out.weighted = integral_p(f, p, [&](double r) {
        return std::pow(std::abs(phi.value(r)), dual_exp) /
               std::pow(r, dual_exp * (q_dim - 1.0));
    });
    return out;
}

} // namespace

InequalityReport check_radial_weight_additive(const RadialWeightFn& phi, const Field& f, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("check_radial_weight_additive: requires p > 1");
    const auto ints = weight_integrals(phi, f, p, p / (p - 1.0));
    auto meta = base_metadata(f);
    meta["p"] = fmt(p);
    meta["phi"] = phi.name;
    return make_report("radial-weight-additive", ints.lhs,
                       ints.deriv + (p - 1.0) * ints.weighted, p - 1.0, "paper-sharp", "lhs/rhs",
                       1e-8, std::move(meta));
}

InequalityReport check_radial_weight_multiplicative(const RadialWeightFn& phi, const Field& f,
                                                    double p) {
    if (!(p > 1.0))
        throw std::invalid_argument("check_radial_weight_multiplicative: requires p > 1");
    const auto ints = weight_integrals(phi, f, p, p / (p - 1.0));
    auto meta = base_metadata(f);
    meta["p"] = fmt(p);
    meta["phi"] = phi.name;
    const double rhs =
        p * std::pow(ints.deriv, 1.0 / p) * std::pow(ints.weighted, (p - 1.0) / p);
    return make_report("radial-weight-multiplicative", ints.lhs, rhs, p, "paper-sharp", "lhs/rhs",
                       1e-8, std::move(meta));
}

std::pair<InequalityReport, InequalityReport> check_radial_weight_conjugate(
    const RadialWeightFn& phi, const Field& f, double p, double q) {
    if (!(p > 1.0) || !(q > 1.0) || std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-12)
        throw std::invalid_argument("check_radial_weight_conjugate: requires 1/p + 1/q = 1");
    const auto ints = weight_integrals(phi, f, p, q);
    auto meta = base_metadata(f);
    meta["p"] = fmt(p);
    meta["q"] = fmt(q);
    meta["phi"] = phi.name;
    auto additive =
        make_report("radial-weight-conjugate-additive", ints.lhs,
                    ints.deriv + (p / q) * ints.weighted, p / q, "paper-sharp", "lhs/rhs", 1e-8, meta);
    auto multiplicative = make_report(
        "radial-weight-conjugate-multiplicative", ints.lhs,
        p * std::pow(ints.deriv, 1.0 / p) * std::pow(ints.weighted, 1.0 / q), p, "paper-sharp",
        "lhs/rhs", 1e-8, std::move(meta));
    return {std::move(additive), std::move(multiplicative)};
}

InequalityReport check_uncertainty_hpw(const Field& f, HpwVariant variant) {
    const double n = f.model->homogeneous_dimension();
    if (variant == HpwVariant::improved && !(n >= 2.0))
        throw std::invalid_argument("check_uncertainty_hpw: improved variant requires n >= 2");
    if (variant == HpwVariant::classical && !(n >= 3.0))
        throw std::invalid_argument("check_uncertainty_hpw: classical variant requires n >= 3");
    if (!f.is_radial(1e-12 * f.max_abs()))
        throw std::invalid_argument(
            "check_uncertainty_hpw: gradient variants run on radial fields only");

    const double mass = integral_p(f, 2.0);
    const double deriv = integral_p(radial_derivative_apply(f), 2.0);
    const double second_moment = integral_p(f, 2.0, [](double r) { return r * r; });
    const double c = variant == HpwVariant::improved ? std::pow(2.0 / n, 2.0)
                                                     : std::pow(2.0 / (n - 2.0), 2.0);
    auto meta = base_metadata(f);
    meta["variant"] = variant == HpwVariant::improved ? "improved-2/n" : "classical-2/(n-2)";
    return make_report("uncertainty-hpw", mass * mass, c * deriv * second_moment, c, "paper-sharp",
                       "lhs/rhs", 1e-6, std::move(meta));
}

// ---- nonlocal functional ----------------------------------------------------

namespace {

struct RadialProfile {
    // linear interpolation in s of the (real) radial profile; 0 beyond r_max
    const Field* f;
    double eval_r(double r) const {
        const auto& g = *f;
        if (r <= 0.0) return g.at(0, 0).real();
        const double s = std::log(r);
        if (s <= g.grid.s_min) return g.at(0, 0).real();
        if (s >= g.grid.s_max) return 0.0;
        const double x = (s - g.grid.s_min) / g.grid.step();
        const auto i0 = static_cast<std::size_t>(x);
        const double frac = x - static_cast<double>(i0);
        const std::size_t i1 = std::min(i0 + 1, g.rows() - 1);
        return g.at(i0, 0).real() * (1.0 - frac) + g.at(i1, 0).real() * frac;
    }
    double eval_point(const double* x, int n) const {
        double r2 = 0.0;
        for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
        return eval_r(std::sqrt(r2));
    }
};

double sphere_area(int n) {
    const double pi = 3.14159265358979323846;
    switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * pi;
    case 3: return 4.0 * pi;
    }
    throw std::invalid_argument("nonlocal_functional: dimension must be 1, 2 or 3");
}

} // namespace

NonlocalEstimate nonlocal_functional(const Field& f, double delta, std::int64_t samples,
                                     std::uint64_t seed) {
    if (!(delta > 0.0)) throw std::invalid_argument("nonlocal_functional: delta must be positive");
    if (samples <= 0) throw std::invalid_argument("nonlocal_functional: samples must be positive");
    const auto& model = *f.model;
    if (model.norm().kind != NormKind::euclidean_p || model.norm().p != 2.0 ||
        model.ambient_dim() < 1 || model.ambient_dim() > 3)
        throw std::invalid_argument(
            "nonlocal_functional: supported only on Euclidean models with n in {1,2,3}");
    if (!f.is_radial(1e-12 * f.max_abs()))
        throw std::invalid_argument("nonlocal_functional: radial fields only");
    for (const auto& v : f.values)
        if (std::abs(v.imag()) > 1e-12 * std::max(1.0, f.max_abs()))
            throw std::invalid_argument("nonlocal_functional: real fields only");

    const int n = model.ambient_dim();
    NonlocalEstimate est;
    est.samples = samples;
    est.seed = seed;

    // the indicator can never fire when the total oscillation is <= delta
    double vmin = f.at(0, 0).real(), vmax = vmin;
    for (std::size_t i = 0; i < f.rows(); ++i) {
        const double v = f.at(i, 0).real();
        vmin = std::min(vmin, v);
        vmax = std::max(vmax, v);
    }
    // the zero extension beyond the grid participates in differences
    vmin = std::min(vmin, 0.0);
    vmax = std::max(vmax, 0.0);
    if (vmax - vmin <= delta) return est; // exactly zero

    // Lipschitz bound L = max |f'(r)| from the log-grid derivative
    const Field df = radial_derivative_apply(f);
    double lip = 0.0;
    for (std::size_t i = 0; i < f.rows(); ++i)
        lip = std::max(lip, std::abs(df.at(i, 0).real()));
    est.z_min = lip > 0.0 ? delta / (2.0 * lip) : 0.0;

    // effective support: |f| > delta/2 nowhere beyond r_eff
    double r_eff = f.grid.r(0);
    for (std::size_t i = 0; i < f.rows(); ++i)
        if (std::abs(f.at(i, 0).real()) > delta / 2.0) r_eff = f.grid.r(static_cast<int>(i));
    est.z_max = 2.0 * r_eff;
    if (!(est.z_min > 0.0) || est.z_min >= est.z_max)
        throw NumericError("nonlocal_functional: degenerate sampling annulus (z_min >= z_max)");

    const RadialProfile prof{&f};
    const double box = 3.0 * r_eff; // covers every firing pair with |z| <= z_max
    const double volume = std::pow(2.0 * box, n);
    const double zmin2 = 1.0 / (est.z_min * est.z_min);
    const double zmax2 = 1.0 / (est.z_max * est.z_max);
    const double z_norm = sphere_area(n) * (zmin2 - zmax2) / 2.0;
    const double weight = volume * z_norm * delta * delta;

    Rng rng(seed);
    const int batches = 32;
    std::vector<double> batch_mean(static_cast<std::size_t>(batches), 0.0);
    const std::int64_t per_batch = (samples + batches - 1) / batches;
    const double pi = 3.14159265358979323846;
    std::int64_t done = 0;
    for (int b = 0; b < batches && done < samples; ++b) {
        std::int64_t count = std::min<std::int64_t>(per_batch, samples - done);
        double acc = 0.0;
        for (std::int64_t i = 0; i < count; ++i) {
            double x[3] = {0, 0, 0}, y[3] = {0, 0, 0};
            for (int d = 0; d < n; ++d) x[d] = rng.uniform(-box, box);
            // radius from the |z|^{-(n+2)} density restricted to [z_min, z_max]
            const double u = rng.uniform();
            const double rho = 1.0 / std::sqrt(zmin2 - u * (zmin2 - zmax2));
            double dir[3] = {0, 0, 0};
            if (n == 1) {
                dir[0] = rng.uniform() < 0.5 ? -1.0 : 1.0;
            } else if (n == 2) {
                const double ang = rng.uniform(0.0, 2.0 * pi);
                dir[0] = std::cos(ang);
                dir[1] = std::sin(ang);
            } else {
                const double w = rng.uniform(-1.0, 1.0);
                const double ang = rng.uniform(0.0, 2.0 * pi);
                const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
                dir[0] = s * std::cos(ang);
                dir[1] = s * std::sin(ang);
                dir[2] = w;
            }
            for (int d = 0; d < n; ++d) y[d] = x[d] + rho * dir[d];
            const double diff = std::abs(prof.eval_point(y, n) - prof.eval_point(x, n));
            if (diff > delta) acc += 1.0;
        }
        batch_mean[static_cast<std::size_t>(b)] = weight * acc / static_cast<double>(count);
        done += count;
    }
    double mean = 0.0;
    for (double v : batch_mean) mean += v;
    mean /= static_cast<double>(batches);
    double var = 0.0;
    for (double v : batch_mean) var += (v - mean) * (v - mean);
    var /= static_cast<double>(batches - 1);
    est.value = mean;
    est.std_error = std::sqrt(var / static_cast<double>(batches));

    // far pairs (|z| > z_max): one member sits where |f| > delta, the other
    // is effectively zero; both orderings included
    double level_vol = 0.0;
    {
        const double q = model.homogeneous_dimension();
        const double h = f.grid.step();
        for (std::size_t i = 0; i < f.rows(); ++i) {
            if (std::abs(f.at(i, 0).real()) <= delta) continue;
            const double s = f.grid.s(static_cast<int>(i));
            level_vol += ((i == 0 || i + 1 == f.rows()) ? 0.5 : 1.0) * std::exp(q * s) * h;
        }
        level_vol *= model.sphere_measure();
    }
    est.tail_correction = delta * delta * sphere_area(n) * level_vol / (est.z_max * est.z_max);
    est.value += est.tail_correction;
    return est;
}

NonlocalLogSobolevResult check_nonlocal_log_sobolev(const Field& f, double delta, double trial_c,
                                                    std::int64_t samples, std::uint64_t seed) {
    const double q = f.model->homogeneous_dimension();
    if (!(q >= 3.0)) throw std::invalid_argument("check_nonlocal_log_sobolev: requires Q >= 3");
    if (!(trial_c > 0.0))
        throw std::invalid_argument("check_nonlocal_log_sobolev: trial constant must be positive");

    NonlocalLogSobolevResult res;
    const double mass = integral_p(f, 2.0); // ||f||^2
    if (!(mass > 0.0)) throw std::invalid_argument("check_nonlocal_log_sobolev: zero field");

    // entropy term: int |f|^2 log(|f|^2) dx / ||f||^2 - log ||f||^2, with 0 log 0 = 0
    const double h = f.grid.step();
    double ent = 0.0;
    for (std::size_t k = 0; k < f.cols(); ++k) {
        double col = 0.0;
        for (std::size_t i = 0; i < f.rows(); ++i) {
            const double a2 = std::norm(f.at(i, k));
            if (a2 <= 0.0) continue;
            col += ((i == 0 || i + 1 == f.rows()) ? 0.5 : 1.0) * a2 * std::log(a2) *
                   std::exp(q * f.grid.s(static_cast<int>(i)));
        }
        ent += f.model->sphere()[k].weight * col * h;
    }
    res.lhs = ent / mass - std::log(mass) + (q / 2.0) * std::log(mass);

    res.nonlocal = nonlocal_functional(f, delta, samples, seed);
    const double x_term =
        std::pow(delta, 4.0 / q) * std::pow(mass, (q - 2.0) / q) + res.nonlocal.value;
    res.rhs_trial = (q / 2.0) * std::log(trial_c * x_term);
    res.min_empirical_c = std::exp(2.0 * res.lhs / q) / x_term;

    InequalityReport rep;
    rep.name = "nonlocal-log-sobolev";
    rep.lhs = res.lhs;
    rep.rhs = res.rhs_trial;
    rep.constant_used = trial_c;
    rep.constant_provenance = "empirical";
    rep.orientation = "lhs/rhs";
    rep.ratio = res.rhs_trial != 0.0 ? res.lhs / res.rhs_trial : 0.0;
    rep.status = res.lhs <= res.rhs_trial ? IneqStatus::holds : IneqStatus::violated;
    rep.err_estimate = res.nonlocal.std_error;
    rep.metadata = {{"assumed_hypothesis", "level-set bound (1.1) assumed, not verified"},
                    {"delta", fmt(delta)},
                    {"min_empirical_C", fmt(res.min_empirical_c)},
                    {"I_delta", fmt(res.nonlocal.value)}};
    res.report = std::move(rep);
    return res;
}

} // namespace homog
