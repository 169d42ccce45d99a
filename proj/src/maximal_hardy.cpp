#include "homog/maximal_hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "homog/quadrature.hpp"

namespace homog {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_positive(const Field& f, const char* who) {
    for (std::size_t i = 0; i < f.rows(); ++i)
        for (std::size_t k = 0; k < f.cols(); ++k) {
            const cplx v = f.at(i, k);
            if (v.imag() != 0.0 || !(v.real() > 1e-300))
                throw std::invalid_argument(std::string(who) +
                                            ": requires strictly positive samples; offending s=" +
                                            fmt(f.grid.s(static_cast<int>(i))) + ", node " +
                                            std::to_string(k));
        }
}

// prefix integrals P_k(r_i) = int_0^{r_i} g(rho, y_k) rho^{Q-1} d rho with
// the [0, r_min) head modeled as g linear in s (two-term expansion)
std::vector<double> radial_prefix(const Field& g, std::size_t k) {
    const double q = g.model->homogeneous_dimension();
    const double h = g.grid.step();
    const std::size_t n = g.rows();
    std::vector<double> out(n);
    const double g0 = g.at(0, k).real();
    const double slope = (g.at(1, k).real() - g0) / h;
    const double rmin_q = std::exp(q * g.grid.s_min);
    out[0] = rmin_q * (g0 / q - slope / (q * q));
    for (std::size_t i = 1; i < n; ++i) {
        const double a = g.at(i - 1, k).real() * std::exp(q * g.grid.s(static_cast<int>(i - 1)));
        const double b = g.at(i, k).real() * std::exp(q * g.grid.s(static_cast<int>(i)));
        out[i] = out[i - 1] + 0.5 * h * (a + b);
    }
    return out;
}

} // namespace

Field ball_mean(const Field& f) {
    for (const auto& v : f.values)
        if (v.imag() != 0.0)
            throw std::invalid_argument("ball_mean: real-valued fields only");
    const double q = f.model->homogeneous_dimension();
    Field out = f;
    std::vector<double> total(f.rows(), 0.0);
    for (std::size_t k = 0; k < f.cols(); ++k) {
        const auto pref = radial_prefix(f, k);
        const double w = f.model->sphere()[k].weight;
        for (std::size_t i = 0; i < f.rows(); ++i) total[i] += w * pref[i];
    }
    const double inv_wp = 1.0 / f.model->sphere_measure();
    for (std::size_t i = 0; i < f.rows(); ++i) {
        const double ball = std::exp(q * f.grid.s(static_cast<int>(i))) / q; // r^Q / Q
        const double v = total[i] * inv_wp / ball;
        for (std::size_t k = 0; k < f.cols(); ++k) out.at(i, k) = cplx(v, 0.0);
    }
    return out;
}

Field geometric_mean_transform(const Field& f) {
    require_positive(f, "geometric_mean_transform");
    Field logf = f;
    for (auto& v : logf.values) v = cplx(std::log(v.real()), 0.0);
    Field mean = ball_mean(logf);
    for (auto& v : mean.values) v = cplx(std::exp(v.real()), 0.0);
    return mean;
}

namespace {

// suffix integrals T_i = int_{s_i}^{s_max} W3(e^sigma) e^{-Q sigma} d sigma
// for radial W3 (column 0); T(R_i) = |wp| * T_i
std::vector<double> tail_integrals(const Field& w3) {
    const double q = w3.model->homogeneous_dimension();
    const double h = w3.grid.step();
    const std::size_t n = w3.rows();
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = w3.at(i, 0).real() * std::exp(-q * w3.grid.s(static_cast<int>(i)));
    std::vector<double> out(n, 0.0);
    for (std::size_t i = n - 1; i > 0; --i) out[i - 1] = out[i] + 0.5 * h * (g[i - 1] + g[i]);
    return out;
}

Field w3_field(const Field& phi, const Field& psi) {
    require_positive(psi, "a_functional (psi)");
    require_positive(phi, "a_functional (phi)");
    // the witness construction is radial; non-radial weights are out of scope
    if (!phi.is_radial(1e-12 * phi.max_abs()) || !psi.is_radial(1e-12 * psi.max_abs()))
        throw std::invalid_argument("a_functional: weights must be radial fields");
    Field inv_psi = psi;
    for (auto& v : inv_psi.values) v = cplx(1.0 / v.real(), 0.0);
    Field trans = geometric_mean_transform(inv_psi);
    Field w3 = phi;
    for (std::size_t i = 0; i < w3.values.size(); ++i)
        w3.values[i] = cplx(phi.values[i].real() * trans.values[i].real(), 0.0);
    return w3;
}

} // namespace

AFunctionalResult a_functional(const Field& phi, const Field& psi) {
    const Field w3 = w3_field(phi, psi);
    const double q = w3.model->homogeneous_dimension();
    const std::size_t n = w3.rows();

    // divergence test: the tail integrand must decay at the outer end
    double integrand_max = 0.0, integrand_edge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double gi = w3.at(i, 0).real() * std::exp(-q * w3.grid.s(static_cast<int>(i)));
        integrand_max = std::max(integrand_max, gi);
        if (i + 2 >= n) integrand_edge = std::max(integrand_edge, gi);
    }
    AFunctionalResult res;
    if (integrand_max > 0.0 && integrand_edge > 1e-12 * integrand_max) {
        res.divergent = true;
        res.value = std::numeric_limits<double>::infinity();
        return res;
    }

    const auto tails = tail_integrals(w3);
    const double wp = w3.model->sphere_measure();
    std::vector<double> a_of_r(n);
    for (std::size_t i = 0; i < n; ++i)
        a_of_r[i] = std::exp(q * w3.grid.s(static_cast<int>(i))) * wp * tails[i];
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (a_of_r[i] > a_of_r[best]) best = i;
    res.value = a_of_r[best];
    res.argmax_R = w3.grid.r(static_cast<int>(best));
    std::size_t near = 0;
    for (double v : a_of_r)
        if (v >= (1.0 - 1e-6) * res.value) ++near;
    res.r_independent = near * 2 >= n;
    return res;
}

InequalityReport check_max_hardy(const Field& phi, const Field& psi, const Field& f) {
    require_positive(f, "check_max_hardy (f)");
    const AFunctionalResult a = a_functional(phi, psi);
    if (a.divergent)
        throw NumericError(
            "check_max_hardy: A(phi,psi) diverges, the inequality cannot hold uniformly");
    const double q = f.model->homogeneous_dimension();
    const double wp = f.model->sphere_measure();
    const double c = std::exp(1.0) * a.value * q / wp; // e A / |B(0,1)|

    const Field transform = geometric_mean_transform(f);
    const double h = f.grid.step();
    auto weighted_mass = [&](const Field& weight, const Field& g) {
        double acc = 0.0;
        for (std::size_t k = 0; k < g.cols(); ++k) {
            double col = 0.0;
            for (std::size_t i = 0; i < g.rows(); ++i) {
                const double s = g.grid.s(static_cast<int>(i));
                col += ((i == 0 || i + 1 == g.rows()) ? 0.5 : 1.0) * weight.at(i, k).real() *
                       g.at(i, k).real() * std::exp(q * s);
            }
            acc += g.model->sphere()[k].weight * col * h;
        }
        return acc;
    };
    const double lhs = weighted_mass(phi, transform);
    const double rhs_mass = weighted_mass(psi, f);

    auto meta = std::map<std::string, std::string>{
        {"A", fmt(a.value)},
        {"argmax_R", fmt(a.argmax_R)},
        {"A_r_independent", a.r_independent ? "true" : "false"},
        {"C", fmt(c)},
        {"grid_n", std::to_string(f.grid.n)},
    };
    return make_report("maximal-hardy", lhs, c * rhs_mass, c, "paper-sharp", "lhs/rhs", 1e-6,
                       std::move(meta));
}

Field max_hardy_witness(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                        double big_r) {
    if (!(big_r > 0.0)) throw std::invalid_argument("max_hardy_witness: R must be positive");
    const double q = model->homogeneous_dimension();
    return make_radial_field(std::move(model), grid, [q, big_r](double r) {
        return r < big_r ? std::pow(big_r, -q)
                         : std::exp(-2.0 * q) * std::pow(r, -2.0 * q) * std::pow(big_r, q);
    });
}

double max_hardy_witness_mass(const GroupModel& model, double big_r, int samples_per_piece) {
    if (!(big_r > 0.0)) throw std::invalid_argument("max_hardy_witness_mass: R must be positive");
    if (samples_per_piece < 16)
        throw std::invalid_argument("max_hardy_witness_mass: too few samples");
    const double q = model.homogeneous_dimension();
    const double wp = model.sphere_measure();
    const double s_r = std::log(big_r);
    const double s_lo = s_r - 14.0, s_hi = s_r + 14.0;

    // inner piece: R^{-Q} int_{s_lo}^{s_r} e^{Q sigma} d sigma (+ exact head below s_lo)
    const std::size_t m = static_cast<std::size_t>(samples_per_piece);
    std::vector<double> vals(m);
    const double h1 = (s_r - s_lo) / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i)
        vals[i] = std::exp(q * (s_lo + h1 * static_cast<double>(i)));
    double inner = std::pow(big_r, -q) * trapezoid(vals, h1);
    inner += std::pow(big_r, -q) * std::exp(q * s_lo) / q; // [0, e^{s_lo}) head, exact

    // outer piece: e^{-2Q} R^Q int_{s_r}^{s_hi} e^{-Q sigma} d sigma (+ exact tail)
    const double h2 = (s_hi - s_r) / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i)
        vals[i] = std::exp(-q * (s_r + h2 * static_cast<double>(i)));
    double outer = std::exp(-2.0 * q) * std::pow(big_r, q) * trapezoid(vals, h2);
    outer += std::exp(-2.0 * q) * std::pow(big_r, q) * std::exp(-q * s_hi) / q;

    return wp * (inner + outer);
}

std::vector<NecessityPoint> necessity_probe(const Field& phi, const Field& psi,
                                            const std::vector<double>& big_r_list) {
    const Field w3 = w3_field(phi, psi);
    const double q = w3.model->homogeneous_dimension();
    const double h = w3.grid.step();
    const auto tails = tail_integrals(w3);
    const double wp = w3.model->sphere_measure();

    std::vector<NecessityPoint> out;
    out.reserve(big_r_list.size());
    for (double big_r : big_r_list) {
        // snap R to the grid so the witness kink sits on a sample
        const double idx_f = (std::log(big_r) - w3.grid.s_min) / h;
        const auto idx = static_cast<std::size_t>(
            std::clamp<std::ptrdiff_t>(std::llround(idx_f), 0,
                                       static_cast<std::ptrdiff_t>(w3.rows()) - 1));
        const double r_snapped = w3.grid.r(static_cast<int>(idx));

        NecessityPoint pt;
        pt.big_r = r_snapped;
        pt.lower_bound = std::exp(2.0 - 2.0 * q) * std::exp(q * w3.grid.s(static_cast<int>(idx))) *
                         wp * tails[idx];

        const Field u = max_hardy_witness(w3.model, w3.grid, r_snapped);
        const Field transform = geometric_mean_transform(u);
        double acc = 0.0;
        for (std::size_t i = 0; i < w3.rows(); ++i) {
            const double s = w3.grid.s(static_cast<int>(i));
            acc += ((i == 0 || i + 1 == w3.rows()) ? 0.5 : 1.0) * w3.at(i, 0).real() *
                   transform.at(i, 0).real() * std::exp(q * s);
        }
        pt.lhs = acc * h * wp;
        out.push_back(pt);
    }
    return out;
}

} // namespace homog
