#include "homog/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "homog/model_io.hpp"
#include "homog/optim.hpp"
#include "homog/quadrature.hpp"
#include "homog/rng.hpp"
#include "homog/special_functions.hpp"

namespace homog {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// half-resolution copy (every second s-sample) for Richardson-style error
// estimates of the trapezoid integrals
Field coarsen(const Field& f) {
    const std::size_t n2 = (f.rows() + 1) / 2;
    Field out;
    out.model = f.model;
    out.grid = RadialGridSpec(f.grid.s_min, f.grid.s(static_cast<int>(2 * (n2 - 1))),
                              static_cast<int>(n2));
    out.values.resize(n2 * f.cols());
    for (std::size_t i = 0; i < n2; ++i)
        for (std::size_t k = 0; k < f.cols(); ++k) out.at(i, k) = f.at(2 * i, k);
    return out;
}

double rel_diff(double fine, double coarse) {
    const double scale = std::max({std::abs(fine), std::abs(coarse), 1e-300});
    return std::abs(fine - coarse) / (3.0 * scale);
}

double integral_p(const Field& f, double p, const RadialWeight& w = {}) {
    return std::pow(lp_norm(f, p, w), p);
}

std::map<std::string, std::string> base_metadata(const Field& f) {
    return {
        {"grid_n", std::to_string(f.grid.n)},
        {"s_min", fmt(f.grid.s_min)},
        {"s_max", fmt(f.grid.s_max)},
        {"Q", fmt(f.model->homogeneous_dimension())},
    };
}

// ---- line-side (R x wp) norms of F f ---------------------------------------

double line_lp_norm(const LineField& g, double p) {
    const double h = g.grid.step();
    double acc = 0.0;
    for (std::size_t k = 0; k < g.cols(); ++k) {
        double col = 0.0;
        for (std::size_t i = 0; i < g.rows(); ++i)
            col += ((i == 0 || i + 1 == g.rows()) ? 0.5 : 1.0) * std::pow(std::abs(g.at(i, k)), p);
        acc += g.model->sphere()[k].weight * col * h;
    }
    return std::pow(acc, 1.0 / p);
}

double line_col_lp_norm(const LineField& g, double p, std::size_t k) {
    const double h = g.grid.step();
    double col = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        col += ((i == 0 || i + 1 == g.rows()) ? 0.5 : 1.0) * std::pow(std::abs(g.at(i, k)), p);
    return std::pow(col * h, 1.0 / p);
}

double line_sup_col_lp_norm(const LineField& g, double p) {
    double best = 0.0;
    for (std::size_t k = 0; k < g.cols(); ++k) best = std::max(best, line_col_lp_norm(g, p, k));
    return best;
}

// d/ds of a line field (same stencil machinery as the Euler operator)
LineField line_derivative(const LineField& g) {
    Field tmp;
    tmp.model = g.model;
    tmp.grid = g.grid;
    tmp.values = g.values;
    Field d = euler_apply(tmp);
    LineField out = g;
    out.values = std::move(d.values);
    return out;
}

// sphere mean of a line field as a 1-D function of s
std::vector<double> line_sphere_mean_abs(const LineField& g) {
    std::vector<double> out(g.rows(), 0.0);
    const double inv_wp = 1.0 / g.model->sphere_measure();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        cplx acc(0.0, 0.0);
        for (std::size_t k = 0; k < g.cols(); ++k) acc += g.model->sphere()[k].weight * g.at(i, k);
        out[i] = std::abs(acc * inv_wp);
    }
    return out;
}

double vector_lp_ds(const std::vector<double>& v, double p, double h) {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        acc += ((i == 0 || i + 1 == v.size()) ? 0.5 : 1.0) * std::pow(v[i], p);
    return std::pow(acc * h, 1.0 / p);
}

} // namespace

// ---- sharp constants --------------------------------------------------------

double sq_constant(double q, double sphere_measure) {
    if (!(q > 2.0)) throw std::invalid_argument("sq_constant: requires Q > 2");
    if (!(sphere_measure > 0.0)) throw std::invalid_argument("sq_constant: |wp| must be positive");
    const double gamma_ratio = gamma_fn(q / 2.0) * gamma_fn(1.0 + q / 2.0) / gamma_fn(q);
    return std::pow(sphere_measure, 2.0 / q) * std::pow(q, (q - 2.0) / q) * (q - 2.0) *
           std::pow(gamma_ratio, 2.0 / q);
}

double bliss_constant(double p, double q) {
    if (!(p > 1.0) || !(q > p)) throw std::invalid_argument("bliss_constant: requires q > p > 1");
    const double head = std::pow(q - q / p, -p / q);
    const double num = (q / p - 1.0) * gamma_fn(p * q / (q - p));
    const double den = gamma_fn(p / (q - p)) * gamma_fn(p * (q - 1.0) / (q - p));
    return head * std::pow(num / den, (q - p) / q);
}

BlissExtremizer::BlissExtremizer(double c1_, double c2_, double p_, double q_)
    : c1(c1_), c2(c2_), p(p_), q(q_) {
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw std::invalid_argument("BlissExtremizer: c1, c2 must be positive");
    if (!(p > 1.0) || !(q > p)) throw std::invalid_argument("BlissExtremizer: requires q > p > 1");
}

double BlissExtremizer::operator()(double r) const {
    return c1 * std::pow(c2 * std::pow(r, q / p - 1.0) + 1.0, q / (p - q));
}

// ---- Bliss checks ------------------------------------------------------------

InequalityReport check_bliss(const std::vector<double>& r, const std::vector<double>& f, double p,
                             double q) {
    if (r.size() != f.size() || r.size() < 4)
        throw std::invalid_argument("check_bliss: need matching r/f samples");
    if (!(p > 1.0) || !(q > p)) throw std::invalid_argument("check_bliss: requires q > p > 1");
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < 0.0) throw std::invalid_argument("check_bliss: negative sample");
        if (i > 0 && !(r[i] > r[i - 1]))
            throw std::invalid_argument("check_bliss: r must be strictly increasing");
    }
    // cumulative F(s) = int_0^s f dr; the [0, r_0] head is a rectangle
    std::vector<double> cum(f.size());
    cum[0] = f[0] * r[0];
    for (std::size_t i = 1; i < f.size(); ++i)
        cum[i] = cum[i - 1] + 0.5 * (f[i] + f[i - 1]) * (r[i] - r[i - 1]);

    double outer = 0.0, rhs_int = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i) {
        const double dr = r[i] - r[i - 1];
        const auto head = std::pow(cum[i - 1], q) * std::pow(r[i - 1], q / p - q - 1.0);
        const auto tail = std::pow(cum[i], q) * std::pow(r[i], q / p - q - 1.0);
        outer += 0.5 * (head + tail) * dr;
        rhs_int += 0.5 * (std::pow(f[i - 1], p) + std::pow(f[i], p)) * dr;
    }
    const double lhs = std::pow(outer, p / q);
    const double rhs = bliss_constant(p, q) * rhs_int;
    return make_report("bliss", lhs, rhs, bliss_constant(p, q), "paper-sharp", "lhs/rhs", 1e-4,
                       {{"p", fmt(p)}, {"q", fmt(q)}, {"samples", std::to_string(r.size())}});
}

namespace {

// memoized int_0^s f dr for the adaptive Bliss route
class CumulativeFromZero {
  public:
    explicit CumulativeFromZero(std::function<double(double)> f) : f_(std::move(f)) {
        cache_[0.0] = 0.0;
    }
    double operator()(double s) {
        auto it = cache_.upper_bound(s);
        --it; // largest anchor <= s; 0 is always present
        const double value =
            it->second + adaptive_simpson(f_, it->first, s, 1e-13 * (1.0 + std::abs(it->second)));
        cache_[s] = value;
        return value;
    }

  private:
    std::function<double(double)> f_;
    std::map<double, double> cache_;
};

} // namespace

InequalityReport check_bliss_adaptive(const std::function<double(double)>& f, double p, double q) {
    if (!(p > 1.0) || !(q > p))
        throw std::invalid_argument("check_bliss_adaptive: requires q > p > 1");
    CumulativeFromZero cum(f);
    // both integrals in the log variable u = ln r
    const double u_lo = -30.0, u_hi = 25.0;
    const double outer = adaptive_simpson(
        [&](double u) {
            const double s = std::exp(u);
            const double big_f = cum(s);
            return std::pow(big_f, q) * std::exp(u * (q / p - q));
        },
        u_lo, u_hi, 1e-12);
    const double rhs_int = adaptive_simpson(
        [&](double u) {
            const double r = std::exp(u);
            return std::pow(std::max(f(r), 0.0), p) * r;
        },
        u_lo, u_hi, 1e-12);
    const double lhs = std::pow(outer, p / q);
    const double rhs = bliss_constant(p, q) * rhs_int;
    return make_report("bliss-adaptive", lhs, rhs, bliss_constant(p, q), "paper-sharp", "lhs/rhs",
                       1e-6, {{"p", fmt(p)}, {"q", fmt(q)}, {"quadrature", "adaptive-simpson"}});
}

// ---- Sobolev type and Hardy --------------------------------------------------

InequalityReport check_sobolev_type(const Field& f, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("check_sobolev_type: requires p > 1");
    const double q_dim = f.model->homogeneous_dimension();
    DerivInfo dinfo;
    const Field ef = euler_apply(f, DerivativeScheme::automatic, &dinfo);
    const double lhs = integral_p(f, p);
    const double rhs_raw = integral_p(ef, p);
    const double c = std::pow(p / q_dim, p);

    const Field fc = coarsen(f);
    const double err = rel_diff(lhs, integral_p(fc, p)) +
                       rel_diff(rhs_raw, integral_p(euler_apply(fc), p));
    auto meta = base_metadata(f);
    meta["p"] = fmt(p);
    meta["derivative_scheme"] = dinfo.scheme_used;
    return make_report("sobolev-type", lhs, c * rhs_raw, c, "paper-sharp", "lhs/rhs", err,
                       std::move(meta));
}

InequalityReport check_hardy(const Field& f) {
    const double q_dim = f.model->homogeneous_dimension();
    if (!(q_dim > 2.0)) throw std::invalid_argument("check_hardy: requires Q > 2");
    DerivInfo dinfo;
    const Field rf = radial_derivative_apply(f, DerivativeScheme::automatic, &dinfo);
    const auto inv_r2 = [](double r) { return 1.0 / (r * r); };
    const double lhs = integral_p(f, 2.0, inv_r2);
    const double rhs_raw = integral_p(rf, 2.0);
    const double c = std::pow(2.0 / (q_dim - 2.0), 2.0);

    const Field fc = coarsen(f);
    const double err = rel_diff(lhs, integral_p(fc, 2.0, inv_r2)) +
                       rel_diff(rhs_raw, integral_p(radial_derivative_apply(fc), 2.0));
    auto meta = base_metadata(f);
    meta["derivative_scheme"] = dinfo.scheme_used;
    return make_report("hardy", lhs, c * rhs_raw, c, "paper-sharp", "lhs/rhs", err, std::move(meta));
}

// ---- Gagliardo-Nirenberg -------------------------------------------------

GnResult check_gn(const Field& f, double p, double q, const TimeGrid& times) {
    if (!(p >= 1.0) || !(q > p)) throw std::invalid_argument("check_gn: requires 1 <= p < q");
    const double alpha = p / (p - q);
    GnResult res;
    const LineField g = to_line(f);
    res.lq_norm = line_lp_norm(g, q);
    res.lp_derivative_norm = line_lp_norm(line_derivative(g), p);
    const BesovResult bes = besov_norm(f, alpha, times);
    res.besov = bes.value;

    const double rhs_free =
        std::pow(res.lp_derivative_norm, p / q) * std::pow(res.besov, 1.0 - p / q);
    res.empirical_constant = rhs_free > 0.0 ? res.lq_norm / rhs_free : 0.0;

    auto meta = base_metadata(f);
    meta["p"] = fmt(p);
    meta["q"] = fmt(q);
    meta["alpha"] = fmt(alpha);
    meta["besov_argmax_t"] = fmt(bes.argmax_t);
    meta["besov_endpoint"] = bes.endpoint ? "true" : "false";
    if (bes.endpoint) meta["note"] = "besov sup attained at a time-grid endpoint; widen the grid";

    InequalityReport rep;
    rep.name = "gagliardo-nirenberg";
    rep.lhs = res.lq_norm;
    rep.rhs = rhs_free;
    rep.constant_used = res.empirical_constant;
    rep.constant_provenance = "empirical";
    rep.orientation = "lhs/rhs";
    rep.ratio = res.empirical_constant;
    rep.err_estimate = 0.0;
    rep.status = (rep.lhs < 1e-14 && rep.rhs < 1e-14) ? IneqStatus::degenerate : IneqStatus::holds;
    rep.metadata = std::move(meta);
    res.report = std::move(rep);
    return res;
}

// ---- corollaries ---------------------------------------------------------

namespace {

InequalityReport empirical_report(std::string name, double lhs, double rhs_free, double err,
                                  std::map<std::string, std::string> meta) {
    InequalityReport rep;
    rep.name = std::move(name);
    rep.lhs = lhs;
    rep.rhs = rhs_free;
    rep.orientation = "lhs/rhs";
    rep.constant_provenance = "empirical";
    rep.err_estimate = err;
    if (std::abs(lhs) < 1e-14 && std::abs(rhs_free) < 1e-14) {
        rep.status = IneqStatus::degenerate;
        rep.ratio = 0.0;
    } else {
        rep.ratio = rhs_free > 0.0 ? lhs / rhs_free : std::numeric_limits<double>::infinity();
        rep.constant_used = rep.ratio;
        rep.status = IneqStatus::holds;
    }
    rep.metadata = std::move(meta);
    return rep;
}

// per-column radial L^2(R+; r^{Q-1} dr) norm of h, optionally weighted
double col_radial_l2(const Field& h, std::size_t k, const RadialWeight& w = {}) {
    const double q = h.model->homogeneous_dimension();
    const double step = h.grid.step();
    double acc = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        const double s = h.grid.s(static_cast<int>(i));
        const double weight = w ? w(std::exp(s)) : 1.0;
        acc += ((i == 0 || i + 1 == h.rows()) ? 0.5 : 1.0) * weight * std::norm(h.at(i, k)) *
               std::exp(q * s);
    }
    return std::sqrt(acc * step);
}

double sup_col_radial_l2(const Field& h, const RadialWeight& w = {}) {
    double best = 0.0;
    for (std::size_t k = 0; k < h.cols(); ++k) best = std::max(best, col_radial_l2(h, k, w));
    return best;
}

void require_support_within(const Field& f, double s_lo, double s_hi, const std::string& who) {
    const double m = f.max_abs();
    if (m == 0.0) return;
    for (std::size_t i = 0; i < f.rows(); ++i) {
        const double s = f.grid.s(static_cast<int>(i));
        if (s >= s_lo && s <= s_hi) continue;
        for (std::size_t k = 0; k < f.cols(); ++k)
            if (std::abs(f.at(i, k)) > 1e-12 * m)
                throw std::invalid_argument(who + ": field support violates the stated hypothesis");
    }
}

double bracket_or_zero(double value, std::map<std::string, std::string>& meta) {
    if (value < 0.0) {
        meta["bracket_clamped"] = fmt(value);
        return 0.0;
    }
    return value;
}

} // namespace

const std::vector<std::string>& corollary_names() {
    static const std::vector<std::string> names = {
        "sobolev-gn-sup",        "sobolev-gn-mean",        "sobolev-gn-sup-compact",
        "sobolev-gn-mean-compact", "lq-gn-sup",            "lq-gn-mean",
        "euler-remainder-sup",   "euler-remainder-mean",   "euler-remainder-delta",
        "radial-remainder-sup",  "radial-remainder-mean",  "radial-remainder-delta",
        "annulus-log-euler",     "annulus-log-radial",     "weighted-mean-lq",
    };
    return names;
}

InequalityReport check_corollary(const std::string& name, const Field& f,
                                 const CorollaryParams& prm) {
    const double q_dim = f.model->homogeneous_dimension();
    auto meta = base_metadata(f);

    // -- line-side family (functions on R x wp) --
    if (name.rfind("sobolev-gn", 0) == 0 || name.rfind("lq-gn", 0) == 0) {
        const LineField g = to_line(f);
        const LineField dg = line_derivative(g);
        const double h = g.grid.step();

        if (name.rfind("sobolev-gn", 0) == 0) {
            const double p = prm.p;
            if (!(p >= 1.0) || !(p <= q_dim - 1.0))
                throw std::invalid_argument(name + ": requires 1 <= p <= Q-1");
            const double p_star = q_dim * p / (q_dim - p);
            meta["p"] = fmt(p);
            meta["p_star"] = fmt(p_star);
            const double deriv = line_lp_norm(dg, p);
            if (name == "sobolev-gn-sup") {
                const double lhs = line_lp_norm(g, p_star);
                const double rhs = std::pow(deriv, 1.0 / q_dim) *
                                   std::pow(line_sup_col_lp_norm(g, p), (q_dim - 1.0) / q_dim);
                return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
            }
            if (name == "sobolev-gn-mean") {
                const auto gm = line_sphere_mean_abs(g);
                const double lhs = vector_lp_ds(gm, p_star, h);
                const double rhs = std::pow(deriv, 1.0 / q_dim) *
                                   std::pow(line_lp_norm(g, p), (q_dim - 1.0) / q_dim);
                return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
            }
            const double lambda = prm.support_halfwidth;
            if (!(lambda > 0.0)) throw std::invalid_argument(name + ": requires a support half-width");
            require_support_within(f, -lambda, lambda, name);
            meta["lambda"] = fmt(lambda);
            if (name == "sobolev-gn-sup-compact") {
                const double lhs = line_lp_norm(g, p_star);
                const double rhs = std::pow(lambda, (q_dim - 1.0) / (q_dim * q_dim)) *
                                   std::pow(deriv, 1.0 / q_dim) *
                                   std::pow(line_sup_col_lp_norm(g, p_star), (q_dim - 1.0) / q_dim);
                return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
            }
            if (name == "sobolev-gn-mean-compact") {
                const auto gm = line_sphere_mean_abs(g);
                const double lhs = vector_lp_ds(gm, p_star, h);
                const double rhs = std::pow(lambda, (q_dim - 1.0) / q_dim) * deriv;
                return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
            }
        } else {
            const double p = prm.p, q = prm.q;
            if (!(p >= 1.0) || !(q > p)) throw std::invalid_argument(name + ": requires 1 <= p < q");
            if (!(q / p - 1.0 > 0.0)) throw std::invalid_argument(name + ": requires q/p > 1");
            meta["p"] = fmt(p);
            meta["q"] = fmt(q);
            const double deriv = line_lp_norm(dg, p);
            const double q_over_p_minus_1 = q / p - 1.0;
            if (name == "lq-gn-sup") {
                const double lhs = line_lp_norm(g, q);
                const double rhs =
                    std::pow(deriv, p / q) *
                    std::pow(line_sup_col_lp_norm(g, q_over_p_minus_1), 1.0 - p / q);
                return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
            }
            if (name == "lq-gn-mean") {
                const auto gm = line_sphere_mean_abs(g);
                const double lhs = vector_lp_ds(gm, q, h);
                const double rhs = std::pow(deriv, p / q) *
                                   std::pow(line_lp_norm(g, q_over_p_minus_1), 1.0 - p / q);
                return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
            }
        }
    }

    // -- G-side families --
    const double two_star = 2.0 * q_dim / (q_dim - 2.0);

    if (name.rfind("euler-remainder", 0) == 0) {
        if (!(q_dim >= 3.0)) throw std::invalid_argument(name + ": requires Q >= 3");
        const Field eh = euler_apply(f);
        const double bracket_raw = integral_p(eh, 2.0) - (q_dim * q_dim / 4.0) * integral_p(f, 2.0);
        const double bracket = bracket_or_zero(bracket_raw, meta);
        const auto weight_r = [two_star](double r) { return std::pow(r, two_star); };
        if (name == "euler-remainder-sup") {
            const double lhs = std::pow(lp_norm(f, two_star, weight_r), 2.0);
            const double rhs = std::pow(bracket, 1.0 / q_dim) *
                               std::pow(sup_col_radial_l2(f), 2.0 * (1.0 - 1.0 / q_dim));
            return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
        }
        if (name == "euler-remainder-mean") {
            const Field g = sphere_mean(f);
            const double lhs = std::pow(lp_norm(g, two_star, weight_r), 2.0);
            const double rhs = std::pow(bracket, 1.0 / q_dim) *
                               std::pow(lp_norm(f, 2.0), 2.0 * (1.0 - 1.0 / q_dim));
            return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
        }
        if (name == "euler-remainder-delta") {
            const double delta = prm.delta;
            if (!(delta >= 0.0) || !(delta < q_dim * q_dim / 4.0))
                throw std::invalid_argument(name + ": requires 0 <= delta < Q^2/4");
            meta["delta"] = fmt(delta);
            const double lhs = std::pow(lp_norm(f, two_star, weight_r), 2.0);
            const double bracket_delta =
                bracket_or_zero(integral_p(eh, 2.0) - delta * integral_p(f, 2.0), meta);
            const double rhs =
                std::pow(q_dim * q_dim / 4.0 - delta, -(q_dim - 1.0) / q_dim) * bracket_delta;
            return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
        }
    }

    if (name.rfind("radial-remainder", 0) == 0) {
        if (!(q_dim >= 3.0)) throw std::invalid_argument(name + ": requires Q >= 3");
        // hypothesis: compactly supported away from the origin
        const double m = f.max_abs();
        if (m > 0.0)
            for (std::size_t k = 0; k < f.cols(); ++k)
                if (std::abs(f.at(0, k)) > 1e-10 * m || std::abs(f.at(1, k)) > 1e-10 * m)
                    throw std::invalid_argument(name + ": field must vanish near the origin");
        const Field rf = radial_derivative_apply(f);
        const auto inv_r = [](double r) { return 1.0 / (r * r); };
        const double f_over_x_sq = integral_p(f, 2.0, inv_r);
        const double c_q = (q_dim - 2.0) * (q_dim - 2.0) / 4.0;
        if (name == "radial-remainder-sup") {
            const double bracket =
                bracket_or_zero(integral_p(rf, 2.0) - c_q * f_over_x_sq, meta);
            const double lhs = std::pow(lp_norm(f, two_star), 2.0);
            const double sup_term = sup_col_radial_l2(f, [](double r) { return 1.0 / (r * r); });
            const double rhs = std::pow(bracket, 1.0 / q_dim) *
                               std::pow(sup_term * sup_term, 1.0 - 1.0 / q_dim);
            return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
        }
        if (name == "radial-remainder-mean") {
            const double bracket =
                bracket_or_zero(integral_p(rf, 2.0) - c_q * f_over_x_sq, meta);
            const Field g = sphere_mean(f);
            const double lhs = std::pow(lp_norm(g, two_star), 2.0);
            const double rhs = std::pow(bracket, 1.0 / q_dim) *
                               std::pow(f_over_x_sq, (q_dim - 1.0) / q_dim);
            return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
        }
        if (name == "radial-remainder-delta") {
            const double delta = prm.delta;
            if (!(delta >= 0.0) || !(delta < c_q))
                throw std::invalid_argument(name + ": requires 0 <= delta < (Q-2)^2/4");
            meta["delta"] = fmt(delta);
            const Field g = sphere_mean(f);
            const double lhs = std::pow(lp_norm(g, two_star), 2.0);
            const double bracket =
                bracket_or_zero(integral_p(rf, 2.0) - delta * f_over_x_sq, meta);
            const double rhs = std::pow(c_q - delta, -(q_dim - 1.0) / q_dim) * bracket;
            return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
        }
    }

    if (name == "annulus-log-euler" || name == "annulus-log-radial") {
        const double r_annulus = prm.annulus_R;
        if (!(r_annulus > 1.0)) throw std::invalid_argument(name + ": requires annulus R > 1");
        require_support_within(f, -std::log(r_annulus), std::log(r_annulus), name);
        meta["annulus_R"] = fmt(r_annulus);
        const double log_factor =
            std::pow(std::log(r_annulus), 2.0 * (q_dim - 1.0) / q_dim);
        if (name == "annulus-log-euler") {
            const Field eh = euler_apply(f);
            const Field g = sphere_mean(f);
            const double bracket = bracket_or_zero(
                integral_p(eh, 2.0) - (q_dim * q_dim / 4.0) * integral_p(f, 2.0), meta);
            const double lhs = std::pow(
                lp_norm(g, two_star, [two_star](double r) { return std::pow(r, two_star); }), 2.0);
            return empirical_report(name, lhs, log_factor * bracket, 0.0, std::move(meta));
        }
        const Field rf = radial_derivative_apply(f);
        const Field g = sphere_mean(f);
        const double c_q = (q_dim - 2.0) * (q_dim - 2.0) / 4.0;
        const double bracket = bracket_or_zero(
            integral_p(rf, 2.0) -
                c_q * integral_p(f, 2.0, [](double r) { return 1.0 / (r * r); }),
            meta);
        const double lhs = std::pow(lp_norm(g, two_star), 2.0);
        return empirical_report(name, lhs, log_factor * bracket, 0.0, std::move(meta));
    }

    if (name == "weighted-mean-lq") {
        const double q = prm.q;
        if (!(q > 2.0)) throw std::invalid_argument(name + ": requires q > 2");
        if (std::abs(q - 6.0) < 1e-9)
            throw std::invalid_argument(
                name + ": q = 6 leaves the radial weight exponent unspecified; pick q != 6");
        meta["q"] = fmt(q);
        const double w_exp = q_dim * (6.0 - q) / (2.0 * (q - 2.0));
        const Field eh = euler_apply(f);
        const double bracket = bracket_or_zero(
            integral_p(eh, 2.0) - (q_dim * q_dim / 4.0) * integral_p(f, 2.0), meta);
        // lhs: 1-D dr integral of the sphere mean with weight r^{Qq/2-1}
        const Field g = sphere_mean(f);
        const double h = f.grid.step();
        double lhs = 0.0;
        for (std::size_t i = 0; i < g.rows(); ++i) {
            const double s = g.grid.s(static_cast<int>(i));
            lhs += ((i == 0 || i + 1 == g.rows()) ? 0.5 : 1.0) *
                   std::pow(std::abs(g.at(i, 0)), q) * std::exp(s * q_dim * q / 2.0);
        }
        lhs *= h;
        // int_G |f / |x|^{w_exp}|^{q/2-1} dx, evaluated directly
        double wint = 0.0;
        for (std::size_t k = 0; k < f.cols(); ++k) {
            double col = 0.0;
            for (std::size_t i = 0; i < f.rows(); ++i) {
                const double s = f.grid.s(static_cast<int>(i));
                col += ((i == 0 || i + 1 == f.rows()) ? 0.5 : 1.0) *
                       std::pow(std::abs(f.at(i, k)) * std::exp(-s * w_exp), q / 2.0 - 1.0) *
                       std::exp(q_dim * s);
            }
            wint += f.model->sphere()[k].weight * col * h;
        }
        const double rhs = bracket * bracket * wint * wint;
        return empirical_report(name, lhs, rhs, 0.0, std::move(meta));
    }

    throw std::invalid_argument("check_corollary: unknown name '" + name + "'");
}

WeightedDerivativeIdentity check_weighted_derivative_identity(const Field& h) {
    WeightedDerivativeIdentity out;
    const double q_dim = h.model->homogeneous_dimension();
    const Field rh = multiply_radial(h, [](double r) { return r; });
    out.weighted_derivative_sq = integral_p(radial_derivative_apply(rh), 2.0);
    out.euler_sq = integral_p(euler_apply(h), 2.0);
    out.mass_sq = integral_p(h, 2.0);
    const double predicted = out.euler_sq - (q_dim - 1.0) * out.mass_sq;
    const double scale = std::max({out.weighted_derivative_sq, out.euler_sq,
                                   (q_dim - 1.0) * out.mass_sq, 1e-300});
    out.residual_rel = std::abs(out.weighted_derivative_sq - predicted) / scale;
    return out;
}

// ---- Stubbe-type remainder inequality -------------------------------------

InequalityReport check_stubbe(const Field& f, double delta) {
    const double q_dim = f.model->homogeneous_dimension();
    if (!(q_dim > 2.0)) throw std::invalid_argument("check_stubbe: requires Q > 2");
    if (!(delta >= 0.0) || !(delta < q_dim * q_dim / 4.0))
        throw std::invalid_argument("check_stubbe: requires 0 <= delta < Q^2/4");
    const double two_star = 2.0 * q_dim / (q_dim - 2.0);

    DerivInfo dinfo;
    const Field ef = euler_apply(f, DerivativeScheme::automatic, &dinfo);
    const double euler_sq = integral_p(ef, 2.0);
    const double mass_sq = integral_p(f, 2.0);
    const double lhs = euler_sq - delta * mass_sq;

    const Field g = sphere_mean(f);
    const double s_q = sq_constant(q_dim, f.model->sphere_measure());
    const double scale = std::pow((q_dim * q_dim / 4.0 - delta) /
                                      ((q_dim - 2.0) * (q_dim - 2.0) / 4.0),
                                  (q_dim - 1.0) / q_dim);
    const double weighted = std::pow(
        lp_norm(g, two_star, [two_star](double r) { return std::pow(r, two_star); }), 2.0);
    const double rhs = scale * s_q * weighted;

    // error estimate from half resolution
    const Field fc = coarsen(f);
    const Field efc = euler_apply(fc);
    const Field gc = sphere_mean(fc);
    const double lhs_c = integral_p(efc, 2.0) - delta * integral_p(fc, 2.0);
    const double rhs_c =
        scale * s_q *
        std::pow(lp_norm(gc, two_star, [two_star](double r) { return std::pow(r, two_star); }),
                 2.0);
    const double err = rel_diff(lhs, lhs_c) + rel_diff(rhs, rhs_c);

    auto meta = base_metadata(f);
    meta["delta"] = fmt(delta);
    meta["S_Q"] = fmt(s_q);
    meta["derivative_scheme"] = dinfo.scheme_used;
    return make_report("stubbe", lhs, rhs, scale * s_q, "paper-sharp", "rhs/lhs", err,
                       std::move(meta));
}

Field stubbe_extremal_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                            double delta, double c2) {
    const double q_dim = model->homogeneous_dimension();
    if (!(q_dim > 2.0)) throw std::invalid_argument("stubbe_extremal_field: requires Q > 2");
    if (!(delta >= 0.0) || !(delta < q_dim * q_dim / 4.0))
        throw std::invalid_argument("stubbe_extremal_field: requires 0 <= delta < Q^2/4");
    if (!(c2 > 0.0)) throw std::invalid_argument("stubbe_extremal_field: c2 must be positive");
    const double beta = (q_dim - std::sqrt(q_dim * q_dim - 4.0 * delta)) / 2.0;
    const double a = q_dim - 2.0 * beta;
    const double alpha = 2.0 / (q_dim - 2.0);

    // H(u) = int_0^{1/u} (1 + c2 v^alpha)^{-Q/2} dv, tabulated in w = ln v
    const int n_tab = 1 << 17;
    const double w_lo = -40.0, w_hi = 55.0;
    const double hw = (w_hi - w_lo) / static_cast<double>(n_tab - 1);
    std::vector<double> integrand(static_cast<std::size_t>(n_tab));
    for (int i = 0; i < n_tab; ++i) {
        const double w = w_lo + hw * static_cast<double>(i);
        integrand[static_cast<std::size_t>(i)] =
            std::exp(w) * std::pow(1.0 + c2 * std::exp(alpha * w), -q_dim / 2.0);
    }
    const std::vector<double> cum = trapezoid_prefix(integrand, hw);
    const double head = std::exp(w_lo); // integrand ~ 1 below the table
    auto big_h = [&](double u) {
        const double w = -std::log(u); // ln(1/u)
        if (w <= w_lo) return head * std::exp(w - w_lo);
        if (w >= w_hi) return head + cum.back();
        const double x = (w - w_lo) / hw;
        const auto i0 = static_cast<std::size_t>(x);
        const double frac = x - static_cast<double>(i0);
        return head + cum[i0] * (1.0 - frac) + cum[std::min(i0 + 1, cum.size() - 1)] * frac;
    };

    return make_radial_field(std::move(model), grid, [&](double r) {
        return std::pow(r, -beta) * big_h(std::pow(r, a));
    });
}

// ---- sharpness probes ------------------------------------------------------

SharpnessResult probe_sharpness(const std::function<double(std::span<const double>)>& ratio_fn,
                                std::vector<double> lo, std::vector<double> hi, int budget,
                                std::uint64_t seed) {
    if (budget <= 0) throw std::invalid_argument("probe_sharpness: budget must be positive");
    if (lo.size() != hi.size() || lo.empty())
        throw std::invalid_argument("probe_sharpness: bad parameter box");
    if (lo.size() == 1) {
        auto r = golden_section_max(
            [&](double x) {
                const double v[1] = {x};
                return ratio_fn(std::span<const double>(v, 1));
            },
            lo[0], hi[0], budget);
        return SharpnessResult{r.best_value, r.best_point, r.evaluations};
    }
    Rng rng(seed);
    std::vector<double> start(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) start[i] = rng.uniform(lo[i], hi[i]);
    const double step = 0.25 * (hi[0] - lo[0]);
    auto clipped = [&, lo, hi](std::span<const double> x) {
        std::vector<double> c(x.begin(), x.end());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::clamp(c[i], lo[i], hi[i]);
        return ratio_fn(std::span<const double>(c.data(), c.size()));
    };
    auto r = nelder_mead_max(clipped, start, step, budget);
    return SharpnessResult{r.best_value, r.best_point, r.evaluations};
}

SharpnessResult probe_hardy_sharpness(std::shared_ptr<const GroupModel> model,
                                      const RadialGridSpec& grid, int budget, std::uint64_t seed) {
    const double q_dim = model->homogeneous_dimension();
    const double a = grid.s_min + 1.0, b = grid.s_max - 1.0, taper = 2.0;
    auto ratio_fn = [&](std::span<const double> prm) {
        const double eps = std::exp(prm[0]);
        Field f = make_radial_field(model, grid, [&](double r) {
            const double s = std::log(r);
            const double win = smooth_step((s - a) / taper) * smooth_step((b - s) / taper);
            return std::pow(r, -(q_dim - 2.0) / 2.0 + eps) * win;
        });
        return check_hardy(f).ratio;
    };
    auto res = probe_sharpness(ratio_fn, {std::log(1e-3)}, {0.0}, budget, seed);
    res.best_params[0] = std::exp(res.best_params[0]); // report eps itself
    return res;
}

SharpnessResult probe_stubbe_sharpness(std::shared_ptr<const GroupModel> model,
                                       const RadialGridSpec& grid, double delta, int budget,
                                       std::uint64_t seed) {
    auto ratio_fn = [&](std::span<const double> prm) {
        const double c2 = std::exp(prm[0]);
        Field f = stubbe_extremal_field(model, grid, delta, c2);
        if (f.max_abs() == 0.0)
            throw std::invalid_argument("probe_stubbe_sharpness: degenerate family member");
        return check_stubbe(f, delta).ratio;
    };
    auto res = probe_sharpness(ratio_fn, {-2.0}, {2.0}, budget, seed);
    res.best_params[0] = std::exp(res.best_params[0]);
    return res;
}

} // namespace homog
