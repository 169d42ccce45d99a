#include "homog/group_model.hpp"

#include <algorithm>
#include <limits>

#include "homog/quadrature.hpp"
#include "homog/rng.hpp"

namespace homog {

double QuasiNormSpec::evaluate(std::span<const double> x) const {
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("quasi_norm: non-finite coordinate");
    switch (kind) {
    case NormKind::euclidean_p: {
        if (std::isinf(p)) {
            double m = 0.0;
            for (double v : x) m = std::max(m, std::abs(v));
            return m;
        }
        if (p < 1.0) throw std::invalid_argument("quasi_norm: euclidean exponent must be >= 1");
        if (p == 2.0) {
            double acc = 0.0;
            for (double v : x) acc += v * v;
            return std::sqrt(acc);
        }
        // scale out the max to avoid overflow for large exponents
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        if (m == 0.0) return 0.0;
        double acc = 0.0;
        for (double v : x) acc += std::pow(std::abs(v) / m, p);
        return m * std::pow(acc, 1.0 / p);
    }
    case NormKind::anisotropic_power: {
        if (x.size() != weights.size())
            throw std::invalid_argument("quasi_norm: dimension mismatch with dilation weights");
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            acc += std::pow(std::abs(x[i]), power / weights[i]);
        return std::pow(acc, 1.0 / power);
    }
    case NormKind::custom: {
        if (!fn) throw std::invalid_argument("quasi_norm: custom norm callback missing");
        const double v = fn(x);
        if (!std::isfinite(v) || v < 0.0)
            throw NumericError("quasi_norm: custom norm returned an invalid value");
        return v;
    }
    }
    throw std::logic_error("quasi_norm: unreachable");
}

namespace {

double euclidean_dir_norm(const QuasiNormSpec& norm, std::span<const double> omega) {
    return norm.evaluate(omega);
}

} // namespace

std::vector<SphereNode> build_sphere_quadrature(const QuasiNormSpec& norm, int n, int resolution) {
    if (!norm.isotropic())
        throw std::invalid_argument(
            "build_sphere_quadrature: anisotropic dilations are unsupported; use a radial-only "
            "model with a user-supplied sphere measure");
    if (n < 1 || n > 3)
        throw std::invalid_argument("build_sphere_quadrature: ambient dimension must be 1, 2 or 3");
    if (resolution < 1) throw std::invalid_argument("build_sphere_quadrature: resolution must be >= 1");

    const double pi = 3.14159265358979323846;
    std::vector<SphereNode> nodes;

    if (n == 1) {
        // S^0 with counting measure; |omega| = 1 for every norm of a scalar.
        for (double sgn : {1.0, -1.0}) {
            SphereNode node;
            node.coords = {sgn};
            const double q = euclidean_dir_norm(norm, node.coords);
            node.coords[0] /= q;
            node.weight = 1.0 / q; // |omega|^{-1} with unit counting weight
            nodes.push_back(std::move(node));
        }
        return nodes;
    }

    if (n == 2) {
        // Midpoint-offset angles avoid placing nodes on the kinks of
        // non-smooth quasi-norms (e.g. the max norm).
        const int m = resolution;
        const double w_eu = 2.0 * pi / static_cast<double>(m);
        for (int i = 0; i < m; ++i) {
            const double theta = 2.0 * pi * (static_cast<double>(i) + 0.5) / static_cast<double>(m);
            std::vector<double> omega = {std::cos(theta), std::sin(theta)};
            const double q = euclidean_dir_norm(norm, omega);
            SphereNode node;
            node.coords = {omega[0] / q, omega[1] / q};
            node.weight = w_eu / (q * q);
            nodes.push_back(std::move(node));
        }
        return nodes;
    }

    // n == 3: product rule, Gauss-Legendre in cos(theta) x midpoint in phi.
    const GaussLegendreRule gl = gauss_legendre(resolution);
    const int m_phi = 2 * resolution;
    const double w_phi = 2.0 * pi / static_cast<double>(m_phi);
    for (int k = 0; k < resolution; ++k) {
        const double z = gl.nodes[static_cast<std::size_t>(k)];
        const double sin_theta = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < m_phi; ++j) {
            const double phi = 2.0 * pi * (static_cast<double>(j) + 0.5) / static_cast<double>(m_phi);
            std::vector<double> omega = {sin_theta * std::cos(phi), sin_theta * std::sin(phi), z};
            const double q = euclidean_dir_norm(norm, omega);
            SphereNode node;
            node.coords = {omega[0] / q, omega[1] / q, omega[2] / q};
            node.weight = gl.weights[static_cast<std::size_t>(k)] * w_phi / (q * q * q);
            nodes.push_back(std::move(node));
        }
    }
    return nodes;
}

GroupModel GroupModel::euclidean(int n, double p_exp, int resolution) {
    GroupModel m;
    m.ambient_dim_ = n;
    m.q_ = static_cast<double>(n);
    m.norm_ = QuasiNormSpec::euclidean(p_exp);
    m.sphere_ = build_sphere_quadrature(m.norm_, n, resolution);
    for (const auto& node : m.sphere_) m.sphere_measure_ += node.weight;
    return m;
}

GroupModel GroupModel::custom_isotropic(int n, std::function<double(std::span<const double>)> fn,
                                        int resolution) {
    GroupModel m;
    m.ambient_dim_ = n;
    m.q_ = static_cast<double>(n);
    m.norm_ = QuasiNormSpec::custom_isotropic(std::move(fn));
    m.sphere_ = build_sphere_quadrature(m.norm_, n, resolution);
    for (const auto& node : m.sphere_) m.sphere_measure_ += node.weight;
    return m;
}

GroupModel GroupModel::abstract_radial(double q, double sphere_measure) {
    if (!(q >= 1.0)) throw std::invalid_argument("GroupModel: Q must be >= 1");
    if (!(sphere_measure > 0.0)) throw std::invalid_argument("GroupModel: |wp| must be positive");
    GroupModel m;
    m.ambient_dim_ = 0;
    m.q_ = q;
    m.sphere_.push_back(SphereNode{{}, sphere_measure});
    m.sphere_measure_ = sphere_measure;
    m.radial_only_ = true;
    return m;
}

GroupModel GroupModel::anisotropic_radial(std::vector<double> nu, double two_n,
                                          double sphere_measure) {
    double q = 0.0;
    for (double v : nu) q += v;
    GroupModel m;
    m.ambient_dim_ = static_cast<int>(nu.size());
    m.q_ = q;
    m.norm_ = QuasiNormSpec::anisotropic(std::move(nu), two_n);
    if (!(sphere_measure > 0.0)) throw std::invalid_argument("GroupModel: |wp| must be positive");
    m.sphere_.push_back(SphereNode{{}, sphere_measure});
    m.sphere_measure_ = sphere_measure;
    m.radial_only_ = true;
    return m;
}

GroupModel GroupModel::from_sphere_table(int n, double q, QuasiNormSpec norm,
                                         std::vector<SphereNode> sphere) {
    if (sphere.empty()) throw std::invalid_argument("GroupModel: empty sphere table");
    GroupModel m;
    m.ambient_dim_ = n;
    m.q_ = q;
    m.norm_ = std::move(norm);
    for (auto& node : sphere) {
        if (node.weight <= 0.0) throw std::invalid_argument("GroupModel: sphere weights must be positive");
        if (static_cast<int>(node.coords.size()) != n)
            throw std::invalid_argument("GroupModel: sphere node dimension mismatch");
        const double nv = m.norm_.evaluate(node.coords);
        if (std::abs(nv - 1.0) > 1e-12)
            throw std::invalid_argument("GroupModel: sphere node is not on the unit quasi-sphere");
        m.sphere_measure_ += node.weight;
    }
    m.sphere_ = std::move(sphere);
    return m;
}

double GroupModel::quasi_norm(std::span<const double> x) const {
    if (radial_only_ && norm_.kind != NormKind::anisotropic_power)
        throw std::invalid_argument("quasi_norm: abstract radial model has no ambient coordinates");
    if (static_cast<int>(x.size()) != ambient_dim_)
        throw std::invalid_argument("quasi_norm: coordinate dimension mismatch");
    return norm_.evaluate(x);
}

double polar_integrate(const GroupModel& model, const RadialGridSpec& grid,
                       const std::function<double(double, std::size_t)>& integrand) {
    grid.validate();
    const double q = model.homogeneous_dimension();
    const std::size_t n = static_cast<std::size_t>(grid.n);
    std::vector<double> samples(n);
    double acc = 0.0;
    for (std::size_t k = 0; k < model.node_count(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            const double s = grid.s(static_cast<int>(i));
            const double v = integrand(std::exp(s), k);
            if (std::isnan(v))
                throw NumericError("polar_integrate: NaN at s=" + std::to_string(s) +
                                   ", node=" + std::to_string(k));
            samples[i] = v * std::exp(s * q);
        }
        acc += model.sphere()[k].weight * trapezoid(samples, grid.step());
    }
    return acc;
}

double ball_volume(const GroupModel& model, double radius) {
    if (radius < 0.0) throw std::invalid_argument("ball_volume: negative radius");
    return std::pow(radius, model.homogeneous_dimension()) * model.sphere_measure() /
           model.homogeneous_dimension();
}

double monte_carlo_sphere_measure(const QuasiNormSpec& norm, int n, double q, std::int64_t samples,
                                  std::uint64_t seed) {
    if (samples <= 0) throw std::invalid_argument("monte_carlo_sphere_measure: samples must be positive");
    if (n < 1) throw std::invalid_argument("monte_carlo_sphere_measure: bad dimension");
    // Bounding box containing the unit quasi-ball: |x_i| <= 1 on each axis
    // holds for euclidean-p and anisotropic power norms since each single
    // coordinate already contributes |x_i|^{...} <= 1. Custom norms get a
    // scan over random directions to bound the ball.
    double box = 1.0;
    if (norm.kind == NormKind::custom) {
        Rng dir_rng(seed ^ 0x9e3779b97f4a7c15ULL);
        double min_dir_norm = std::numeric_limits<double>::infinity();
        std::vector<double> u(static_cast<std::size_t>(n));
        for (int trial = 0; trial < 4096; ++trial) {
            double norm2 = 0.0;
            for (auto& v : u) {
                v = dir_rng.normal();
                norm2 += v * v;
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (auto& v : u) v *= inv;
            min_dir_norm = std::min(min_dir_norm, norm.evaluate(u));
        }
        if (!(min_dir_norm > 0.0))
            throw NumericError("monte_carlo_sphere_measure: degenerate custom norm");
        box = 1.0 / min_dir_norm;
    }
    Rng rng(seed);
    std::vector<double> x(static_cast<std::size_t>(n));
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < samples; ++i) {
        for (auto& v : x) v = rng.uniform(-box, box);
        if (norm.evaluate(x) <= 1.0) ++hits;
    }
    const double volume = std::pow(2.0 * box, n) * static_cast<double>(hits) /
                          static_cast<double>(samples);
    return q * volume;
}

} // namespace homog
