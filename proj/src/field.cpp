#include "homog/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homog/fft.hpp"
#include "homog/quadrature.hpp"

namespace homog {

double Field::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double Field::boundary_decay() const {
    const double m = max_abs();
    if (m == 0.0) return 0.0;
    double b = 0.0;
    const std::size_t n = rows(), k = cols();
    for (std::size_t i : {std::size_t(0), std::size_t(1), n - 2, n - 1})
        for (std::size_t j = 0; j < k; ++j) b = std::max(b, std::abs(at(i, j)));
    return b / m;
}

bool Field::is_radial(double tol) const {
    const std::size_t n = rows(), k = cols();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 1; j < k; ++j)
            if (std::abs(at(i, j) - at(i, 0)) > tol) return false;
    return true;
}

Field make_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                 const std::function<cplx(double, std::size_t)>& fn) {
    grid.validate();
    Field f;
    f.model = std::move(model);
    f.grid = grid;
    f.values.resize(f.rows() * f.cols());
    for (std::size_t i = 0; i < f.rows(); ++i) {
        const double r = grid.r(static_cast<int>(i));
        for (std::size_t k = 0; k < f.cols(); ++k) {
            const cplx v = fn(r, k);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw NumericError("make_field: non-finite sample at r=" + std::to_string(r));
            f.at(i, k) = v;
        }
    }
    return f;
}

Field make_radial_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                        const std::function<double(double)>& fn) {
    return make_field(std::move(model), grid, [&fn](double r, std::size_t) { return cplx(fn(r), 0.0); });
}

Field zero_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid) {
    return make_field(std::move(model), grid, [](double, std::size_t) { return cplx(0.0, 0.0); });
}

namespace {

constexpr double kSpectralDecayLimit = 1e-10;

// d/ds of one column via FFT; data treated as one period of a decayed signal.
void spectral_derivative_column(std::vector<cplx>& col, double h) {
    const std::size_t n = col.size();
    fft(col);
    const auto tau = fft_freq(n, h);
    for (std::size_t j = 0; j < n; ++j) col[j] *= cplx(0.0, tau[j]);
    // The Nyquist mode of a real signal has no well-defined sign under d/ds;
    // zero it to keep derivatives of real fields real.
    if (n % 2 == 0) col[n / 2] = cplx(0.0, 0.0);
    ifft(col);
}

void central4_derivative_column(const std::vector<cplx>& col, std::vector<cplx>& out, double h) {
    const std::size_t n = col.size();
    auto get = [&](std::ptrdiff_t i) -> cplx {
        if (i < 0 || i >= static_cast<std::ptrdiff_t>(n)) return cplx(0.0, 0.0); // decayed outside
        return col[static_cast<std::size_t>(i)];
    };
    const double inv = 1.0 / (12.0 * h);
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
        out[static_cast<std::size_t>(i)] =
            (-get(i + 2) + 8.0 * get(i + 1) - 8.0 * get(i - 1) + get(i - 2)) * inv;
}

Field d_ds(const Field& f, DerivativeScheme scheme, DerivInfo* info) {
    const double decay = f.boundary_decay();
    DerivativeScheme used = scheme;
    if (scheme == DerivativeScheme::automatic)
        used = decay < kSpectralDecayLimit ? DerivativeScheme::spectral_fourier
                                           : DerivativeScheme::central_4th_order;
    else if (scheme == DerivativeScheme::spectral_fourier && decay >= kSpectralDecayLimit)
        throw TruncationError("euler_apply: spectral scheme requires boundary decay < 1e-10, got " +
                                  std::to_string(decay),
                              decay);
    if (info) {
        info->scheme_used =
            used == DerivativeScheme::spectral_fourier ? "spectral-fourier" : "central-4th-order";
        info->boundary_decay = decay;
    }

    Field out = f;
    const std::size_t n = f.rows(), k = f.cols();
    const double h = f.grid.step();
    std::vector<cplx> col(n), dcol(n);
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) col[i] = f.at(i, j);
        if (used == DerivativeScheme::spectral_fourier) {
            spectral_derivative_column(col, h);
            for (std::size_t i = 0; i < n; ++i) out.at(i, j) = col[i];
        } else {
            central4_derivative_column(col, dcol, h);
            for (std::size_t i = 0; i < n; ++i) out.at(i, j) = dcol[i];
        }
    }
    return out;
}

} // namespace

Field euler_apply(const Field& f, DerivativeScheme scheme, DerivInfo* info) {
    return d_ds(f, scheme, info);
}

Field radial_derivative_apply(const Field& f, DerivativeScheme scheme, DerivInfo* info) {
    Field out = d_ds(f, scheme, info);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        const double inv_r = std::exp(-out.grid.s(static_cast<int>(i)));
        for (std::size_t k = 0; k < out.cols(); ++k) out.at(i, k) *= inv_r;
    }
    return out;
}

Field euler_adjoint_apply(const Field& f, DerivativeScheme scheme, DerivInfo* info) {
    Field ef = d_ds(f, scheme, info);
    const double q = f.model->homogeneous_dimension();
    Field out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = -q * f.values[i] - ef.values[i];
    return out;
}

double lp_norm(const Field& f, double p, const RadialWeight& weight) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    const double q = f.model->homogeneous_dimension();
    const double h = f.grid.step();
    const std::size_t n = f.rows();
    double acc = 0.0;
    for (std::size_t k = 0; k < f.cols(); ++k) {
        double col = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = f.grid.s(static_cast<int>(i));
            const double w = weight ? weight(std::exp(s)) : 1.0;
            const double v = w * std::pow(std::abs(f.at(i, k)), p) * std::exp(q * s);
            if (std::isnan(v)) throw NumericError("lp_norm: NaN integrand at s=" + std::to_string(s));
            col += ((i == 0 || i + 1 == n) ? 0.5 : 1.0) * v;
        }
        acc += f.model->sphere()[k].weight * col * h;
    }
    return std::pow(std::max(acc, 0.0), 1.0 / p);
}

cplx inner_product(const Field& f, const Field& g) {
    if (f.values.size() != g.values.size())
        throw std::invalid_argument("inner_product: shape mismatch");
    const double q = f.model->homogeneous_dimension();
    const double h = f.grid.step();
    cplx acc(0.0, 0.0);
    const std::size_t n = f.rows();
    for (std::size_t k = 0; k < f.cols(); ++k) {
        cplx col(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double wq = std::exp(q * f.grid.s(static_cast<int>(i)));
            const double trap = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
            col += trap * wq * f.at(i, k) * std::conj(g.at(i, k));
        }
        acc += f.model->sphere()[k].weight * col * h;
    }
    return acc;
}

Field radialize(const Field& f, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("radialize: p must be >= 1");
    Field out = f;
    const double inv_wp = 1.0 / f.model->sphere_measure();
    for (std::size_t i = 0; i < f.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < f.cols(); ++k)
            acc += f.model->sphere()[k].weight * std::pow(std::abs(f.at(i, k)), p);
        const double v = std::pow(acc * inv_wp, 1.0 / p);
        for (std::size_t k = 0; k < f.cols(); ++k) out.at(i, k) = cplx(v, 0.0);
    }
    return out;
}

Field sphere_mean(const Field& f) {
    Field out = f;
    const double inv_wp = 1.0 / f.model->sphere_measure();
    for (std::size_t i = 0; i < f.rows(); ++i) {
        cplx acc(0.0, 0.0);
        for (std::size_t k = 0; k < f.cols(); ++k)
            acc += f.model->sphere()[k].weight * f.at(i, k);
        const cplx v = acc * inv_wp;
        for (std::size_t k = 0; k < f.cols(); ++k) out.at(i, k) = v;
    }
    return out;
}

Field scale(const Field& f, cplx c) {
    Field out = f;
    for (auto& v : out.values) v *= c;
    return out;
}

Field add(const Field& f, const Field& g) {
    if (f.values.size() != g.values.size()) throw std::invalid_argument("add: shape mismatch");
    Field out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += g.values[i];
    return out;
}

Field subtract(const Field& f, const Field& g) {
    if (f.values.size() != g.values.size()) throw std::invalid_argument("subtract: shape mismatch");
    Field out = f;
    for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= g.values[i];
    return out;
}

Field multiply_radial(const Field& f, const std::function<double(double)>& w) {
    Field out = f;
    for (std::size_t i = 0; i < out.rows(); ++i) {
        const double c = w(out.grid.r(static_cast<int>(i)));
        for (std::size_t k = 0; k < out.cols(); ++k) out.at(i, k) *= c;
    }
    return out;
}

double l2_relative_error(const Field& f, const Field& g) {
    const double num = lp_norm(subtract(f, g), 2.0);
    const double den = lp_norm(g, 2.0);
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / den;
}

} // namespace homog
