#include "homog/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "homog/fft.hpp"

namespace homog {

namespace {
const double kPi = 3.14159265358979323846;

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}
} // namespace

double LineField::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double LineField::l2_norm() const {
    const double h = grid.step();
    double acc = 0.0;
    for (std::size_t k = 0; k < cols(); ++k) {
        double col = 0.0;
        for (std::size_t i = 0; i < rows(); ++i) {
            const double trap = (i == 0 || i + 1 == rows()) ? 0.5 : 1.0;
            col += trap * std::norm(at(i, k));
        }
        acc += model->sphere()[k].weight * col * h;
    }
    return std::sqrt(acc);
}

LineField to_line(const Field& f) {
    LineField g;
    g.model = f.model;
    g.grid = f.grid;
    g.values.resize(f.values.size());
    const double q = f.model->homogeneous_dimension();
    for (std::size_t i = 0; i < f.rows(); ++i) {
        const double w = std::exp(0.5 * q * f.grid.s(static_cast<int>(i)));
        for (std::size_t k = 0; k < f.cols(); ++k) g.at(i, k) = w * f.at(i, k);
    }
    return g;
}

Field from_line(const LineField& g) {
    Field f;
    f.model = g.model;
    f.grid = g.grid;
    f.values.resize(g.values.size());
    const double q = g.model->homogeneous_dimension();
    for (std::size_t i = 0; i < g.rows(); ++i) {
        const double w = std::exp(-0.5 * q * g.grid.s(static_cast<int>(i)));
        for (std::size_t k = 0; k < g.cols(); ++k) f.at(i, k) = w * g.at(i, k);
    }
    return f;
}

Field dilate(const Field& f, double t, DilateInfo* info) {
    LineField g = to_line(f);
    const double h = g.grid.step();
    const double steps = t / h;
    const double rounded = std::round(steps);
    LineField out = g;
    if (std::abs(steps - rounded) < 1e-9) {
        // exact index shift with zero fill: new(s) = old(s + t)
        const auto m = static_cast<std::ptrdiff_t>(rounded);
        const auto n = static_cast<std::ptrdiff_t>(g.rows());
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const std::ptrdiff_t src = i + m;
            for (std::size_t k = 0; k < g.cols(); ++k)
                out.at(static_cast<std::size_t>(i), k) =
                    (src >= 0 && src < n) ? g.at(static_cast<std::size_t>(src), k) : cplx(0.0, 0.0);
        }
        if (info) *info = DilateInfo{true, "none"};
    } else {
        // fractional shift via the Fourier phase e^{i tau t}
        const std::size_t n = g.rows();
        const auto tau = fft_freq(n, h);
        std::vector<cplx> col(n);
        for (std::size_t k = 0; k < g.cols(); ++k) {
            for (std::size_t i = 0; i < n; ++i) col[i] = g.at(i, k);
            fft(col);
            for (std::size_t j = 0; j < n; ++j)
                col[j] *= std::exp(cplx(0.0, tau[j] * t));
            ifft(col);
            for (std::size_t i = 0; i < n; ++i) out.at(i, k) = col[i];
        }
        if (info) *info = DilateInfo{false, "fourier-phase"};
    }
    return from_line(out);
}

double MellinSpectrum::max_abs() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
}

double MellinSpectrum::l2_norm() const {
    // uniform tau grid: d tau = 2 pi / (N h)
    const double dtau = 2.0 * kPi / (static_cast<double>(grid.n) * grid.step());
    double acc = 0.0;
    for (std::size_t k = 0; k < cols(); ++k) {
        double col = 0.0;
        for (std::size_t j = 0; j < rows(); ++j) col += std::norm(at(j, k));
        acc += model->sphere()[k].weight * col * dtau;
    }
    return std::sqrt(acc);
}

MellinSpectrum mellin(const Field& f) {
    LineField g = to_line(f);
    // periodization artifacts scale with the line-side boundary magnitude
    const double gmax = g.max_abs();
    if (gmax > 0.0) {
        double edge = 0.0;
        for (std::size_t i : {std::size_t(0), std::size_t(1), g.rows() - 2, g.rows() - 1})
            for (std::size_t k = 0; k < g.cols(); ++k) edge = std::max(edge, std::abs(g.at(i, k)));
        if (edge / gmax >= 1e-8)
            throw TruncationError("mellin: F f does not decay at the grid ends", edge / gmax);
    }
    const std::size_t n = g.rows();
    const double h = g.grid.step();
    MellinSpectrum spec;
    spec.model = g.model;
    spec.grid = g.grid;
    spec.tau = fft_freq(n, h);
    spec.values.resize(g.values.size());
    const double scale = h / std::sqrt(2.0 * kPi);
    std::vector<cplx> col(n);
    for (std::size_t k = 0; k < g.cols(); ++k) {
        for (std::size_t i = 0; i < n; ++i) col[i] = g.at(i, k);
        fft(col);
        for (std::size_t j = 0; j < n; ++j) {
            // continuum phase: s_i = s_min + i h  =>  e^{-i s_min tau_j} prefactor
            const cplx phase = std::exp(cplx(0.0, -g.grid.s_min * spec.tau[j]));
            spec.at(j, k) = scale * phase * col[j];
        }
    }
    return spec;
}

namespace {

// direct Toeplitz quadrature of the Gaussian convolution, used when the
// kernel is wide relative to the grid (or for the independent kernel route)
void convolve_direct(const LineField& g, double t, LineField& out, double window_halfwidth) {
    const std::size_t n = g.rows();
    const double h = g.grid.step();
    const double norm = h / std::sqrt(4.0 * kPi * t);
    const auto wsteps = window_halfwidth > 0.0
                            ? static_cast<std::ptrdiff_t>(std::ceil(window_halfwidth / h))
                            : static_cast<std::ptrdiff_t>(n);
    std::vector<double> kern(n, 0.0);
    for (std::size_t d = 0; d < n; ++d) {
        const double lambda = static_cast<double>(d) * h;
        kern[d] = (static_cast<std::ptrdiff_t>(d) <= wsteps)
                      ? norm * std::exp(-lambda * lambda / (4.0 * t))
                      : 0.0;
    }
    for (std::size_t k = 0; k < g.cols(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc(0.0, 0.0);
            const auto lo = static_cast<std::size_t>(
                std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - wsteps));
            const auto hi = std::min(n - 1, i + static_cast<std::size_t>(wsteps));
            for (std::size_t j = lo; j <= hi; ++j) {
                const std::size_t d = i >= j ? i - j : j - i;
                acc += kern[d] * g.at(j, k);
            }
            out.at(i, k) = acc;
        }
    }
}

} // namespace

LineField gaussian_convolve(const LineField& g, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("gaussian_convolve: t must be positive");
    LineField out = g;
    const double span = g.grid.s_max - g.grid.s_min;
    if (t <= span * span / 64.0) {
        // kernel fits comfortably: zero-padded FFT with the exact symbol e^{-t tau^2}
        const std::size_t n = g.rows();
        const std::size_t m = next_pow2(4 * n);
        const double h = g.grid.step();
        const auto tau = fft_freq(m, h);
        std::vector<cplx> buf(m);
        for (std::size_t k = 0; k < g.cols(); ++k) {
            std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
            for (std::size_t i = 0; i < n; ++i) buf[i] = g.at(i, k);
            fft(buf);
            for (std::size_t j = 0; j < m; ++j) buf[j] *= std::exp(-t * tau[j] * tau[j]);
            ifft(buf);
            for (std::size_t i = 0; i < n; ++i) out.at(i, k) = buf[i];
        }
    } else {
        convolve_direct(g, t, out, 0.0);
    }
    return out;
}

Field euler_heat_kernel(const Field& f, double t, HeatKernelInfo* info) {
    if (!(t > 0.0)) throw std::invalid_argument("euler_heat_kernel: t must be positive");
    const double q = f.model->homogeneous_dimension();
    // substituting z = e^{sigma} in the kernel integral gives exactly the
    // Gaussian convolution of (F f)(sigma) = e^{sigma Q/2} f(e^{sigma} y)
    LineField g = to_line(f);
    LineField conv = g;
    const double window = 10.0 * std::sqrt(2.0 * t);
    convolve_direct(g, t, conv, window);
    if (info) {
        info->window_halfwidth = window;
        info->tail_mass = std::erfc(window / (2.0 * std::sqrt(t)));
    }
    Field out = from_line(conv);
    const double decay = std::exp(-t * q * q / 4.0);
    for (auto& v : out.values) v *= decay;
    return out;
}

Field euler_heat_spectral(const Field& f, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("euler_heat_spectral: t must be positive");
    const double q = f.model->homogeneous_dimension();
    Field out = from_line(gaussian_convolve(to_line(f), t));
    const double decay = std::exp(-t * q * q / 4.0);
    for (auto& v : out.values) v *= decay;
    return out;
}

std::vector<double> TimeGrid::times() const {
    if (!(t_min > 0.0) || !(ratio > 1.0) || count < 1)
        throw std::invalid_argument("TimeGrid: need t_min > 0, ratio > 1, count >= 1");
    std::vector<double> out(static_cast<std::size_t>(count));
    double t = t_min;
    for (int j = 0; j < count; ++j) {
        out[static_cast<std::size_t>(j)] = t;
        t *= ratio;
    }
    return out;
}

namespace {

// sup over the grid of |conv_t g|; for wide kernels the output is smooth on
// the kernel scale, so it is sampled with a bounded stride.
double convolution_sup(const LineField& g, double t) {
    const double span = g.grid.s_max - g.grid.s_min;
    const std::size_t n = g.rows();
    if (t <= span * span / 64.0) {
        LineField conv = gaussian_convolve(g, t);
        return conv.max_abs();
    }
    const double h = g.grid.step();
    const double sigma = std::sqrt(2.0 * t);
    const auto stride = std::min<std::size_t>(
        64, std::max<std::size_t>(1, static_cast<std::size_t>(sigma / (8.0 * h))));
    const double norm = h / std::sqrt(4.0 * kPi * t);
    double best = 0.0;
    for (std::size_t k = 0; k < g.cols(); ++k) {
        for (std::size_t i = 0; i < n; i += stride) {
            cplx acc(0.0, 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                const double lambda = (static_cast<double>(i) - static_cast<double>(j)) * h;
                acc += norm * std::exp(-lambda * lambda / (4.0 * t)) * g.at(j, k);
            }
            best = std::max(best, std::abs(acc));
        }
    }
    return best;
}

} // namespace

std::vector<double> besov_profile(const LineField& g, const std::vector<double>& times) {
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(convolution_sup(g, t));
    return out;
}

BesovResult besov_norm(const Field& f, double alpha, const TimeGrid& grid) {
    if (!(alpha < 0.0)) throw std::invalid_argument("besov_norm: alpha must be negative");
    const auto times = grid.times();
    if (times.empty()) throw std::invalid_argument("besov_norm: empty time grid");
    LineField g = to_line(f);
    const auto sups = besov_profile(g, times);
    BesovResult res;
    std::size_t best = 0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double v = std::pow(times[j], -alpha / 2.0) * sups[j];
        if (v > res.value) {
            res.value = v;
            best = j;
        }
    }
    res.argmax_t = times[best];
    res.endpoint = (best == 0 || best + 1 == times.size());

    // refinement estimate: re-evaluate the sup at argmax on a 2x denser grid
    // (trigonometric interpolation via zero-padded inverse FFT)
    {
        const std::size_t n = g.rows();
        const std::size_t m = next_pow2(4 * n);
        const double h = g.grid.step();
        const auto tau = fft_freq(m, h);
        const double t = res.argmax_t;
        double sup2 = 0.0;
        if (t <= (g.grid.s_max - g.grid.s_min) * (g.grid.s_max - g.grid.s_min) / 64.0) {
            std::vector<cplx> buf(m), up(2 * m, cplx(0.0, 0.0));
            for (std::size_t k = 0; k < g.cols(); ++k) {
                std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
                for (std::size_t i = 0; i < n; ++i) buf[i] = g.at(i, k);
                fft(buf);
                for (std::size_t j = 0; j < m; ++j) buf[j] *= std::exp(-t * tau[j] * tau[j]);
                // upsample: insert zeros between the two spectral halves
                std::fill(up.begin(), up.end(), cplx(0.0, 0.0));
                for (std::size_t j = 0; j < m / 2; ++j) up[j] = buf[j];
                for (std::size_t j = m / 2; j < m; ++j) up[j + m] = buf[j];
                ifft(up);
                for (std::size_t i = 0; i < 2 * n; ++i)
                    sup2 = std::max(sup2, 2.0 * std::abs(up[i]));
            }
        } else {
            sup2 = convolution_sup(g, t); // already smooth on the kernel scale
        }
        res.refined_value = std::pow(t, -alpha / 2.0) * sup2;
    }
    return res;
}

} // namespace homog
