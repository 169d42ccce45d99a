// In-place complex FFT: iterative radix-2 for power-of-two lengths plus a
// Bluestein fallback for arbitrary lengths. Deterministic (no planning state),
// thread-safe, unnormalized forward transform; inverse divides by N.
#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace homog {

using cplx = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Radix-2 Cooley-Tukey, data.size() must be a power of two.
inline void fft_pow2(std::vector<cplx>& data, bool inverse) {
    const std::size_t n = data.size();
    if (n < 2) return;

    // bit reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const double pi = 3.14159265358979323846;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const cplx wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = data[i + k];
                cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

} // namespace detail

// Forward DFT: X[k] = sum_j x[j] exp(-2*pi*i*j*k/N). No normalization.
inline void fft(std::vector<cplx>& data) {
    const std::size_t n = data.size();
    if (n == 0) throw std::invalid_argument("fft: empty input");
    if (detail::is_pow2(n)) {
        detail::fft_pow2(data, false);
        return;
    }
    // Bluestein: express the DFT as a convolution of chirped sequences.
    const double pi = 3.14159265358979323846;
    std::size_t m = 1;
    while (m < 2 * n + 1) m <<= 1;
    std::vector<cplx> a(m, cplx(0.0, 0.0)), b(m, cplx(0.0, 0.0));
    std::vector<cplx> chirp(n);
    for (std::size_t j = 0; j < n; ++j) {
        // angle = pi*j^2/n mod 2*pi, computed with j^2 mod 2n to avoid overflow
        const std::size_t j2 = (j * j) % (2 * n);
        const double ang = pi * static_cast<double>(j2) / static_cast<double>(n);
        chirp[j] = cplx(std::cos(ang), std::sin(ang));
    }
    for (std::size_t j = 0; j < n; ++j) a[j] = data[j] * std::conj(chirp[j]);
    b[0] = chirp[0];
    for (std::size_t j = 1; j < n; ++j) b[j] = b[m - j] = chirp[j];
    detail::fft_pow2(a, false);
    detail::fft_pow2(b, false);
    for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
    detail::fft_pow2(a, true);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) data[j] = std::conj(chirp[j]) * (a[j] * scale);
}

inline void ifft(std::vector<cplx>& data) {
    for (auto& z : data) z = std::conj(z);
    fft(data);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& z : data) z = std::conj(z) * scale;
}

// Frequency sample k -> angular frequency 2*pi*k'/(n*dx), k' in [-n/2, n/2).
inline std::vector<double> fft_freq(std::size_t n, double dx) {
    std::vector<double> out(n);
    const double pi = 3.14159265358979323846;
    const double base = 2.0 * pi / (static_cast<double>(n) * dx);
    for (std::size_t k = 0; k < n; ++k) {
        const auto ks = static_cast<std::ptrdiff_t>(k);
        out[k] = base * static_cast<double>(ks < static_cast<std::ptrdiff_t>((n + 1) / 2)
                                                ? ks
                                                : ks - static_cast<std::ptrdiff_t>(n));
    }
    return out;
}

} // namespace homog
