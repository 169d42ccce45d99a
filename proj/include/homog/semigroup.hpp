// The Euler heat semigroup S(t) = e^{-t E*E} and its companions.
//
// The unitary change of variables (F f)(s,y) = e^{sQ/2} f(e^s y) turns E*E
// into A^2 + Q^2/4 with A = -iE - iQ/2, so
//
//   S(t) = e^{-t Q^2/4} F^{-1} (Gaussian_t * .) F,
//
// and the Mellin transform M = Fourier_s . F diagonalizes A with symbol tau.
// Two independent S(t) implementations are provided: the explicit log-radial
// kernel (direct quadrature) and the conjugated Gaussian convolution (FFT).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homog/field.hpp"

namespace homog {

struct LineField {
    std::shared_ptr<const GroupModel> model;
    RadialGridSpec grid;
    std::vector<cplx> values; // (F f)(s_i, y_k), row-major like Field

    std::size_t rows() const { return static_cast<std::size_t>(grid.n); }
    std::size_t cols() const { return model->node_count(); }
    cplx& at(std::size_t i, std::size_t k) { return values[i * cols() + k]; }
    const cplx& at(std::size_t i, std::size_t k) const { return values[i * cols() + k]; }
    double max_abs() const;

    // L^2(R x wp) norm: (int sum_k w_k |g|^2 ds)^{1/2}.
    double l2_norm() const;
};

// (F f)(s,y) = e^{sQ/2} f(e^s y); F preserves the L^2 norm.
LineField to_line(const Field& f);
// (F^{-1} g)(x) = r^{-Q/2} g(ln r, y). Exact round trip with to_line.
Field from_line(const LineField& g);

struct DilateInfo {
    bool exact_shift = true;          // t was an integer number of grid steps
    std::string interpolation = "none"; // "fourier-phase" otherwise
};

// (U(t) f)(x) = e^{tQ/2} f(e^t x); an s-shift of F f.
Field dilate(const Field& f, double t, DilateInfo* info = nullptr);

struct MellinSpectrum {
    std::shared_ptr<const GroupModel> model;
    RadialGridSpec grid;
    std::vector<double> tau;   // conjugate frequencies, FFT layout
    std::vector<cplx> values;  // (tau_j, node_k), row-major

    std::size_t rows() const { return tau.size(); }
    std::size_t cols() const { return model->node_count(); }
    cplx& at(std::size_t j, std::size_t k) { return values[j * cols() + k]; }
    const cplx& at(std::size_t j, std::size_t k) const { return values[j * cols() + k]; }
    double max_abs() const;

    // L^2 norm with the conjugate measure d tau; equals the L^2 of F f.
    double l2_norm() const;
};

// (M f)(tau,y) = (2 pi)^{-1/2} int e^{-is tau} (F f)(s,y) ds, by FFT.
MellinSpectrum mellin(const Field& f);

// Gaussian convolution along s with kernel e^{-lambda^2/(4t)}/sqrt(4 pi t):
// the F-conjugated form of e^{-t A^2}. Dispatches between a zero-padded FFT
// multiplier (kernel narrow vs. the grid) and direct Toeplitz quadrature
// (kernel wide), both spectrally accurate on decaying columns.
LineField gaussian_convolve(const LineField& g, double t);

struct HeatKernelInfo {
    double window_halfwidth = 0.0; // quadrature truncation in s
    double tail_mass = 0.0;        // Gaussian mass beyond the window
};

// S(t) f by direct quadrature of the explicit kernel,
//   (S(t)f)(ry) = e^{-tQ^2/4}/sqrt(4 pi t) r^{-Q/2}
//                 int_0^inf e^{-(ln r - ln z)^2/(4t)} z^{-Q/2} f(zy) z^{Q-1} dz,
// truncating the Gaussian at 10 sqrt(2t) with the lost mass recorded.
Field euler_heat_kernel(const Field& f, double t, HeatKernelInfo* info = nullptr);

// S(t) f via F^{-1} (Gaussian_t * .) F and the e^{-tQ^2/4} prefactor.
Field euler_heat_spectral(const Field& f, double t);

// Geometric time grid t_j = t_min rho^j, j = 0..count-1, discretizing the
// sup over t > 0 in the Besov norm.
struct TimeGrid {
    double t_min = 1e-4;
    double ratio = 1.1220184543019633; // 10^{1/20}
    int count = 161;                   // reaches 1e4

    static TimeGrid standard() { return TimeGrid{}; }
    std::vector<double> times() const;
};

struct BesovResult {
    double value = 0.0;     // sup_j t_j^{-alpha/2} sup_{s,y} |conv_t (F f)|
    double argmax_t = 0.0;
    bool endpoint = false;  // sup attained at the first or last t_j
    double refined_value = 0.0; // sup re-evaluated on a 2x denser s-grid at argmax_t
};

// Besov-type norm ||f||_{B^alpha} with alpha < 0.
BesovResult besov_norm(const Field& f, double alpha, const TimeGrid& times = TimeGrid::standard());

// sup_{s,y} |conv_t (F f)| for each t in the grid (shared by besov_norm and
// the Gagliardo-Nirenberg checker, which evaluates several alpha at once).
std::vector<double> besov_profile(const LineField& g, const std::vector<double>& times);

} // namespace homog
