// Gamma function via the Lanczos approximation (g = 7, 9 coefficients),
// with the reflection formula for the left half plane. Double precision,
// validated against half-integer closed forms in the unit tests.
#pragma once

#include <cmath>
#include <stdexcept>

namespace homog {

namespace detail {
// Godfrey's coefficients for g = 7, n = 9.
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczos[9] = {
    0.99999999999980993,     676.5203681218851,      -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,    12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7,
};
} // namespace detail

inline double gamma_fn(double x) {
    if (std::isnan(x)) throw std::invalid_argument("gamma_fn: NaN argument");
    const double pi = 3.14159265358979323846;
    if (x < 0.5) {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x); poles at non-positive integers.
        const double s = std::sin(pi * x);
        if (s == 0.0) throw std::invalid_argument("gamma_fn: pole at non-positive integer");
        return pi / (s * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double acc = detail::kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += detail::kLanczos[i] / (z + static_cast<double>(i));
    const double t = z + detail::kLanczosG + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

inline double log_gamma(double x) {
    if (x <= 0.0) throw std::invalid_argument("log_gamma: requires x > 0");
    const double pi = 3.14159265358979323846;
    const double z = x - 1.0;
    double acc = detail::kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += detail::kLanczos[i] / (z + static_cast<double>(i));
    const double t = z + detail::kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

} // namespace homog
