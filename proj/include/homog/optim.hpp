// Derivative-free maximizers used by the sharpness probes: golden-section
// line search and a budget-capped Nelder-Mead simplex.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace homog {

struct OptimResult {
    double best_value = 0.0;
    std::vector<double> best_point;
    int evaluations = 0;
};

// Maximize a unimodal function on [lo, hi].
inline OptimResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                      int budget) {
    if (budget <= 0) throw std::invalid_argument("golden_section_max: budget must be positive");
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    int evals = 2;
    while (evals < budget && (b - a) > 1e-12 * (1.0 + std::abs(a) + std::abs(b))) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
        ++evals;
    }
    OptimResult res;
    if (fc > fd) {
        res.best_value = fc;
        res.best_point = {c};
    } else {
        res.best_value = fd;
        res.best_point = {d};
    }
    res.evaluations = evals;
    return res;
}

// Maximize f over R^d starting from x0 with initial simplex scale `step`.
inline OptimResult nelder_mead_max(const std::function<double(std::span<const double>)>& f,
                                   std::vector<double> x0, double step, int budget) {
    if (budget <= 0) throw std::invalid_argument("nelder_mead_max: budget must be positive");
    const std::size_t d = x0.size();
    if (d == 0) throw std::invalid_argument("nelder_mead_max: empty start point");
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(std::span<const double>(x.data(), x.size()));
    };

    std::vector<std::vector<double>> pts(d + 1, x0);
    std::vector<double> vals(d + 1);
    for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
    for (std::size_t i = 0; i <= d; ++i) vals[i] = eval(pts[i]);

    auto order = [&]() {
        std::vector<std::size_t> idx(d + 1);
        for (std::size_t i = 0; i <= d; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return vals[a] > vals[b]; });
        std::vector<std::vector<double>> p2;
        std::vector<double> v2;
        for (auto i : idx) {
            p2.push_back(pts[i]);
            v2.push_back(vals[i]);
        }
        pts = std::move(p2);
        vals = std::move(v2);
    };

    while (evals < budget) {
        order();
        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) centroid[j] += pts[i][j];
        }
        for (auto& c : centroid) c /= static_cast<double>(d);

        auto affine = [&](double t) {
            std::vector<double> x(d);
            for (std::size_t j = 0; j < d; ++j) x[j] = centroid[j] + t * (centroid[j] - pts[d][j]);
            return x;
        };

        auto xr = affine(1.0);
        const double fr = eval(xr);
        if (fr > vals[0]) {
            auto xe = affine(2.0);
            const double fe = eval(xe);
            if (fe > fr) {
                pts[d] = xe;
                vals[d] = fe;
            } else {
                pts[d] = xr;
                vals[d] = fr;
            }
        } else if (fr > vals[d - 1]) {
            pts[d] = xr;
            vals[d] = fr;
        } else {
            auto xc = affine(-0.5);
            const double fco = eval(xc);
            if (fco > vals[d]) {
                pts[d] = xc;
                vals[d] = fco;
            } else {
                for (std::size_t i = 1; i <= d; ++i) {
                    for (std::size_t j = 0; j < d; ++j)
                        pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
                    vals[i] = eval(pts[i]);
                    if (evals >= budget) break;
                }
            }
        }
    }
    order();
    return OptimResult{vals[0], pts[0], evals};
}

} // namespace homog
