// Fields sampled on the uniform log-radial grid x sphere nodes, and the
// operator calculus on them:
//
//   Euler operator      E = r d/dr = d/ds        (s = ln r)
//   radial derivative   R = d/dr   = e^{-s} d/ds
//   formal adjoint      E* = -Q I - E
//
// Fields are immutable values: every operation returns a fresh Field.
#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "homog/group_model.hpp"

namespace homog {

using cplx = std::complex<double>;

class TruncationError : public NumericError {
  public:
    TruncationError(const std::string& what, double boundary_magnitude)
        : NumericError(what), boundary_magnitude(boundary_magnitude) {}
    double boundary_magnitude;
};

struct Field {
    std::shared_ptr<const GroupModel> model;
    RadialGridSpec grid;
    std::vector<cplx> values; // row-major, index = s_index * cols + node_index

    std::size_t rows() const { return static_cast<std::size_t>(grid.n); }
    std::size_t cols() const { return model->node_count(); }
    cplx& at(std::size_t i, std::size_t k) { return values[i * cols() + k]; }
    const cplx& at(std::size_t i, std::size_t k) const { return values[i * cols() + k]; }

    // max |value| over the outermost two samples at each grid end, relative
    // to the overall max (0 for the zero field).
    double boundary_decay() const;
    double max_abs() const;
    bool is_radial(double tol = 0.0) const;
};

Field make_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                 const std::function<cplx(double, std::size_t)>& fn);
Field make_radial_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                        const std::function<double(double)>& fn);
Field zero_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid);

enum class DerivativeScheme { automatic, spectral_fourier, central_4th_order };

struct DerivInfo {
    std::string scheme_used;
    double boundary_decay = 0.0;
};

// E f = d/ds f per sphere column. The spectral scheme needs periodic-safe
// decay (boundary below 1e-10 relative); `automatic` falls back to the
// 4th-order stencil and records the decision.
Field euler_apply(const Field& f, DerivativeScheme scheme = DerivativeScheme::automatic,
                  DerivInfo* info = nullptr);

// R f = e^{-s} d/ds f.
Field radial_derivative_apply(const Field& f,
                              DerivativeScheme scheme = DerivativeScheme::automatic,
                              DerivInfo* info = nullptr);

// E* f = -Q f - E f.
Field euler_adjoint_apply(const Field& f, DerivativeScheme scheme = DerivativeScheme::automatic,
                          DerivInfo* info = nullptr);

using RadialWeight = std::function<double(double)>; // of r; default weight is 1

// (int_G weight |f|^p dx)^{1/p}, p in [1, inf).
double lp_norm(const Field& f, double p, const RadialWeight& weight = {});

// <f, g> = int_G f conj(g) dx.
cplx inner_product(const Field& f, const Field& g);

// L^p spherical symmetrization: ftil(r) = (|wp|^{-1} sum_k w_k |f(r,y_k)|^p)^{1/p},
// replicated across sphere columns. Preserves every weighted L^p mass of |f|.
Field radialize(const Field& f, double p);

// Arithmetic sphere average g(r) = |wp|^{-1} sum_k w_k f(r,y_k).
Field sphere_mean(const Field& f);

// Pointwise helpers (all value-returning).
Field scale(const Field& f, cplx c);
Field add(const Field& f, const Field& g);
Field subtract(const Field& f, const Field& g);
Field multiply_radial(const Field& f, const std::function<double(double)>& w);

// L2 relative distance ||f-g||_2 / ||g||_2 (0 when both vanish).
double l2_relative_error(const Field& f, const Field& g);

} // namespace homog
