// Homogeneous-group model reduced to the data the inequalities consume:
// the homogeneous dimension Q, a homogeneous quasi-norm, and a quadrature
// realization of the polar-decomposition measure on the unit quasi-sphere,
//
//   int_G f(x) dx = int_0^inf sum_i w_i f(r y_i) r^{Q-1} dr,   |y_i| = 1.
//
// No group law or exponential coordinates are kept: every operator in this
// library factors through polar coordinates.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace homog {

class NumericError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class NormKind { euclidean_p, anisotropic_power, custom };

// A homogeneous quasi-norm: |lambda x| = lambda |x|, |-x| = |x|, zero only
// at the origin. Anisotropic kinds dilate coordinate i by lambda^{nu_i} and
// use |x| = (sum |x_i|^{2N/nu_i})^{1/(2N)}.
struct QuasiNormSpec {
    NormKind kind = NormKind::euclidean_p;
    double p = 2.0;                  // euclidean exponent; infinity() for the max norm
    std::vector<double> weights;     // anisotropic dilation weights nu_i > 0
    double power = 4.0;              // anisotropic 2N (positive even integer)
    std::function<double(std::span<const double>)> fn; // custom isotropic norm

    static QuasiNormSpec euclidean(double p_exp) {
        QuasiNormSpec s;
        s.kind = NormKind::euclidean_p;
        s.p = p_exp;
        return s;
    }
    static QuasiNormSpec anisotropic(std::vector<double> nu, double two_n) {
        if (two_n < 2.0 || std::fmod(two_n, 2.0) != 0.0)
            throw std::invalid_argument("QuasiNormSpec: anisotropic power must be a positive even integer");
        for (double v : nu)
            if (!(v > 0.0)) throw std::invalid_argument("QuasiNormSpec: dilation weights must be positive");
        QuasiNormSpec s;
        s.kind = NormKind::anisotropic_power;
        s.weights = std::move(nu);
        s.power = two_n;
        return s;
    }
    static QuasiNormSpec custom_isotropic(std::function<double(std::span<const double>)> f) {
        QuasiNormSpec s;
        s.kind = NormKind::custom;
        s.fn = std::move(f);
        return s;
    }

    bool isotropic() const { return kind != NormKind::anisotropic_power; }
    double evaluate(std::span<const double> x) const;
};

struct SphereNode {
    std::vector<double> coords; // point with |y| = 1; empty for abstract radial models
    double weight = 0.0;
};

// Uniform grid in the log radius s = ln r. Power-of-two sample counts make
// the spectral derivative and the FFT convolution exact-length transforms.
struct RadialGridSpec {
    double s_min = -12.0;
    double s_max = 8.0;
    int n = 4096;

    RadialGridSpec() = default;
    RadialGridSpec(double lo, double hi, int count) : s_min(lo), s_max(hi), n(count) { validate(); }

    void validate() const {
        if (!(s_min < s_max)) throw std::invalid_argument("RadialGridSpec: s_min must be < s_max");
        if (n < 16) throw std::invalid_argument("RadialGridSpec: need at least 16 samples");
    }
    double step() const { return (s_max - s_min) / static_cast<double>(n - 1); }
    double s(int i) const { return s_min + step() * static_cast<double>(i); }
    double r(int i) const { return std::exp(s(i)); }
    std::vector<double> s_samples() const {
        std::vector<double> out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = s(i);
        return out;
    }
};

class GroupModel {
  public:
    // Isotropic model on R^n (Q = n) with the given euclidean-p quasi-norm.
    static GroupModel euclidean(int n, double p_exp, int resolution);
    // Isotropic model on R^n with a user-supplied quasi-norm.
    static GroupModel custom_isotropic(int n, std::function<double(std::span<const double>)> fn,
                                       int resolution);
    // Radial-only model: fields depend on |x| alone, the sphere collapses to
    // one node carrying the full measure. Q may be any real >= 1.
    static GroupModel abstract_radial(double q, double sphere_measure);
    // Anisotropic-dilation model, radial fields only; |wp| supplied by the
    // caller (e.g. from monte_carlo_sphere_measure).
    static GroupModel anisotropic_radial(std::vector<double> nu, double two_n, double sphere_measure);
    // Model with an explicit sphere table (nodes must satisfy |y| = 1).
    static GroupModel from_sphere_table(int n, double q, QuasiNormSpec norm,
                                        std::vector<SphereNode> sphere);

    int ambient_dim() const { return ambient_dim_; }
    double homogeneous_dimension() const { return q_; }
    const QuasiNormSpec& norm() const { return norm_; }
    const std::vector<SphereNode>& sphere() const { return sphere_; }
    std::size_t node_count() const { return sphere_.size(); }
    double sphere_measure() const { return sphere_measure_; }
    bool radial_only() const { return radial_only_; }

    double quasi_norm(std::span<const double> x) const;

  private:
    GroupModel() = default;
    int ambient_dim_ = 0;
    double q_ = 0.0;
    QuasiNormSpec norm_;
    std::vector<SphereNode> sphere_;
    double sphere_measure_ = 0.0;
    bool radial_only_ = false;
};

// Sphere quadrature realizing the polar measure for isotropic norms on
// R^n, n in {1,2,3}: Euclidean surface nodes omega are projected to
// y = omega/|omega| and the Euclidean weights pick up the Jacobian factor
// |omega|^{-n} (substituting x = rho*omega, r = rho*|omega|).
std::vector<SphereNode> build_sphere_quadrature(const QuasiNormSpec& norm, int n, int resolution);

// int_G f dx over the grid window by trapezoid in s (r^{Q-1} dr = e^{sQ} ds).
// The integrand receives (r, node_index).
double polar_integrate(const GroupModel& model, const RadialGridSpec& grid,
                       const std::function<double(double, std::size_t)>& integrand);

// |B(0,R)| = R^Q |wp| / Q.
double ball_volume(const GroupModel& model, double radius);

// Monte Carlo estimate of |wp| = Q * |B(0,1)| for norms without a closed-form
// sphere measure (anisotropic dilations included).
double monte_carlo_sphere_measure(const QuasiNormSpec& norm, int n, double q, std::int64_t samples,
                                  std::uint64_t seed);

} // namespace homog
