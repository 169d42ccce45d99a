// Radially-weighted Hardy-type inequalities driven by a differentiable
// radial weight phi: for p > 1 and any quasi-norm,
//
//   int phi'(|x|)/|x|^{Q-1} |f|^p dx
//       <= int |R f|^p dx + (p-1) int |phi|^{p/(p-1)} / |x|^{p(Q-1)/(p-1)} |f|^p dx
//
// (additive form; a Hoelder variant gives the multiplicative form), their
// conjugate-exponent (p, q) versions, the Heisenberg-Pauli-Weyl uncertainty
// principles they imply, and the gradient-free nonlocal functional I_delta
// with the associated log-Sobolev-type bound.
#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "homog/field.hpp"
#include "homog/report.hpp"

namespace homog {

struct RadialWeightFn {
    std::function<double(double)> value;      // phi(r)
    std::function<double(double)> derivative; // phi'(r)
    std::string name;

    static RadialWeightFn log_profile();            // phi = ln r
    static RadialWeightFn power_profile(double a);  // phi = r^a

    // derivative callable must match finite differences of value
    void validate_on(const RadialGridSpec& grid, double tol = 1e-6) const;
};

InequalityReport check_radial_weight_additive(const RadialWeightFn& phi, const Field& f, double p);
InequalityReport check_radial_weight_multiplicative(const RadialWeightFn& phi, const Field& f,
                                                    double p);

// Conjugate-exponent variants (1/p + 1/q = 1); for q = p/(p-1) they coincide
// with the two checks above.
std::pair<InequalityReport, InequalityReport> check_radial_weight_conjugate(
    const RadialWeightFn& phi, const Field& f, double p, double q);

enum class HpwVariant { improved, classical };

// (int |f|^2)^2 <= c * int |R f|^2 * int |x|^2 |f|^2 with c = (2/n)^2
// (improved, n >= 2) or (2/(n-2))^2 (classical, n >= 3). Run on radial
// fields, where |grad f| = |R f|.
InequalityReport check_uncertainty_hpw(const Field& f, HpwVariant variant);

struct NonlocalEstimate {
    double value = 0.0;        // Monte Carlo core + analytic far tail
    double std_error = 0.0;    // batch-means standard error of the core
    double tail_correction = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    double z_min = 0.0;        // Lipschitz-rule core exclusion, L z_min <= delta/2
    double z_max = 0.0;        // effective domain diameter
};

// I_delta(f) = iint_{|f(y)-f(x)|>delta} delta^2 / |x-y|^{Q+2} dx dy on the
// abelian Euclidean model (n in {1,2,3}), importance-sampled in z = y - x
// with density ~ |z|^{-(Q+2)} on [z_min, z_max]. Radial real fields only.
NonlocalEstimate nonlocal_functional(const Field& f, double delta, std::int64_t samples,
                                     std::uint64_t seed);

struct NonlocalLogSobolevResult {
    double lhs = 0.0;          // entropy term + (Q/2) log ||f||^2
    double rhs_trial = 0.0;    // (Q/2) log(C delta^{4/Q} ||f||^{(2Q-4)/Q} + C I_delta)
    double min_empirical_c = 0.0;
    NonlocalEstimate nonlocal;
    InequalityReport report;   // carries the assumed-hypothesis flag
};

// Log-Sobolev-type bound driven by I_delta; the level-set hypothesis on f
// cannot be verified abstractly and is recorded as assumed.
NonlocalLogSobolevResult check_nonlocal_log_sobolev(const Field& f, double delta, double trial_c,
                                                    std::int64_t samples, std::uint64_t seed);

} // namespace homog
