// Checker registry for the Hardy-Sobolev / Gagliardo-Nirenberg family:
// the sharp-constant checks (Sobolev type, Hardy, Bliss, Stubbe-type
// remainder), the empirical-constant interpolation corollaries, and the
// numerical sharpness probes driven by explicit extremizer families.
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "homog/field.hpp"
#include "homog/report.hpp"
#include "homog/semigroup.hpp"

namespace homog {

// S_Q = |wp|^{2/Q} Q^{(Q-2)/Q} (Q-2) (Gamma(Q/2) Gamma(1+Q/2) / Gamma(Q))^{2/Q},
// the sharp constant of the Stubbe-type remainder inequality. Q > 2.
double sq_constant(double q, double sphere_measure);

// Sharp constant of the 1-D Bliss inequality
//   (int_0^inf |int_0^s f|^q s^{q/p-q-1} ds)^{p/q} <= C_{p,q} int_0^inf f^p dr,
// q > p > 1.
double bliss_constant(double p, double q);

// The equality family of the Bliss inequality:
// f(r) = c1 (c2 r^{q/p-1} + 1)^{q/(p-q)}, positive and decreasing.
struct BlissExtremizer {
    double c1 = 1.0, c2 = 1.0, p = 2.0, q = 6.0;
    BlissExtremizer(double c1, double c2, double p, double q);
    double operator()(double r) const;
};

// Bliss check on sampled data (r strictly increasing, f >= 0); the inner
// cumulative integral uses trapezoid prefix sums.
InequalityReport check_bliss(const std::vector<double>& r, const std::vector<double>& f, double p,
                             double q);

// Bliss check on a callable via adaptive Simpson quadrature (both integrals
// and the memoized inner cumulative), used for the extremizer equality runs.
InequalityReport check_bliss_adaptive(const std::function<double(double)>& f, double p, double q);

// int |f|^p <= (p/Q)^p int |E f|^p.
InequalityReport check_sobolev_type(const Field& f, double p);

// int |f|^2/|x|^2 <= (2/(Q-2))^2 int |R f|^2, Q > 2.
InequalityReport check_hardy(const Field& f);

// Gagliardo-Nirenberg with the non-explicit constant: reports the empirical
//   C = ||F f||_{L^q} / ( ||d_s F f||_{L^p}^{p/q} ||f||_B^{1-p/q} ),
// whose grid stability is the testable claim.
struct GnResult {
    InequalityReport report;
    double lq_norm = 0.0;
    double lp_derivative_norm = 0.0;
    double besov = 0.0;
    double empirical_constant = 0.0;
};
GnResult check_gn(const Field& f, double p, double q,
                  const TimeGrid& times = TimeGrid::standard());

struct CorollaryParams {
    double p = 2.0;
    double q = 4.0;
    double delta = 0.0;
    double support_halfwidth = 0.0; // Lambda for the compact-support variants
    double annulus_R = 0.0;         // R for the annulus variants
};

// Interpolation-type corollaries of the Gagliardo-Nirenberg inequality;
// all constants are empirical scales except the explicit delta factors.
// Registered names:
//   sobolev-gn-sup / sobolev-gn-mean / sobolev-gn-sup-compact / sobolev-gn-mean-compact
//   lq-gn-sup / lq-gn-mean
//   euler-remainder-sup / euler-remainder-mean / euler-remainder-delta
//   radial-remainder-sup / radial-remainder-mean / radial-remainder-delta
//   annulus-log-euler / annulus-log-radial / weighted-mean-lq
InequalityReport check_corollary(const std::string& name, const Field& f,
                                 const CorollaryParams& params = {});
const std::vector<std::string>& corollary_names();

// Exact identity behind the radial-remainder family:
//   int |R(|x| h)|^2 dx = int |E h|^2 dx - (Q-1) int |h|^2 dx.
struct WeightedDerivativeIdentity {
    double weighted_derivative_sq = 0.0; // int |R(|x| h)|^2
    double euler_sq = 0.0;               // int |E h|^2
    double mass_sq = 0.0;                // int |h|^2
    double residual_rel = 0.0;
};
WeightedDerivativeIdentity check_weighted_derivative_identity(const Field& h);

// Stubbe-type remainder inequality (sharp, quasi-norm independent):
//   int |E f|^2 - delta int |f|^2
//     >= ((Q^2/4-delta)/((Q-2)^2/4))^{(Q-1)/Q} S_Q (int |x|^{2*} |Mf|^{2*})^{2/2*},
// with Mf the sphere mean, 2* = 2Q/(Q-2), 0 <= delta < Q^2/4, Q > 2.
InequalityReport check_stubbe(const Field& f, double delta);

// Radial family attaining the Stubbe bound: f(r) = r^{-beta} H(r^{Q-2 beta})
// with beta = (Q - sqrt(Q^2-4 delta))/2 and H the tail integral of the Bliss
// extremizer profile (1 + c2 v^{2/(Q-2)})^{-Q/2}.
Field stubbe_extremal_field(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                            double delta, double c2 = 1.0);

struct SharpnessResult {
    double best_ratio = 0.0; // orientation-normalized, 1 = equality
    std::vector<double> best_params;
    int evaluations = 0;
};

// Derivative-free maximization of a ratio functional over a parameter box
// (golden section in 1-D, Nelder-Mead otherwise). Deterministic per seed.
SharpnessResult probe_sharpness(const std::function<double(std::span<const double>)>& ratio_fn,
                                std::vector<double> lo, std::vector<double> hi, int budget,
                                std::uint64_t seed);

// Hardy near-extremizers f_eps = r^{-(Q-2)/2+eps} window(s), eps -> 0+.
SharpnessResult probe_hardy_sharpness(std::shared_ptr<const GroupModel> model,
                                      const RadialGridSpec& grid, int budget, std::uint64_t seed);

// Stubbe extremal family scanned over the profile parameter c2.
SharpnessResult probe_stubbe_sharpness(std::shared_ptr<const GroupModel> model,
                                       const RadialGridSpec& grid, double delta, int budget,
                                       std::uint64_t seed);

} // namespace homog
