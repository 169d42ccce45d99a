// Geometric-mean (maximal) Hardy inequality machinery: the ball-mean
// operator M, the transform exp(M log f), the A(phi, psi) tail functional
// whose finiteness characterizes
//
//   int phi exp(M log f) dx <= C int psi f dx   for all positive f,
//
// and the witness construction for the necessity direction.
#pragma once

#include <vector>

#include "homog/field.hpp"
#include "homog/report.hpp"

namespace homog {

// (M f)(x) = |B(0,|x|)|^{-1} int_{B(0,|x|)} f dz; radial output. The
// [0, r_min) head of each prefix integral uses a value+slope model in s
// (exact for constants and power profiles), recorded via metadata.
Field ball_mean(const Field& f);

// exp(M log f) for strictly positive f; samples at or below 1e-300 are a
// hard error (clamping would corrupt the geometric mean).
Field geometric_mean_transform(const Field& f);

struct AFunctionalResult {
    double value = 0.0;     // sup_R R^Q int_{|x|>=R} W3 / |x|^{2Q} dx
    double argmax_R = 0.0;
    bool divergent = false; // tail integrand does not decay within the grid
    bool r_independent = false; // sup attained (within 1e-6) on most of the R grid
};

// W3 = phi * exp(M log (1/psi)); the R grid is the radial grid itself.
AFunctionalResult a_functional(const Field& phi, const Field& psi);

// Sufficiency direction with the proof's explicit constant C = e A Q / |wp|.
InequalityReport check_max_hardy(const Field& phi, const Field& psi, const Field& f);

// u_R = R^{-Q} on (0,R) and e^{-2Q} R^Q |x|^{-2Q} on (R, inf).
Field max_hardy_witness(std::shared_ptr<const GroupModel> model, const RadialGridSpec& grid,
                        double big_r);

// int_G u_R dx by split quadrature on each analytic piece (plus the exact
// head/tail contributions outside the grid window).
double max_hardy_witness_mass(const GroupModel& model, double big_r, int samples_per_piece);

struct NecessityPoint {
    double big_r = 0.0;
    double lhs = 0.0;         // int W3 exp(M log u_R) dx
    double lower_bound = 0.0; // e^{2-2Q} R^Q int_{|x|>=R} W3 / |x|^{2Q} dx
};

// Evaluates the necessity-direction bound at each R (grid-aligned).
std::vector<NecessityPoint> necessity_probe(const Field& phi, const Field& psi,
                                            const std::vector<double>& big_r_list);

} // namespace homog
