#pragma once

#include <cstdint>

#include "nehari/fibering.hpp"

namespace nehari {

struct AscentOptions {
    std::uint64_t seed = 0;
    double tol = 1e-10;  // relative stagnation of the Rayleigh quotient
    int restarts = 5;
    int max_iterations = 400;
};

struct AscentFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Estimate of the discrete embedding constant
//   sup_{u != 0} ||u||_{L^r} / ||grad u||_{L^2}
// by normalized ascent on the Rayleigh quotient, restarted from random seeds.
// Requires r >= 2.
double estimate_embedding_constant(const Grid& grid, double exponent,
                                   const AscentOptions& options = {});

// Peak of the fibering map with the concave term removed (lambda = 0):
//   t_max = (G/B)^{1/(s-2)},
//   value = ((s-2)/(2s)) (G^s / B^2)^{1/(s-2)}     with s = alpha+beta.
// Requires G > 0 and B > 0.
PeakPoint fibering_peak_lambda0(const IntegralTriple& triple, const Params& params);

// The computable constants controlling the small-lambda fibering geometry.
struct Thresholds {
    double S_pq = 0.0;    // embedding constant at exponent alpha+beta
    double S_q = 0.0;     // constant used for the concave term (see below)
    double delta = 0.0;   // uniform lower bound of the lambda-free peak
    double c = 0.0;       // concave-term bound coefficient
    double lambda1 = 0.0; // delta^{(2-q)/2} / (2c)
    double q = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    std::uint64_t seed = 0;

    // Positive lower bound for J on the Minus branch at this lambda:
    // delta^{q/2} (delta^{(2-q)/2} - lambda c).
    double delta1(double lambda) const;
};

// Computes delta, c, lambda1 from discrete embedding estimates. Only the
// exponents of params are used; params.lambda is ignored. Since q < 2, the
// exponent-q constant is bounded by the exponent-2 estimate (the domain has
// unit measure, so ||u||_q <= ||u||_2 nodally as well).
Thresholds compute_thresholds(const Grid& grid, const Weights& weights, const Params& params,
                              const AscentOptions& options = {});

}  // namespace nehari
