#pragma once

#include <utility>

#include "nehari/grid.hpp"
#include "nehari/weights.hpp"

namespace nehari {

// Model parameters: lambda > 0 scales the concave term, q in (1,2) is its
// exponent, alpha,beta > 1 are the coupling exponents.
struct Params {
    double lambda = 1.0;
    double q = 1.5;
    double alpha = 2.0;
    double beta = 2.0;
    double p_star = 0.0;  // (alpha+beta)/(alpha+beta-q)

    double coupling_sum() const { return alpha + beta; }
    Params with_lambda(double value) const;

    friend bool operator==(const Params&, const Params&) = default;
};

Params make_params(double lambda, double q, double alpha, double beta);

// The three integrals every fibering formula is built from:
//   dirichlet = squared W-norm of the pair,
//   concave   = integral of a * (|u|^q + |v|^q),
//   coupling  = integral of b * |u|^alpha * |v|^beta.
struct IntegralTriple {
    double dirichlet = 0.0;
    double concave = 0.0;
    double coupling = 0.0;
};

IntegralTriple integral_triple(const Grid& grid, const Weights& weights, const Params& params,
                               const StatePair& state);

// Euler functional J = G/2 - (lambda/q) A - B/(alpha+beta).
double energy(const IntegralTriple& triple, const Params& params);
double energy(const Grid& grid, const Weights& weights, const Params& params,
              const StatePair& state);

// G - lambda A - B; zero (within tolerance) means Nehari membership.
double nehari_constraint(const IntegralTriple& triple, const Params& params);

// The two alternative on-manifold expressions for J; they agree with energy()
// only when the constraint holds.
std::pair<double, double> on_manifold_energies(const IntegralTriple& triple, const Params& params);

// |x|^{p-2} x, extended by 0 at x = 0 (continuous for p > 1).
double signed_power(double x, double p);

// Strong-form residual of the system: component-wise
//   r_u = -lap(u) ... applied as apply_laplacian(u)
//         - lambda a |u|^{q-2} u - (alpha/(alpha+beta)) b |u|^{alpha-2} u |v|^beta
// and symmetrically for r_v.
StatePair pde_residual(const Grid& grid, const Weights& weights, const Params& params,
                       const StatePair& state);

// The nonlinear right-hand sides the residual subtracts from the stencil,
// i.e. r = apply_laplacian(component) - rhs(component).
StatePair pde_nonlinear_rhs(const Grid& grid, const Weights& weights, const Params& params,
                            const StatePair& state);

}  // namespace nehari
