#include "nehari/energy.hpp"

#include <cmath>

namespace nehari {

Params Params::with_lambda(double value) const { return make_params(value, q, alpha, beta); }

Params make_params(double lambda, double q, double alpha, double beta) {
    if (!(lambda > 0.0)) throw std::invalid_argument("make_params: lambda must be positive");
    if (!(q > 1.0 && q < 2.0)) throw std::invalid_argument("make_params: q must lie in (1,2)");
    if (!(alpha > 1.0)) throw std::invalid_argument("make_params: alpha must exceed 1");
    if (!(beta > 1.0)) throw std::invalid_argument("make_params: beta must exceed 1");
    Params p;
    p.lambda = lambda;
    p.q = q;
    p.alpha = alpha;
    p.beta = beta;
    p.p_star = (alpha + beta) / (alpha + beta - q);
    return p;
}

IntegralTriple integral_triple(const Grid& grid, const Weights& weights, const Params& params,
                               const StatePair& state) {
    IntegralTriple t;
    t.dirichlet = dirichlet_energy(grid, state);
    double concave_sum = 0.0, coupling_sum = 0.0;
    for (int i = 0; i < grid.node_count; ++i) {
        const double au = std::pow(std::abs(state.u.values[i]), params.q);
        const double av = std::pow(std::abs(state.v.values[i]), params.q);
        concave_sum += weights.a.values[i] * (au + av);
        coupling_sum += weights.b.values[i] * std::pow(std::abs(state.u.values[i]), params.alpha) *
                        std::pow(std::abs(state.v.values[i]), params.beta);
    }
    const double cell = grid.dimension == 1 ? grid.h : grid.h * grid.h;
    t.concave = cell * concave_sum;
    t.coupling = cell * coupling_sum;
    return t;
}

double energy(const IntegralTriple& triple, const Params& params) {
    return 0.5 * triple.dirichlet - (params.lambda / params.q) * triple.concave -
           triple.coupling / params.coupling_sum();
}

double energy(const Grid& grid, const Weights& weights, const Params& params,
              const StatePair& state) {
    return energy(integral_triple(grid, weights, params, state), params);
}

double nehari_constraint(const IntegralTriple& triple, const Params& params) {
    return triple.dirichlet - params.lambda * triple.concave - triple.coupling;
}

std::pair<double, double> on_manifold_energies(const IntegralTriple& triple,
                                               const Params& params) {
    const double s = params.coupling_sum();
    const double from_coupling =
        (0.5 - 1.0 / params.q) * triple.dirichlet + (1.0 / params.q - 1.0 / s) * triple.coupling;
    const double from_concave = (0.5 - 1.0 / s) * triple.dirichlet -
                                params.lambda * (1.0 / params.q - 1.0 / s) * triple.concave;
    return {from_coupling, from_concave};
}

double signed_power(double x, double p) {
    if (x == 0.0) return 0.0;
    return std::pow(std::abs(x), p - 1.0) * (x > 0.0 ? 1.0 : -1.0);
}

StatePair pde_nonlinear_rhs(const Grid& grid, const Weights& weights, const Params& params,
                            const StatePair& state) {
    const double s = params.coupling_sum();
    StatePair rhs{zero_field(grid), zero_field(grid)};
    for (int i = 0; i < grid.node_count; ++i) {
        const double u = state.u.values[i];
        const double v = state.v.values[i];
        const double a = weights.a.values[i];
        const double b = weights.b.values[i];
        rhs.u.values[i] = params.lambda * a * signed_power(u, params.q) +
                          (params.alpha / s) * b * signed_power(u, params.alpha) *
                              std::pow(std::abs(v), params.beta);
        rhs.v.values[i] = params.lambda * a * signed_power(v, params.q) +
                          (params.beta / s) * b * signed_power(v, params.beta) *
                              std::pow(std::abs(u), params.alpha);
    }
    return rhs;
}

StatePair pde_residual(const Grid& grid, const Weights& weights, const Params& params,
                       const StatePair& state) {
    const StatePair rhs = pde_nonlinear_rhs(grid, weights, params, state);
    StatePair r{apply_laplacian(grid, state.u), apply_laplacian(grid, state.v)};
    for (int i = 0; i < grid.node_count; ++i) {
        r.u.values[i] -= rhs.u.values[i];
        r.v.values[i] -= rhs.v.values[i];
    }
    return r;
}

}  // namespace nehari
