#include "nehari/thresholds.hpp"

#include <cmath>
#include <random>

namespace nehari {

double estimate_embedding_constant(const Grid& grid, double exponent,
                                   const AscentOptions& options) {
    if (!(exponent >= 2.0))
        throw std::invalid_argument("estimate_embedding_constant: exponent must be >= 2");

    double best = 0.0;
    for (int restart = 0; restart < options.restarts; ++restart) {
        std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(restart));
        std::uniform_real_distribution<double> dist(0.1, 1.0);
        Field u = zero_field(grid);
        for (double& v : u.values) v = dist(rng);
        {
            const double norm = std::sqrt(dirichlet_energy(grid, u));
            for (double& v : u.values) v /= norm;
        }

        double quotient = lp_norm(grid, u, exponent);
        bool settled = false;
        for (int it = 0; it < options.max_iterations; ++it) {
            // Fixed-point ascent: w solves -lap(w) = |u|^{r-2} u, then renormalize.
            Field rhs = u;
            for (double& v : rhs.values) v = signed_power(v, exponent);
            Field w = riesz_solve(grid, rhs, 1e-12);
            const double norm = std::sqrt(dirichlet_energy(grid, w));
            for (int i = 0; i < grid.node_count; ++i) u.values[i] = w.values[i] / norm;
            const double next = lp_norm(grid, u, exponent);
            if (std::abs(next - quotient) <= options.tol * std::max(1.0, next)) {
                quotient = next;
                settled = true;
                break;
            }
            quotient = next;
        }
        if (!settled)
            throw AscentFailure("estimate_embedding_constant: quotient still moving after " +
                                std::to_string(options.max_iterations) + " iterations");
        best = std::max(best, quotient);
    }
    return best;
}

PeakPoint fibering_peak_lambda0(const IntegralTriple& triple, const Params& params) {
    if (!(triple.coupling > 0.0))
        throw std::invalid_argument(
            "fibering_peak_lambda0: no interior maximum for coupling <= 0");
    if (!(triple.dirichlet > 0.0))
        throw std::invalid_argument("fibering_peak_lambda0: requires a nonzero state");
    const double s = params.coupling_sum();
    const double log_g = std::log(triple.dirichlet);
    const double log_b = std::log(triple.coupling);
    PeakPoint peak;
    peak.t = std::exp((log_g - log_b) / (s - 2.0));
    peak.value = ((s - 2.0) / (2.0 * s)) * std::exp((s * log_g - 2.0 * log_b) / (s - 2.0));
    return peak;
}

double Thresholds::delta1(double lambda) const {
    return std::pow(delta, 0.5 * q) * (std::pow(delta, 0.5 * (2.0 - q)) - lambda * c);
}

Thresholds compute_thresholds(const Grid& grid, const Weights& weights, const Params& params,
                              const AscentOptions& options) {
    if (!(weights.a_sup > 0.0) || !(weights.b_plus_sup > 0.0))
        throw std::invalid_argument(
            "compute_thresholds: degenerate weights (need a somewhere nonzero and b somewhere "
            "positive)");

    const double s = params.coupling_sum();
    Thresholds out;
    out.q = params.q;
    out.alpha = params.alpha;
    out.beta = params.beta;
    out.seed = options.seed;
    out.S_pq = estimate_embedding_constant(grid, s, options);
    out.S_q = estimate_embedding_constant(grid, std::max(params.q, 2.0), options);

    const double b2 = weights.b_plus_sup * weights.b_plus_sup;
    out.delta = ((s - 2.0) / (2.0 * s)) *
                std::exp(-std::log(b2 * std::pow(out.S_pq, 2.0 * s)) / (s - 2.0));
    out.c = (1.0 / params.q) * weights.a_sup * std::pow(out.S_q, params.q) *
            std::pow(2.0 * s / (s - 2.0), 0.5 * params.q);
    out.lambda1 = std::pow(out.delta, 0.5 * (2.0 - params.q)) / (2.0 * out.c);
    return out;
}

}  // namespace nehari
