#include "nehari/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace nehari::oracle {

double fd_derivative(const std::function<double(double)>& f, double t, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("fd_derivative: step must be positive");
    if (!(t - step > 0.0))
        throw std::invalid_argument("fd_derivative: t - step must stay positive");
    return (f(t + step) - f(t - step)) / (2.0 * step);
}

namespace {

// Raw slope of t -> J(tu, tv), written out from the triple definition and kept
// independent of the fibering module's closed forms.
double raw_slope(double t, const IntegralTriple& triple, const Params& params) {
    const double s = params.alpha + params.beta;
    return t * triple.dirichlet -
           params.lambda * std::pow(t, params.q - 1.0) * triple.concave -
           std::pow(t, s - 1.0) * triple.coupling;
}

}  // namespace

ScanResult scan_fibering(const IntegralTriple& triple, const Params& params, double lo, double hi,
                         int count) {
    if (count < 1000) throw std::invalid_argument("scan_fibering: need at least 1000 points");
    if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("scan_fibering: need 0 < lo < hi");
    ScanResult result;
    result.lo = lo;
    result.hi = hi;
    result.count = count;
    const double ratio = std::log(hi / lo) / (count - 1);
    double t_prev = lo;
    double v_prev = raw_slope(lo, triple, params);
    for (int k = 1; k < count; ++k) {
        const double t = lo * std::exp(ratio * k);
        const double v = raw_slope(t, triple, params);
        if (v_prev * v < 0.0) result.sign_changes.emplace_back(t_prev, t);
        t_prev = t;
        v_prev = v;
    }
    return result;
}

namespace {

struct ScalarTriple {
    double dirichlet = 0.0;
    double concave = 0.0;
    double coupling = 0.0;
};

ScalarTriple scalar_triple(const Grid& grid, const Field& a, const Field& b_half,
                           const Params& params, const Field& u) {
    ScalarTriple t;
    t.dirichlet = dirichlet_energy(grid, u);
    const double s = params.alpha + params.beta;
    double concave = 0.0, coupling = 0.0;
    for (int i = 0; i < grid.node_count; ++i) {
        concave += a.values[i] * std::pow(std::abs(u.values[i]), params.q);
        coupling += b_half.values[i] * std::pow(std::abs(u.values[i]), s);
    }
    const double cell = grid.dimension == 1 ? grid.h : grid.h * grid.h;
    t.concave = cell * concave;
    t.coupling = cell * coupling;
    return t;
}

double scalar_energy(const ScalarTriple& t, const Params& params) {
    const double s = params.alpha + params.beta;
    return 0.5 * t.dirichlet - (params.lambda / params.q) * t.concave - t.coupling / s;
}

double scalar_m(double t, const ScalarTriple& triple, const Params& params) {
    const double s = params.alpha + params.beta;
    return std::pow(t, 2.0 - params.q) * triple.dirichlet -
           std::pow(t, s - params.q) * triple.coupling;
}

// Branch root of m(t) = lambda A for the scalar ray, by bisection alone.
double scalar_branch_root(const ScalarTriple& triple, const Params& params, NehariClass branch) {
    if (!(triple.dirichlet > 0.0))
        throw std::invalid_argument("scalar_reduction_solve: zero state");
    const double target = params.lambda * triple.concave;
    const double s = params.alpha + params.beta;

    double lo, hi;
    if (triple.coupling <= 0.0) {
        if (branch != NehariClass::Plus || !(triple.concave > 0.0))
            throw BranchUnavailable("scalar_reduction_solve: branch absent for this sign pattern",
                                    FiberingCase::NoCriticalIncreasing);
        hi = 1.0;
        while (scalar_m(hi, triple, params) <= target) hi *= 2.0;
        lo = hi * 0.5;
        while (scalar_m(lo, triple, params) >= target) lo *= 0.5;
    } else {
        // Peak of the scalar m.
        const double ratio =
            (2.0 - params.q) * triple.dirichlet / ((s - params.q) * triple.coupling);
        const double t_star = std::exp(std::log(ratio) / (s - 2.0));
        const double m_peak = scalar_m(t_star, triple, params);
        if (branch == NehariClass::Plus) {
            if (!(triple.concave > 0.0) || !(target < m_peak))
                throw BranchUnavailable("scalar_reduction_solve: Plus root absent",
                                        FiberingCase::NoCriticalDecreasing);
            hi = t_star;
            lo = t_star;
            while (scalar_m(lo, triple, params) >= target) lo *= 0.5;
        } else {
            if (!(target < m_peak))
                throw BranchUnavailable("scalar_reduction_solve: Minus root absent",
                                        FiberingCase::NoCriticalDecreasing);
            lo = t_star;
            hi = 2.0 * t_star;
            while (scalar_m(hi, triple, params) >= target) hi *= 2.0;
        }
    }

    double g_lo = scalar_m(lo, triple, params) - target;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = scalar_m(mid, triple, params) - target;
        if ((gm < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * hi) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

Field scalar_reduction_solve(const Grid& grid, const Field& weight_a, const Field& weight_b_half,
                             const Params& params, NehariClass branch,
                             const SolveOptions& options) {
    if (params.alpha != params.beta)
        throw std::invalid_argument("scalar_reduction_solve: requires alpha = beta");
    const double s = params.alpha + params.beta;

    // Same initializer rule as the system solver: eigenfunction bump masked to
    // the branch weight's positive region.
    const Field& mask = branch == NehariClass::Minus ? weight_b_half : weight_a;
    Field u = zero_field(grid);
    if (grid.dimension == 1) {
        for (int i = 0; i < grid.n; ++i)
            if (mask.values[i] > 0.0)
                u.values[i] = std::sin(std::numbers::pi * node_coordinate(grid, i));
    } else {
        for (int iy = 0; iy < grid.n; ++iy)
            for (int ix = 0; ix < grid.n; ++ix)
                if (mask.values[node_index(grid, ix, iy)] > 0.0)
                    u.values[node_index(grid, ix, iy)] =
                        std::sin(std::numbers::pi * node_coordinate(grid, ix)) *
                        std::sin(std::numbers::pi * node_coordinate(grid, iy));
    }

    auto project = [&](const Field& f) {
        const ScalarTriple triple = scalar_triple(grid, weight_a, weight_b_half, params, f);
        const double t = scalar_branch_root(triple, params, branch);
        Field out = f;
        for (double& v : out.values) v *= t;
        return out;
    };
    auto residual = [&](const Field& f) {
        Field r = apply_laplacian(grid, f);
        for (int i = 0; i < grid.node_count; ++i)
            r.values[i] -= params.lambda * weight_a.values[i] * signed_power(f.values[i], params.q) +
                           weight_b_half.values[i] * signed_power(f.values[i], s);
        return r;
    };

    u = project(u);
    double J = scalar_energy(scalar_triple(grid, weight_a, weight_b_half, params, u), params);
    double step = options.step_size;
    const double min_step = 1e-14 * options.step_size;
    for (int it = 0; it < options.max_outer_iterations; ++it) {
        const Field g = riesz_solve(grid, residual(u), options.riesz_tolerance);
        if (std::sqrt(dirichlet_energy(grid, g)) <= options.gradient_tolerance) return u;
        bool accepted = false;
        while (step >= min_step) {
            Field trial = u;
            for (int i = 0; i < grid.node_count; ++i) trial.values[i] -= step * g.values[i];
            if (options.positivity_enforcement)
                for (double& v : trial.values) v = std::abs(v);
            try {
                const Field projected = project(trial);
                const double J_trial = scalar_energy(
                    scalar_triple(grid, weight_a, weight_b_half, params, projected), params);
                if (J_trial < J) {
                    u = projected;
                    J = J_trial;
                    accepted = true;
                    break;
                }
            } catch (const std::exception&) {
                // shrink below
            }
            step *= options.backtracking;
        }
        if (!accepted) break;
        step = std::min(step * 2.0, 1e3 * options.step_size);
    }
    const Field g = riesz_solve(grid, residual(u), options.riesz_tolerance);
    if (std::sqrt(dirichlet_energy(grid, g)) <= options.gradient_tolerance) return u;
    throw std::runtime_error("scalar_reduction_solve: did not reach the gradient tolerance");
}

}  // namespace nehari::oracle
