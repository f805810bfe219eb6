#include "nehari/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace nehari {

namespace {

Field bump_masked(const Grid& grid, const Field& weight) {
    Field out = zero_field(grid);
    if (grid.dimension == 1) {
        for (int i = 0; i < grid.n; ++i)
            if (weight.values[i] > 0.0)
                out.values[i] = std::sin(std::numbers::pi * node_coordinate(grid, i));
    } else {
        for (int iy = 0; iy < grid.n; ++iy)
            for (int ix = 0; ix < grid.n; ++ix) {
                const int idx = node_index(grid, ix, iy);
                if (weight.values[idx] > 0.0)
                    out.values[idx] = std::sin(std::numbers::pi * node_coordinate(grid, ix)) *
                                      std::sin(std::numbers::pi * node_coordinate(grid, iy));
            }
    }
    return out;
}

double interior_minimum(const StatePair& s) {
    double m = std::numeric_limits<double>::infinity();
    for (double v : s.u.values) m = std::min(m, v);
    for (double v : s.v.values) m = std::min(m, v);
    return m;
}

double relative_constraint(const IntegralTriple& triple, const Params& params) {
    return std::abs(nehari_constraint(triple, params)) / std::max(1.0, triple.dirichlet);
}

bool stagnated(const std::vector<double>& history, int window, double tol) {
    if (static_cast<int>(history.size()) < window + 1) return false;
    const double recent = history[history.size() - 1 - window] - history.back();
    return recent < tol;
}

}  // namespace

StatePair default_initializer(const Grid& grid, const Weights& weights, const Params& /*params*/,
                              NehariClass branch) {
    const Field& mask = branch == NehariClass::Minus ? weights.b : weights.a;
    Field bump = bump_masked(grid, mask);
    return StatePair{bump, bump};
}

SolutionReport minimize_on_branch(const Grid& grid, const Weights& weights, const Params& params,
                                  NehariClass branch, const StatePair& init,
                                  const SolveOptions& options) {
    if (branch == NehariClass::Zero)
        throw std::invalid_argument("minimize_on_branch: branch must be Plus or Minus");
    if (!(options.backtracking > 0.0 && options.backtracking < 1.0))
        throw std::invalid_argument("minimize_on_branch: backtracking factor must lie in (0,1)");

    const IntegralTriple init_triple = integral_triple(grid, weights, params, init);
    if (branch == NehariClass::Plus && !(init_triple.concave > 0.0))
        throw std::invalid_argument(
            "minimize_on_branch: Plus branch needs a positive concave integral at the initializer");
    if (branch == NehariClass::Minus && !(init_triple.coupling > 0.0))
        throw std::invalid_argument(
            "minimize_on_branch: Minus branch needs a positive coupling integral at the "
            "initializer");

    SolutionReport report;
    report.branch = branch;
    if (options.lambda1_hint && params.lambda >= *options.lambda1_hint)
        report.note = "warning: lambda >= lambda1, branch geometry is not guaranteed; ";

    // Throws BranchUnavailable when the initializer's ray misses the branch.
    Projection projection = project_to_nehari(grid, weights, params, init, branch);
    StatePair state = std::move(projection.state);
    IntegralTriple triple = integral_triple(grid, weights, params, state);
    double J = energy(triple, params);
    report.J_history.push_back(J);
    if (options.on_iterate) options.on_iterate(state, J);

    double step = options.step_size;
    const double min_step = 1e-14 * options.step_size;
    bool converged = false;
    int it = 0;
    for (; it < options.max_outer_iterations; ++it) {
        const StatePair residual = pde_residual(grid, weights, params, state);
        const StatePair gradient{riesz_solve(grid, residual.u, options.riesz_tolerance),
                                 riesz_solve(grid, residual.v, options.riesz_tolerance)};
        report.pde_residual_riesz_norm = std::sqrt(dirichlet_energy(grid, gradient));
        report.constraint_residual = relative_constraint(triple, params);
        if (report.pde_residual_riesz_norm <= options.gradient_tolerance &&
            report.constraint_residual <= options.constraint_tolerance) {
            converged = true;
            break;
        }

        bool accepted = false;
        while (step >= min_step) {
            StatePair trial = state;
            for (int i = 0; i < grid.node_count; ++i) {
                trial.u.values[i] -= step * gradient.u.values[i];
                trial.v.values[i] -= step * gradient.v.values[i];
            }
            if (options.positivity_enforcement) {
                for (double& v : trial.u.values) v = std::abs(v);
                for (double& v : trial.v.values) v = std::abs(v);
            }
            try {
                const Projection p = project_to_nehari(grid, weights, params, trial, branch);
                const IntegralTriple trial_triple = integral_triple(grid, weights, params, p.state);
                const double J_trial = energy(trial_triple, params);
                if (J_trial < J) {
                    state = p.state;
                    triple = trial_triple;
                    J = J_trial;
                    accepted = true;
                    break;
                }
            } catch (const BranchUnavailable&) {
                // step left the branch's quadrant; shrink
            } catch (const std::invalid_argument&) {
                // step collapsed the state; shrink
            }
            step *= options.backtracking;
        }
        if (!accepted) {
            report.note += "line search exhausted without descent";
            break;
        }
        report.J_history.push_back(J);
        if (options.on_iterate) options.on_iterate(state, J);
        step = std::min(step * 2.0, 1e3 * options.step_size);
        if (stagnated(report.J_history, options.stagnation_window, options.stagnation_tolerance)) {
            report.note += "energy stagnated before the gradient tolerance was met";
            break;
        }
    }

    report.state = std::move(state);
    report.J_value = J;
    report.interior_min = interior_minimum(report.state);
    report.iterations = it;
    report.converged = converged;
    if (!converged && report.note.empty()) report.note = "iteration cap reached";
    return report;
}

namespace {

SolutionReport failed_report(const Grid& grid, NehariClass branch, const StatePair& init,
                             const std::string& why) {
    SolutionReport report;
    report.branch = branch;
    report.state = init;
    report.converged = false;
    report.note = why;
    report.interior_min = interior_minimum(init);
    (void)grid;
    return report;
}

}  // namespace

DualSolution solve_dual(const Grid& grid, const Weights& weights, const Params& params,
                        const SolveOptions& options) {
    DualSolution dual;
    for (NehariClass branch : {NehariClass::Plus, NehariClass::Minus}) {
        const StatePair init = default_initializer(grid, weights, params, branch);
        SolutionReport report;
        try {
            report = minimize_on_branch(grid, weights, params, branch, init, options);
        } catch (const BranchUnavailable& e) {
            report = failed_report(grid, branch, init, e.what());
        } catch (const RieszFailure& e) {
            report = failed_report(grid, branch, init, e.what());
        }
        (branch == NehariClass::Plus ? dual.plus : dual.minus) = std::move(report);
    }

    StatePair diff = dual.plus.state;
    for (int i = 0; i < grid.node_count; ++i) {
        diff.u.values[i] -= dual.minus.state.u.values[i];
        diff.v.values[i] -= dual.minus.state.v.values[i];
    }
    const double denom = std::max(l2_norm(grid, dual.plus.state), l2_norm(grid, dual.minus.state));
    dual.separation = denom > 0.0 ? l2_norm(grid, diff) / denom : 0.0;
    return dual;
}

std::vector<SweepRow> lambda_sweep(const Grid& grid, const Weights& weights, const Params& base,
                                   const std::vector<double>& lambdas,
                                   const SolveOptions& options) {
    for (size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0))
            throw std::invalid_argument("lambda_sweep: lambda values must be positive");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw std::invalid_argument("lambda_sweep: lambda values must be ascending");
    }
    std::vector<SweepRow> rows;
    rows.reserve(lambdas.size());
    for (size_t i = 0; i < lambdas.size(); ++i) {
        SolveOptions row_options = options;
        row_options.seed = options.seed + i;
        const DualSolution dual =
            solve_dual(grid, weights, base.with_lambda(lambdas[i]), row_options);
        rows.push_back({lambdas[i], dual.plus.J_value, dual.minus.J_value, dual.plus.converged,
                        dual.minus.converged, dual.separation});
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "lambda,J_plus,J_minus,conv_plus,conv_minus,separation\n";
    char buf[160];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%d,%d,%.17g\n", r.lambda, r.J_plus,
                      r.J_minus, r.conv_plus ? 1 : 0, r.conv_minus ? 1 : 0, r.separation);
        out += buf;
    }
    return out;
}

}  // namespace nehari
