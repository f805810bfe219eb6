#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nehari/thresholds.hpp"

namespace nehari {

struct SolveOptions {
    int max_outer_iterations = 5000;
    double step_size = 1.0;        // initial line-search step
    double backtracking = 0.5;     // shrink factor in (0,1)
    double gradient_tolerance = 1e-8;    // Riesz norm of the Sobolev gradient
    double constraint_tolerance = 1e-10; // relative Nehari residual
    bool positivity_enforcement = true;
    std::uint64_t seed = 0;
    double stagnation_tolerance = 1e-12;
    int stagnation_window = 5;
    double riesz_tolerance = 1e-10;
    std::optional<double> lambda1_hint;  // enables the lambda >= lambda1 warning

    // Test hook, invoked after every accepted (projected) iterate.
    std::function<void(const StatePair&, double)> on_iterate;
};

struct SolutionReport {
    StatePair state;
    NehariClass branch = NehariClass::Plus;
    double J_value = 0.0;
    double constraint_residual = 0.0;       // |G - lambda A - B| / max(1, G)
    double pde_residual_riesz_norm = 0.0;   // W-norm of the Sobolev gradient
    double interior_min = 0.0;              // min over both components
    int iterations = 0;
    bool converged = false;
    std::vector<double> J_history;          // J after every accepted step
    std::string note;                       // warnings / failure reason
};

struct DualSolution {
    SolutionReport plus;
    SolutionReport minus;
    double separation = 0.0;  // relative L2 distance between the two states

    bool both_converged() const { return plus.converged && minus.converged; }
};

// Deterministic first-eigenfunction-shaped bump, masked to the region where
// the branch's driving weight is positive (a for Plus, b for Minus); equal
// components, unit amplitude.
StatePair default_initializer(const Grid& grid, const Weights& weights, const Params& params,
                              NehariClass branch);

// Sobolev-gradient descent on one Nehari branch: project, step against the
// Riesz-lifted residual, backtrack until J decreases after re-projection.
SolutionReport minimize_on_branch(const Grid& grid, const Weights& weights, const Params& params,
                                  NehariClass branch, const StatePair& init,
                                  const SolveOptions& options);

// Both branches from the default initializers. Branch-geometry failures are
// reported as non-converged partial results rather than thrown.
DualSolution solve_dual(const Grid& grid, const Weights& weights, const Params& params,
                        const SolveOptions& options);

struct SweepRow {
    double lambda = 0.0;
    double J_plus = 0.0;
    double J_minus = 0.0;
    bool conv_plus = false;
    bool conv_minus = false;
    double separation = 0.0;
};

// Independent solve_dual per lambda (positive, ascending); rows in input order.
std::vector<SweepRow> lambda_sweep(const Grid& grid, const Weights& weights, const Params& base,
                                   const std::vector<double>& lambdas,
                                   const SolveOptions& options);

// CSV with header lambda,J_plus,J_minus,conv_plus,conv_minus,separation.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace nehari
