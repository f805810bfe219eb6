#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "nehari/solver.hpp"

namespace nehari::oracle {

// Central difference (f(t+step) - f(t-step)) / (2 step).
double fd_derivative(const std::function<double(double)>& f, double t, double step);

struct ScanResult {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
    // Bracketing intervals of the fibering slope's sign changes, ascending.
    std::vector<std::pair<double, double>> sign_changes;
};

// Dense log-grid scan of the fibering slope, recomputed here from the raw
// triple arithmetic so the main fibering formulas are not on this code path.
// Requires count >= 1000 and 0 < lo < hi.
ScanResult scan_fibering(const IntegralTriple& triple, const Params& params, double lo, double hi,
                         int count);

// Scalar concave-convex solve -lap(u) = lambda a |u|^{q-2} u + b_half |u|^{s-2} u
// with s = alpha+beta, by the one-component Nehari procedure. Cross-checks the
// system solve under the alpha = beta, u = v symmetry; requires alpha = beta.
Field scalar_reduction_solve(const Grid& grid, const Field& weight_a, const Field& weight_b_half,
                             const Params& params, NehariClass branch,
                             const SolveOptions& options);

}  // namespace nehari::oracle
