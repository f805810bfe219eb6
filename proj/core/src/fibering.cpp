#include "nehari/fibering.hpp"

#include <algorithm>
#include <cmath>

namespace nehari {

const char* to_string(NehariClass c) {
    switch (c) {
        case NehariClass::Plus: return "plus";
        case NehariClass::Minus: return "minus";
        case NehariClass::Zero: return "zero";
    }
    return "?";
}

const char* to_string(FiberingCase c) {
    switch (c) {
        case FiberingCase::NoCriticalIncreasing: return "no_critical_increasing";
        case FiberingCase::UniqueMin: return "unique_min";
        case FiberingCase::UniqueMax: return "unique_max";
        case FiberingCase::MinThenMax: return "min_then_max";
        case FiberingCase::NoCriticalDecreasing: return "no_critical_decreasing";
        case FiberingCase::Degenerate: return "degenerate";
    }
    return "?";
}

double fibering_value(double t, const IntegralTriple& triple, const Params& params) {
    if (t == 0.0) return 0.0;
    const double s = params.coupling_sum();
    return 0.5 * t * t * triple.dirichlet -
           params.lambda * std::pow(t, params.q) / params.q * triple.concave -
           std::pow(t, s) / s * triple.coupling;
}

double fibering_slope(double t, const IntegralTriple& triple, const Params& params) {
    const double s = params.coupling_sum();
    return t * triple.dirichlet -
           params.lambda * std::pow(t, params.q - 1.0) * triple.concave -
           std::pow(t, s - 1.0) * triple.coupling;
}

double fibering_curvature(double t, const IntegralTriple& triple, const Params& params) {
    const double s = params.coupling_sum();
    return triple.dirichlet -
           (params.q - 1.0) * params.lambda * std::pow(t, params.q - 2.0) * triple.concave -
           (s - 1.0) * std::pow(t, s - 2.0) * triple.coupling;
}

ManifoldCurvature manifold_curvature_forms(const IntegralTriple& triple, const Params& params) {
    const double s = params.coupling_sum();
    ManifoldCurvature out;
    out.from_coupling = (2.0 - params.q) * triple.dirichlet - (s - params.q) * triple.coupling;
    out.from_concave =
        (2.0 - s) * triple.dirichlet + (s - params.q) * params.lambda * triple.concave;
    return out;
}

double manifold_curvature(const IntegralTriple& triple, const Params& params, double tol) {
    const double residual = std::abs(nehari_constraint(triple, params));
    if (residual > tol * std::max(1.0, triple.dirichlet))
        throw std::domain_error("manifold_curvature: constraint residual " +
                                std::to_string(residual) + " exceeds tolerance; project first");
    return manifold_curvature_forms(triple, params).from_coupling;
}

double root_function(double t, const IntegralTriple& triple, const Params& params) {
    const double s = params.coupling_sum();
    return std::pow(t, 2.0 - params.q) * triple.dirichlet -
           std::pow(t, s - params.q) * triple.coupling;
}

double root_function_slope(double t, const IntegralTriple& triple, const Params& params) {
    const double s = params.coupling_sum();
    return (2.0 - params.q) * std::pow(t, 1.0 - params.q) * triple.dirichlet -
           (s - params.q) * std::pow(t, s - params.q - 1.0) * triple.coupling;
}

PeakPoint root_function_peak(const IntegralTriple& triple, const Params& params) {
    if (!(triple.coupling > 0.0))
        throw std::invalid_argument("root_function_peak: requires a positive coupling integral");
    if (!(triple.dirichlet > 0.0))
        throw std::invalid_argument("root_function_peak: requires a nonzero state");
    const double s = params.coupling_sum();
    // m'(t*) = 0  <=>  t*^{s-2} = (2-q) G / ((s-q) B)
    const double ratio = (2.0 - params.q) * triple.dirichlet / ((s - params.q) * triple.coupling);
    PeakPoint peak;
    peak.t = std::exp(std::log(ratio) / (s - 2.0));
    peak.value = root_function(peak.t, triple, params);
    return peak;
}

namespace {

// Bisection followed by bracket-safeguarded Newton on m(t) - lambda A.
// lo and hi must bracket the root with g(lo) * g(hi) < 0.
double refine_root(const IntegralTriple& triple, const Params& params, double target, double lo,
                   double hi, double g_lo) {
    auto g = [&](double t) { return root_function(t, triple, params) - target; };

    for (int it = 0; it < 80 && (hi - lo) > 1e-6 * lo; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((gm < 0.0) == (g_lo < 0.0)) {
            lo = mid;
            g_lo = gm;
        } else {
            hi = mid;
        }
    }

    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        const double gt = g(t);
        const double slope = root_function_slope(t, triple, params);
        if (slope == 0.0) break;
        double next = t - gt / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // fall back inside the bracket
        if ((g(next) < 0.0) == (g_lo < 0.0))
            lo = next;
        else
            hi = next;
        const double step = std::abs(next - t);
        t = next;
        if (step <= 1e-15 * t) break;
    }
    // Two polishing steps tighten the residual to rounding level.
    for (int it = 0; it < 2; ++it) {
        const double slope = root_function_slope(t, triple, params);
        if (slope == 0.0) break;
        t -= g(t) / slope;
    }
    return t;
}

NehariClass class_at(double t, const IntegralTriple& triple, const Params& params) {
    const double slope = root_function_slope(t, triple, params);
    if (slope > 0.0) return NehariClass::Plus;
    if (slope < 0.0) return NehariClass::Minus;
    return NehariClass::Zero;
}

}  // namespace

FiberingGeometry classify_fibering(const IntegralTriple& triple, const Params& params) {
    if (!(triple.dirichlet > 0.0))
        throw std::invalid_argument("classify_fibering: zero state (dirichlet energy must be > 0)");

    const double target = params.lambda * triple.concave;
    FiberingGeometry geometry;

    if (triple.coupling <= 0.0) {
        if (triple.concave <= 0.0) {
            geometry.kind = FiberingCase::NoCriticalIncreasing;
            return geometry;
        }
        // m is strictly increasing from 0 to +inf: one crossing, a local minimum.
        geometry.kind = FiberingCase::UniqueMin;
        double hi = 1.0;
        while (root_function(hi, triple, params) <= target) hi *= 2.0;
        double lo = std::min(1.0, hi);
        double g_lo = root_function(lo, triple, params) - target;
        while (g_lo >= 0.0) {
            lo *= 0.5;
            g_lo = root_function(lo, triple, params) - target;
        }
        const double t = refine_root(triple, params, target, lo, hi, g_lo);
        geometry.roots.push_back({t, class_at(t, triple, params)});
        return geometry;
    }

    const PeakPoint peak = root_function_peak(triple, params);
    geometry.t_star = peak.t;
    geometry.m_peak = peak.value;

    if (triple.concave <= 0.0) {
        // Single crossing beyond the peak, a local maximum.
        geometry.kind = FiberingCase::UniqueMax;
        double hi = 2.0 * peak.t;
        while (root_function(hi, triple, params) >= target) hi *= 2.0;
        const double t =
            refine_root(triple, params, target, peak.t, hi,
                        root_function(peak.t, triple, params) - target);
        geometry.roots.push_back({t, class_at(t, triple, params)});
        return geometry;
    }

    const double band = kDegeneracyTolerance * std::max(1.0, peak.value);
    if (std::abs(target - peak.value) <= band) {
        geometry.kind = FiberingCase::Degenerate;
        geometry.roots.push_back({peak.t, NehariClass::Zero});
        return geometry;
    }
    if (target > peak.value) {
        geometry.kind = FiberingCase::NoCriticalDecreasing;
        return geometry;
    }

    geometry.kind = FiberingCase::MinThenMax;
    // First root on the increasing side of the peak.
    double lo = peak.t;
    double g_lo = root_function(lo, triple, params) - target;
    while (g_lo >= 0.0) {
        lo *= 0.5;
        g_lo = root_function(lo, triple, params) - target;
    }
    const double t1 = refine_root(triple, params, target, lo, peak.t, g_lo);
    // Second root beyond the peak; m -> -inf guarantees the doubling stops.
    const double s = params.coupling_sum();
    double hi = std::max(2.0 * peak.t,
                         2.0 * std::exp(std::log(2.0 * triple.dirichlet / triple.coupling) /
                                        (s - 2.0)));
    while (root_function(hi, triple, params) >= target) hi *= 2.0;
    const double t2 = refine_root(triple, params, target, peak.t, hi,
                                  root_function(peak.t, triple, params) - target);
    geometry.roots.push_back({t1, class_at(t1, triple, params)});
    geometry.roots.push_back({t2, class_at(t2, triple, params)});
    return geometry;
}

double branch_root(const FiberingGeometry& geometry, NehariClass branch) {
    if (branch == NehariClass::Zero)
        throw std::invalid_argument("branch_root: request Plus or Minus, not Zero");
    for (const FiberRoot& root : geometry.roots)
        if (root.cls == branch) return root.t;
    throw BranchUnavailable("branch_root: no " + std::string(to_string(branch)) +
                                " root; fibering case is " + to_string(geometry.kind),
                            geometry.kind);
}

double branch_root(const IntegralTriple& triple, const Params& params, NehariClass branch) {
    return branch_root(classify_fibering(triple, params), branch);
}

Projection project_to_nehari(const Grid& grid, const Weights& weights, const Params& params,
                             const StatePair& state, NehariClass branch) {
    const IntegralTriple triple = integral_triple(grid, weights, params, state);
    const double t = branch_root(triple, params, branch);
    Projection out;
    out.state = scaled(state, t);
    out.t = t;
    out.cls = branch;
    return out;
}

}  // namespace nehari
