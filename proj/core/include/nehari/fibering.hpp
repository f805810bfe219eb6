#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nehari/energy.hpp"

namespace nehari {

// Nehari label of a ray critical point: local minimum (Plus), local maximum
// (Minus) or inflection (Zero) of the fibering map at the scaled state.
enum class NehariClass { Plus, Minus, Zero };

const char* to_string(NehariClass c);

enum class FiberingCase {
    NoCriticalIncreasing,  // concave <= 0, coupling <= 0: slope positive everywhere
    UniqueMin,             // concave > 0, coupling <= 0
    UniqueMax,             // concave <= 0, coupling > 0
    MinThenMax,            // both positive, lambda below the peak
    NoCriticalDecreasing,  // both positive, lambda above the peak
    Degenerate,            // both positive, lambda within tolerance of the peak
};

const char* to_string(FiberingCase c);

struct FiberRoot {
    double t = 0.0;
    NehariClass cls = NehariClass::Zero;
};

// Everything classify_fibering learns about the ray through one state.
struct FiberingGeometry {
    FiberingCase kind = FiberingCase::NoCriticalIncreasing;
    std::vector<FiberRoot> roots;        // ascending in t
    std::optional<double> t_star;        // argmax of the root function (coupling > 0)
    std::optional<double> m_peak;        // its value there
    bool degenerate() const { return kind == FiberingCase::Degenerate; }
};

// Fibering map t -> J(t u, t v) and its first two t-derivatives, all written
// on the integral triple of the unscaled state.
double fibering_value(double t, const IntegralTriple& triple, const Params& params);
double fibering_slope(double t, const IntegralTriple& triple, const Params& params);
double fibering_curvature(double t, const IntegralTriple& triple, const Params& params);

// Curvature at t = 1 for a state on the manifold, in its two equivalent
// forms: (2-q) G - (s-q) B, and (2-s) G + (s-q) lambda A with s = alpha+beta.
struct ManifoldCurvature {
    double from_coupling = 0.0;
    double from_concave = 0.0;
};

ManifoldCurvature manifold_curvature_forms(const IntegralTriple& triple, const Params& params);

// Returns the coupling form; throws std::domain_error when the constraint
// residual exceeds tol * max(1, G) (the identity is meaningless off-manifold).
double manifold_curvature(const IntegralTriple& triple, const Params& params, double tol = 1e-8);

// Root function m with m(t) = lambda A exactly at the ray's Nehari multiples:
//   m(t) = t^{2-q} G - t^{s-q} B,   m'(t) = (2-q) t^{1-q} G - (s-q) t^{s-q-1} B.
double root_function(double t, const IntegralTriple& triple, const Params& params);
double root_function_slope(double t, const IntegralTriple& triple, const Params& params);

struct PeakPoint {
    double t = 0.0;
    double value = 0.0;
};

// Maximum of the root function; requires coupling > 0.
PeakPoint root_function_peak(const IntegralTriple& triple, const Params& params);

// Relative tolerance of the |lambda A - m_peak| degeneracy band.
inline constexpr double kDegeneracyTolerance = 1e-9;

// Sign-quadrant analysis of (A, B) with refined roots and their classes.
FiberingGeometry classify_fibering(const IntegralTriple& triple, const Params& params);

// Root t of the geometry carrying the requested branch class.
// Throws BranchUnavailable naming the actual case when absent.
struct BranchUnavailable : std::runtime_error {
    BranchUnavailable(const std::string& what, FiberingCase actual)
        : std::runtime_error(what), kind(actual) {}
    FiberingCase kind;
};

double branch_root(const FiberingGeometry& geometry, NehariClass branch);
double branch_root(const IntegralTriple& triple, const Params& params, NehariClass branch);

struct Projection {
    StatePair state;
    double t = 1.0;
    NehariClass cls = NehariClass::Zero;
};

// Scales the state onto the requested Nehari branch.
Projection project_to_nehari(const Grid& grid, const Weights& weights, const Params& params,
                             const StatePair& state, NehariClass branch);

}  // namespace nehari
