#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace nehari {

// Uniform grid of interior nodes on the unit interval (d=1) or unit square
// (d=2). The boundary value of every field is implicitly zero, so only
// interior nodes are stored.
struct Grid {
    int dimension = 1;  // 1 or 2
    int n = 2;          // interior nodes per axis
    double h = 1.0 / 3.0;
    int node_count = 2;  // n^dimension

    friend bool operator==(const Grid&, const Grid&) = default;
};

Grid build_grid(int dimension, int n);

// Nodal values at interior nodes, row-major in 2-d (x runs fastest).
struct Field {
    Grid grid;
    std::vector<double> values;
};

Field zero_field(const Grid& grid);

// Checks length and finiteness.
Field make_field(const Grid& grid, std::vector<double> values);

inline double node_coordinate(const Grid& grid, int i) { return (i + 1) * grid.h; }

inline int node_index(const Grid& grid, int ix, int iy) { return iy * grid.n + ix; }

// Samples f(x) (d=1) or f(x, y) (d=2) at the interior nodes.
template <typename F>
Field sample_field(const Grid& grid, F&& f) {
    Field out = zero_field(grid);
    if (grid.dimension == 1) {
        for (int i = 0; i < grid.n; ++i) out.values[i] = f(node_coordinate(grid, i));
    } else {
        for (int iy = 0; iy < grid.n; ++iy)
            for (int ix = 0; ix < grid.n; ++ix)
                out.values[node_index(grid, ix, iy)] =
                    f(node_coordinate(grid, ix), node_coordinate(grid, iy));
    }
    return out;
}

struct StatePair {
    Field u;
    Field v;
};

StatePair scaled(const StatePair& s, double t);

// Midpoint-type quadrature h^d * sum of nodal values; consistent with the
// implicit zero boundary.
double integrate(const Grid& grid, const Field& f);

// Discrete L2 inner product and norm (h^d weighted).
double l2_dot(const Grid& grid, const Field& a, const Field& b);
double l2_norm(const Grid& grid, const Field& f);
double l2_norm(const Grid& grid, const StatePair& s);

// Discrete L^p norm (h^d weighted nodal sum).
double lp_norm(const Grid& grid, const Field& f, double p);

// Squared W-norm of the pair: forward-difference edge sums including the
// boundary edges, so the result vanishes only for the zero state.
double dirichlet_energy(const Grid& grid, const Field& f);
double dirichlet_energy(const Grid& grid, const StatePair& s);

// -Laplace with the standard 3-point (1-d) / 5-point (2-d) stencil and zero
// Dirichlet boundary.
Field apply_laplacian(const Grid& grid, const Field& f);

// Conjugate-gradient failure: the iteration cap was reached before the
// requested tolerance; carries the relative residual that was achieved.
struct RieszFailure : std::runtime_error {
    RieszFailure(const std::string& what, double achieved)
        : std::runtime_error(what), residual(achieved) {}
    double residual;
};

// Solves apply_laplacian(w) = rhs by conjugate gradients to a relative
// residual <= tol. Iteration cap is 10 * node_count.
Field riesz_solve(const Grid& grid, const Field& rhs, double tol = 1e-10);

// Plain-text nodal dump: two header lines (dimension, then n) followed by one
// row per grid line of space-separated decimals.
void write_field(std::ostream& out, const Field& f);
void write_field_file(const std::string& path, const Field& f);
Field read_field(std::istream& in);
Field read_field_file(const std::string& path);

}  // namespace nehari
