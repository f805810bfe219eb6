#include "nehari/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace nehari {

Grid build_grid(int dimension, int n) {
    if (dimension != 1 && dimension != 2)
        throw std::invalid_argument("build_grid: dimension must be 1 or 2, got " +
                                    std::to_string(dimension));
    if (n < 2)
        throw std::invalid_argument("build_grid: need at least 2 interior nodes per axis, got " +
                                    std::to_string(n));
    Grid g;
    g.dimension = dimension;
    g.n = n;
    g.h = 1.0 / (n + 1);
    g.node_count = dimension == 1 ? n : n * n;
    return g;
}

Field zero_field(const Grid& grid) {
    return Field{grid, std::vector<double>(static_cast<size_t>(grid.node_count), 0.0)};
}

Field make_field(const Grid& grid, std::vector<double> values) {
    if (static_cast<int>(values.size()) != grid.node_count)
        throw std::invalid_argument("make_field: expected " + std::to_string(grid.node_count) +
                                    " values, got " + std::to_string(values.size()));
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("make_field: non-finite nodal value");
    return Field{grid, std::move(values)};
}

StatePair scaled(const StatePair& s, double t) {
    StatePair out = s;
    for (double& x : out.u.values) x *= t;
    for (double& x : out.v.values) x *= t;
    return out;
}

double integrate(const Grid& grid, const Field& f) {
    double sum = 0.0;
    for (double v : f.values) sum += v;
    const double cell = grid.dimension == 1 ? grid.h : grid.h * grid.h;
    return cell * sum;
}

double l2_dot(const Grid& grid, const Field& a, const Field& b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) sum += a.values[i] * b.values[i];
    const double cell = grid.dimension == 1 ? grid.h : grid.h * grid.h;
    return cell * sum;
}

double l2_norm(const Grid& grid, const Field& f) { return std::sqrt(l2_dot(grid, f, f)); }

double l2_norm(const Grid& grid, const StatePair& s) {
    return std::sqrt(l2_dot(grid, s.u, s.u) + l2_dot(grid, s.v, s.v));
}

double lp_norm(const Grid& grid, const Field& f, double p) {
    double sum = 0.0;
    for (double v : f.values) sum += std::pow(std::abs(v), p);
    const double cell = grid.dimension == 1 ? grid.h : grid.h * grid.h;
    return std::pow(cell * sum, 1.0 / p);
}

double dirichlet_energy(const Grid& grid, const Field& f) {
    const int n = grid.n;
    const double h = grid.h;
    double sum = 0.0;
    if (grid.dimension == 1) {
        // Edges (i, i+1) for i = 0..n with implicit zeros at both ends.
        double prev = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = f.values[i] - prev;
            sum += d * d;
            prev = f.values[i];
        }
        sum += prev * prev;
        return sum / h;  // sum of (d/h)^2 * h
    }
    // 2-d: (d/h)^2 * h^2 = d^2 over all horizontal and vertical edges.
    for (int iy = 0; iy < n; ++iy) {
        double prev = 0.0;
        for (int ix = 0; ix < n; ++ix) {
            const double d = f.values[node_index(grid, ix, iy)] - prev;
            sum += d * d;
            prev = f.values[node_index(grid, ix, iy)];
        }
        sum += prev * prev;
    }
    for (int ix = 0; ix < n; ++ix) {
        double prev = 0.0;
        for (int iy = 0; iy < n; ++iy) {
            const double d = f.values[node_index(grid, ix, iy)] - prev;
            sum += d * d;
            prev = f.values[node_index(grid, ix, iy)];
        }
        sum += prev * prev;
    }
    return sum;
}

double dirichlet_energy(const Grid& grid, const StatePair& s) {
    return dirichlet_energy(grid, s.u) + dirichlet_energy(grid, s.v);
}

Field apply_laplacian(const Grid& grid, const Field& f) {
    const int n = grid.n;
    const double inv_h2 = 1.0 / (grid.h * grid.h);
    Field out = zero_field(grid);
    if (grid.dimension == 1) {
        for (int i = 0; i < n; ++i) {
            const double left = i > 0 ? f.values[i - 1] : 0.0;
            const double right = i + 1 < n ? f.values[i + 1] : 0.0;
            out.values[i] = (2.0 * f.values[i] - left - right) * inv_h2;
        }
        return out;
    }
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const double c = f.values[node_index(grid, ix, iy)];
            const double left = ix > 0 ? f.values[node_index(grid, ix - 1, iy)] : 0.0;
            const double right = ix + 1 < n ? f.values[node_index(grid, ix + 1, iy)] : 0.0;
            const double down = iy > 0 ? f.values[node_index(grid, ix, iy - 1)] : 0.0;
            const double up = iy + 1 < n ? f.values[node_index(grid, ix, iy + 1)] : 0.0;
            out.values[node_index(grid, ix, iy)] = (4.0 * c - left - right - down - up) * inv_h2;
        }
    }
    return out;
}

namespace {

double raw_dot(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

}  // namespace

Field riesz_solve(const Grid& grid, const Field& rhs, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("riesz_solve: tolerance must be positive");
    Field x = zero_field(grid);
    const double rhs_norm = std::sqrt(raw_dot(rhs.values, rhs.values));
    if (rhs_norm == 0.0) return x;

    Field r = rhs;
    Field p = r;
    double rr = raw_dot(r.values, r.values);
    const double target = tol * rhs_norm;
    const int cap = 10 * grid.node_count;
    for (int it = 0; it < cap; ++it) {
        const Field ap = apply_laplacian(grid, p);
        const double pap = raw_dot(p.values, ap.values);
        const double alpha = rr / pap;
        for (int i = 0; i < grid.node_count; ++i) {
            x.values[i] += alpha * p.values[i];
            r.values[i] -= alpha * ap.values[i];
        }
        const double rr_next = raw_dot(r.values, r.values);
        if (std::sqrt(rr_next) <= target) return x;
        const double beta = rr_next / rr;
        rr = rr_next;
        for (int i = 0; i < grid.node_count; ++i) p.values[i] = r.values[i] + beta * p.values[i];
    }
    throw RieszFailure("riesz_solve: no convergence within " + std::to_string(cap) +
                           " iterations (relative residual " +
                           std::to_string(std::sqrt(rr) / rhs_norm) + ")",
                       std::sqrt(rr) / rhs_norm);
}

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void write_field(std::ostream& out, const Field& f) {
    out << f.grid.dimension << "\n" << f.grid.n << "\n";
    const int rows = f.grid.dimension == 1 ? 1 : f.grid.n;
    const int cols = f.grid.n;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c) out << ' ';
            out << format_value(f.values[static_cast<size_t>(r) * cols + c]);
        }
        out << '\n';
    }
}

void write_field_file(const std::string& path, const Field& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_field_file: cannot open " + path);
    write_field(out, f);
}

Field read_field(std::istream& in) {
    int dimension = 0, n = 0;
    if (!(in >> dimension >> n)) throw std::runtime_error("read_field: malformed header");
    const Grid grid = build_grid(dimension, n);
    std::vector<double> values(static_cast<size_t>(grid.node_count));
    for (double& v : values)
        if (!(in >> v)) throw std::runtime_error("read_field: truncated nodal data");
    return make_field(grid, std::move(values));
}

Field read_field_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_field_file: cannot open " + path);
    return read_field(in);
}

}  // namespace nehari
