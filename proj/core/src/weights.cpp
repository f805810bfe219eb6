#include "nehari/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nehari {

Weights make_weights(Field a, Field b) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument("make_weights: a and b must share one grid");
    Weights w{std::move(a), std::move(b)};
    bool a_positive = false, b_positive = false;
    for (double v : w.a.values) {
        w.a_sup = std::max(w.a_sup, std::abs(v));
        a_positive = a_positive || v > 0.0;
    }
    for (double v : w.b.values) {
        w.b_plus_sup = std::max(w.b_plus_sup, v);
        b_positive = b_positive || v > 0.0;
    }
    w.b_plus_sup = std::max(w.b_plus_sup, 0.0);
    w.a_nowhere_positive = !a_positive;
    w.b_nowhere_positive = !b_positive;
    return w;
}

Field weight_from_spec(const Grid& grid, const std::string& spec) {
    if (spec.rfind("const:", 0) == 0) {
        const double c = std::stod(spec.substr(6));
        Field f = zero_field(grid);
        std::fill(f.values.begin(), f.values.end(), c);
        return f;
    }
    if (spec == "sin2pi") {
        if (grid.dimension == 1)
            return sample_field(grid, [](double x) { return std::sin(2.0 * std::numbers::pi * x); });
        return sample_field(
            grid, [](double x, double) { return std::sin(2.0 * std::numbers::pi * x); });
    }
    if (spec.rfind("step:", 0) == 0) {
        const double x0 = std::stod(spec.substr(5));
        if (grid.dimension == 1)
            return sample_field(grid, [x0](double x) { return x <= x0 ? 1.0 : -1.0; });
        return sample_field(grid, [x0](double x, double) { return x <= x0 ? 1.0 : -1.0; });
    }
    if (spec.rfind("file:", 0) == 0) {
        Field f = read_field_file(spec.substr(5));
        if (!(f.grid == grid))
            throw std::invalid_argument("weight_from_spec: file '" + spec.substr(5) +
                                        "' does not match the configured grid");
        return f;
    }
    throw std::invalid_argument("weight_from_spec: unknown weight spec '" + spec + "'");
}

}  // namespace nehari
