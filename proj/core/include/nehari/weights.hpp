#pragma once

#include <string>

#include "nehari/grid.hpp"

namespace nehari {

// Nodal samples of the weight functions a(x) and b(x). Both may change sign;
// the diagnostic flags record when a weight has no positive sample at all.
struct Weights {
    Field a;
    Field b;
    double a_sup = 0.0;       // max |a_i|
    double b_plus_sup = 0.0;  // max(b_i, 0)
    bool a_nowhere_positive = false;
    bool b_nowhere_positive = false;
};

Weights make_weights(Field a, Field b);

// Preset grammar understood by the CLI:
//   const:<c>   constant weight c
//   sin2pi      sin(2*pi*x), sign-changing along the first axis
//   step:<x0>   +1 for x <= x0, -1 beyond
//   file:<path> nodal samples in the plain-text field format
Field weight_from_spec(const Grid& grid, const std::string& spec);

}  // namespace nehari
