#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "test_support.hpp"

using namespace nehari;
using namespace nehari::testing;

TEST_SUITE_BEGIN("grid");

TEST_CASE("build_grid fixes h = 1/(n+1) and the node count") {
    const Grid g1 = build_grid(1, 3);
    CHECK(g1.h == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g1.node_count == 3);

    const Grid g2 = build_grid(2, 4);
    CHECK(g2.h == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(g2.node_count == 16);

    CHECK_THROWS_AS(build_grid(3, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1, 1), std::invalid_argument);
}

TEST_CASE("integrate is the h^d nodal sum") {
    const Grid g1 = build_grid(1, 3);
    Field ones = zero_field(g1);
    std::fill(ones.values.begin(), ones.values.end(), 1.0);
    CHECK(integrate(g1, ones) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(integrate(g1, zero_field(g1)) == 0.0);

    const Grid g2 = build_grid(2, 4);
    Field twos = zero_field(g2);
    std::fill(twos.values.begin(), twos.values.end(), 2.0);
    CHECK(integrate(g2, twos) == doctest::Approx(1.28).epsilon(1e-15));
}

TEST_CASE("dirichlet_energy counts the boundary edges") {
    const Grid g = build_grid(1, 3);
    const Field plateau = make_field(g, {1.0, 1.0, 1.0});
    CHECK(dirichlet_energy(g, StatePair{plateau, zero_field(g)}) ==
          doctest::Approx(8.0).epsilon(1e-15));
    CHECK(dirichlet_energy(g, StatePair{plateau, plateau}) ==
          doctest::Approx(16.0).epsilon(1e-15));
    CHECK(dirichlet_energy(g, StatePair{zero_field(g), zero_field(g)}) == 0.0);
}

TEST_CASE("dirichlet_energy vanishes only for the zero state") {
    std::mt19937_64 rng(7);
    for (const Grid& g : {build_grid(1, 9), build_grid(2, 5)}) {
        for (int k = 0; k < 20; ++k) {
            const StatePair s = random_state(rng, g, 0.01);
            CHECK(dirichlet_energy(g, s) > 0.0);
        }
    }
}

TEST_CASE("apply_laplacian matches the hand stencil") {
    const Grid g = build_grid(1, 3);
    const Field f = make_field(g, {0.0, 1.0, 0.0});
    const Field lap = apply_laplacian(g, f);
    CHECK(lap.values[0] == doctest::Approx(-16.0).epsilon(1e-14));
    CHECK(lap.values[1] == doctest::Approx(32.0).epsilon(1e-14));
    CHECK(lap.values[2] == doctest::Approx(-16.0).epsilon(1e-14));

    const Field lap0 = apply_laplacian(g, zero_field(g));
    for (double v : lap0.values) CHECK(v == 0.0);
}

TEST_CASE("sin(pi x) is a discrete eigenfunction") {
    const Grid g = build_grid(1, 31);
    const Field f = sample_field(g, [](double x) { return std::sin(std::numbers::pi * x); });
    const Field lap = apply_laplacian(g, f);
    const double expected = (2.0 - 2.0 * std::cos(std::numbers::pi * g.h)) / (g.h * g.h);
    for (int i = 0; i < g.n; ++i)
        CHECK(lap.values[i] / f.values[i] == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("laplacian is self-adjoint and consistent with the edge energy") {
    std::mt19937_64 rng(11);
    for (const Grid& g : {build_grid(1, 17), build_grid(2, 6)}) {
        const double cell = g.dimension == 1 ? g.h : g.h * g.h;
        for (int k = 0; k < 25; ++k) {
            const Field f = random_field(rng, g, 0.01);
            const Field h = random_field(rng, g, 0.01);
            const Field lf = apply_laplacian(g, f);
            const Field lh = apply_laplacian(g, h);
            double fg = 0.0, gf = 0.0, ff = 0.0;
            for (int i = 0; i < g.node_count; ++i) {
                fg += lf.values[i] * h.values[i];
                gf += f.values[i] * lh.values[i];
                ff += lf.values[i] * f.values[i];
            }
            CHECK(close_rel(fg, gf, 1e-12));
            CHECK(close_rel(ff * cell, dirichlet_energy(g, f), 1e-12));
        }
    }
}

TEST_CASE("riesz_solve reproduces the Poisson closed form") {
    const Grid g = build_grid(1, 199);
    Field rhs = zero_field(g);
    std::fill(rhs.values.begin(), rhs.values.end(), 1.0);
    const Field w = riesz_solve(g, rhs, 1e-10);
    // -u'' = 1 has u = x(1-x)/2, so u(1/2) = 0.125; node 99 sits at x = 1/2.
    CHECK(w.values[99] == doctest::Approx(0.125).epsilon(1e-4));

    const Field w0 = riesz_solve(g, zero_field(g), 1e-10);
    for (double v : w0.values) CHECK(v == 0.0);
}

TEST_CASE("riesz_solve round-trips random fields") {
    std::mt19937_64 rng(23);
    const Grid g = build_grid(1, 33);
    for (int k = 0; k < 100; ++k) {
        const Field f = random_field(rng, g, 0.01);
        const Field w = riesz_solve(g, apply_laplacian(g, f), 1e-12);
        for (int i = 0; i < g.node_count; ++i)
            CHECK(w.values[i] == doctest::Approx(f.values[i]).epsilon(1e-8));
    }
    const Grid g2 = build_grid(2, 7);
    for (int k = 0; k < 10; ++k) {
        const Field f = random_field(rng, g2, 0.01);
        const Field w = riesz_solve(g2, apply_laplacian(g2, f), 1e-12);
        for (int i = 0; i < g2.node_count; ++i)
            CHECK(w.values[i] == doctest::Approx(f.values[i]).epsilon(1e-8));
    }
}

TEST_CASE("riesz_solve rejects a non-positive tolerance") {
    const Grid g = build_grid(1, 3);
    CHECK_THROWS_AS(riesz_solve(g, zero_field(g), 0.0), std::invalid_argument);
}

TEST_CASE("edge energy of sin(pi x) converges at second order") {
    const double target = std::numbers::pi * std::numbers::pi / 2.0;
    double previous_error = 0.0;
    for (int step = 0; step < 3; ++step) {
        const int n = 25 * (1 << step);
        const Grid g = build_grid(1, n);
        const Field f = sample_field(g, [](double x) { return std::sin(std::numbers::pi * x); });
        const double error = std::abs(dirichlet_energy(g, f) - target);
        if (step > 0) {
            const double rate = previous_error / error;
            CHECK(rate > 3.5);
            CHECK(rate < 4.5);
        }
        previous_error = error;
    }
}

TEST_CASE("field dump/load round-trips exactly") {
    std::mt19937_64 rng(31);
    for (const Grid& g : {build_grid(1, 7), build_grid(2, 4)}) {
        const Field f = random_field(rng, g, 0.01);
        std::stringstream buffer;
        write_field(buffer, f);
        const Field back = read_field(buffer);
        CHECK(back.grid == g);
        for (int i = 0; i < g.node_count; ++i) CHECK(back.values[i] == f.values[i]);
    }
}

TEST_CASE("make_field validates length and finiteness") {
    const Grid g = build_grid(1, 3);
    CHECK_THROWS_AS(make_field(g, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_field(g, {1.0, std::nan(""), 0.0}), std::invalid_argument);
}

TEST_SUITE_END();
