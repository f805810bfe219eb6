#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"

using namespace nehari;
using namespace nehari::testing;

namespace {

Weights unit_weights(const Grid& g) {
    return make_weights(weight_from_spec(g, "const:1"), weight_from_spec(g, "const:1"));
}

}  // namespace

TEST_SUITE_BEGIN("energy");

TEST_CASE("make_params validates ranges and derives p_star") {
    const Params p = make_params(1.0, 1.5, 2.0, 2.0);
    CHECK(p.p_star == doctest::Approx(4.0 / 2.5).epsilon(1e-15));
    CHECK_THROWS_AS(make_params(0.0, 1.5, 2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_params(1.0, 2.5, 2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_params(1.0, 1.0, 2.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_params(1.0, 1.5, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_params(1.0, 1.5, 2.0, 0.5), std::invalid_argument);
}

TEST_CASE("weights cache sups and flag sign-definite samples") {
    const Grid g = build_grid(1, 9);
    const Weights w = make_weights(weight_from_spec(g, "sin2pi"), weight_from_spec(g, "const:-2"));
    CHECK(w.a_sup == doctest::Approx(std::sin(2.0 * std::numbers::pi * g.h * 3)).epsilon(1e-12));
    CHECK(w.b_plus_sup == 0.0);
    CHECK_FALSE(w.a_nowhere_positive);
    CHECK(w.b_nowhere_positive);

    const Weights flipped =
        make_weights(weight_from_spec(g, "const:-1"), weight_from_spec(g, "step:0.5"));
    CHECK(flipped.a_nowhere_positive);
    CHECK(flipped.a_sup == 1.0);
    CHECK_FALSE(flipped.b_nowhere_positive);
    CHECK(flipped.b_plus_sup == 1.0);
}

TEST_CASE("integral triple on the hand example") {
    const Grid g = build_grid(1, 3);
    const Weights w = unit_weights(g);
    const Params p = make_params(1.0, 1.5, 2.0, 2.0);
    const Field plateau = make_field(g, {1.0, 1.0, 1.0});
    const StatePair s{plateau, plateau};
    const IntegralTriple t = integral_triple(g, w, p, s);
    CHECK(t.dirichlet == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(t.concave == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(t.coupling == doctest::Approx(0.75).epsilon(1e-14));

    const IntegralTriple z =
        integral_triple(g, w, p, StatePair{zero_field(g), zero_field(g)});
    CHECK(z.dirichlet == 0.0);
    CHECK(z.concave == 0.0);
    CHECK(z.coupling == 0.0);
}

TEST_CASE("triple homogeneity under scaling") {
    std::mt19937_64 rng(41);
    const Grid g = build_grid(1, 21);
    const Weights w = make_weights(weight_from_spec(g, "sin2pi"), weight_from_spec(g, "step:0.3"));
    std::uniform_real_distribution<double> td(0.1, 10.0);
    for (int k = 0; k < 50; ++k) {
        const Params p = random_params(rng);
        const StatePair s = random_state(rng, g, 0.05);
        const double t = td(rng);
        const IntegralTriple base = integral_triple(g, w, p, s);
        const IntegralTriple big = integral_triple(g, w, p, scaled(s, t));
        CHECK(close_rel(big.dirichlet, t * t * base.dirichlet, 1e-12));
        CHECK(close_rel(big.concave, std::pow(t, p.q) * base.concave, 1e-12));
        CHECK(close_rel(big.coupling, std::pow(t, p.coupling_sum()) * base.coupling, 1e-12));
    }
}

TEST_CASE("energy formula and the t = 1 fibering identity") {
    const Params p = make_params(1.0, 1.5, 2.0, 2.0);
    const IntegralTriple t{16.0, 1.5, 0.75};
    CHECK(energy(t, p) == doctest::Approx(6.8125).epsilon(1e-14));
    CHECK(energy(IntegralTriple{}, p) == 0.0);

    std::mt19937_64 rng(43);
    for (int k = 0; k < 30; ++k) {
        const Params params = random_params(rng);
        const IntegralTriple triple = random_triple(rng);
        CHECK(close_rel(energy(triple, params), fibering_value(1.0, triple, params), 1e-13));
    }
}

TEST_CASE("nehari constraint arithmetic") {
    const Params p = make_params(1.0, 1.5, 2.0, 2.0);
    CHECK(nehari_constraint(IntegralTriple{16.0, 1.5, 0.75}, p) ==
          doctest::Approx(13.75).epsilon(1e-14));
    CHECK(nehari_constraint(IntegralTriple{}, p) == 0.0);
}

TEST_CASE("constraint equals the fibering slope at t = 1") {
    std::mt19937_64 rng(47);
    for (int k = 0; k < 100; ++k) {
        const Params p = random_params(rng);
        const IntegralTriple t = random_triple(rng);
        CHECK(close_rel(nehari_constraint(t, p), fibering_slope(1.0, t, p), 1e-12));
    }
}

TEST_CASE("on-manifold energy identities require the constraint") {
    const Params p = make_params(1.0, 1.5, 2.0, 2.0);
    const auto zero = on_manifold_energies(IntegralTriple{}, p);
    CHECK(zero.first == 0.0);
    CHECK(zero.second == 0.0);

    const IntegralTriple off{16.0, 1.5, 0.75};
    const auto [j1, j2] = on_manifold_energies(off, p);
    CHECK(std::abs(j1 - energy(off, p)) > 1.0);  // identity fails off-manifold
    CHECK(std::abs(j2 - energy(off, p)) > 1.0);

    // Substituting B = G - lambda A lands on the manifold; all three agree.
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> gd(0.5, 4.0), ad(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const Params params = random_params(rng);
        IntegralTriple t;
        t.dirichlet = gd(rng);
        t.concave = ad(rng);
        t.coupling = t.dirichlet - params.lambda * t.concave;
        const auto [a, b] = on_manifold_energies(t, params);
        const double J = energy(t, params);
        CHECK(close_rel(a, J, 1e-12));
        CHECK(close_rel(b, J, 1e-12));
    }
}

TEST_CASE("identities hold after projection onto either branch") {
    std::mt19937_64 rng(59);
    const Grid g = build_grid(1, 41);
    const Weights w = unit_weights(g);
    const Params p = make_params(0.05, 1.5, 2.0, 2.0);
    for (int k = 0; k < 25; ++k) {
        const StatePair s = normalized(g, random_state(rng, g, 0.05));
        for (NehariClass branch : {NehariClass::Plus, NehariClass::Minus}) {
            const Projection proj = project_to_nehari(g, w, p, s, branch);
            const IntegralTriple fresh = integral_triple(g, w, p, proj.state);
            CHECK(std::abs(nehari_constraint(fresh, p)) <= 1e-10 * fresh.dirichlet);
            const auto [j1, j2] = on_manifold_energies(fresh, p);
            const double J = energy(fresh, p);
            CHECK(close_to(j1, J, 1e-10));
            CHECK(close_to(j2, J, 1e-10));
        }
    }
}

TEST_CASE("pde residual vanishes at zero and pairs with the energy slope") {
    const Grid g = build_grid(1, 31);
    const Weights w =
        make_weights(weight_from_spec(g, "sin2pi"), weight_from_spec(g, "const:1"));
    const Params p = make_params(0.7, 1.5, 2.0, 2.0);

    const StatePair zero{zero_field(g), zero_field(g)};
    const StatePair r0 = pde_residual(g, w, p, zero);
    for (double v : r0.u.values) CHECK(v == 0.0);
    for (double v : r0.v.values) CHECK(v == 0.0);

    std::mt19937_64 rng(61);
    const double step = 1e-5;
    for (int k = 0; k < 50; ++k) {
        const Params params = random_params(rng);
        const StatePair s = random_state(rng, g, 0.2);  // floor keeps |u|^{q-3} bounded
        const StatePair dir = random_state(rng, g, 0.05);
        const StatePair r = pde_residual(g, w, params, s);
        const double pairing = l2_dot(g, r.u, dir.u) + l2_dot(g, r.v, dir.v);
        auto J_at = [&](double eps) {
            StatePair moved = s;
            for (int i = 0; i < g.node_count; ++i) {
                moved.u.values[i] += eps * dir.u.values[i];
                moved.v.values[i] += eps * dir.v.values[i];
            }
            return energy(g, w, params, moved);
        };
        const double fd = (J_at(step) - J_at(-step)) / (2.0 * step);
        CHECK(close_to(pairing, fd, 1e-6));
    }
}

TEST_CASE("residual splits as stencil minus frozen right-hand side") {
    const Grid g = build_grid(1, 61);
    const Weights w = unit_weights(g);
    const Params p = make_params(0.4, 1.5, 2.0, 2.0);
    std::mt19937_64 rng(67);
    const StatePair frozen = random_state(rng, g, 0.1);
    const StatePair rhs = pde_nonlinear_rhs(g, w, p, frozen);

    // w solves the linear problem against the frozen nonlinearity; feeding it
    // back reproduces the right-hand side within the solver tolerance.
    const Field lifted = riesz_solve(g, rhs.u, 1e-12);
    const Field check = apply_laplacian(g, lifted);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.node_count; ++i) {
        num += (check.values[i] - rhs.u.values[i]) * (check.values[i] - rhs.u.values[i]);
        den += rhs.u.values[i] * rhs.u.values[i];
    }
    CHECK(std::sqrt(num) <= 1e-10 * std::sqrt(den));

    // And pde_residual is exactly that split.
    const StatePair r = pde_residual(g, w, p, frozen);
    const Field lap = apply_laplacian(g, frozen.u);
    for (int i = 0; i < g.node_count; ++i)
        CHECK(r.u.values[i] == doctest::Approx(lap.values[i] - rhs.u.values[i]).epsilon(1e-12));
}

TEST_CASE("signed_power extends continuously through zero") {
    CHECK(signed_power(0.0, 1.5) == 0.0);
    CHECK(signed_power(4.0, 1.5) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(signed_power(-4.0, 1.5) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(signed_power(2.0, 3.0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_SUITE_END();
