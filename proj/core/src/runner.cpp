#include "nehari/runner.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <nlohmann/json.hpp>

#include "nehari/oracle.hpp"
#include "nehari/runner.hpp"
#include "nehari/solver.hpp"

namespace nehari {

namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// verify battery
// ---------------------------------------------------------------------------

Params random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> lam(0.1, 1.5), qd(1.15, 1.85), ab(1.1, 2.2);
    return make_params(lam(rng), qd(rng), ab(rng), ab(rng));
}

IntegralTriple random_triple(std::mt19937_64& rng, bool signed_integrals) {
    std::uniform_real_distribution<double> g(0.3, 3.0), mag(0.1, 3.0);
    std::bernoulli_distribution flip(0.5);
    IntegralTriple t;
    t.dirichlet = g(rng);
    t.concave = mag(rng) * (signed_integrals && flip(rng) ? -1.0 : 1.0);
    t.coupling = mag(rng) * (signed_integrals && flip(rng) ? -1.0 : 1.0);
    return t;
}

StatePair random_state(std::mt19937_64& rng, const Grid& grid, double floor_mag) {
    std::uniform_real_distribution<double> mag(floor_mag, 1.5);
    std::bernoulli_distribution flip(0.5);
    StatePair s{zero_field(grid), zero_field(grid)};
    for (double& v : s.u.values) v = mag(rng) * (flip(rng) ? -1.0 : 1.0);
    for (double& v : s.v.values) v = mag(rng) * (flip(rng) ? -1.0 : 1.0);
    return s;
}

VerifySuite verify_master_identity(std::uint64_t seed) {
    VerifySuite suite{"fibering_master_identity", 0, 0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> td(std::log(0.25), std::log(3.0));
    for (int k = 0; k < 1000; ++k) {
        const Params params = random_params(rng);
        const IntegralTriple triple = random_triple(rng, true);
        const double t = std::exp(td(rng));
        const double lhs = fibering_slope(t, triple, params);
        const double rhs = std::pow(t, params.q - 1.0) *
                           (root_function(t, triple, params) - params.lambda * triple.concave);
        ++suite.checked;
        if (std::abs(lhs - rhs) > 1e-12 * std::max(1.0, std::abs(lhs))) ++suite.failed;
    }
    return suite;
}

VerifySuite verify_derivative_chain(std::uint64_t seed) {
    VerifySuite suite{"derivative_chain", 0, 0};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> td(0.3, 3.0);
    const double step = 1e-5;
    for (int k = 0; k < 200; ++k) {
        const Params params = random_params(rng);
        const IntegralTriple triple = random_triple(rng, true);
        const double t = td(rng);
        const double fd1 = oracle::fd_derivative(
            [&](double x) { return fibering_value(x, triple, params); }, t, step);
        const double fd2 = oracle::fd_derivative(
            [&](double x) { return fibering_slope(x, triple, params); }, t, step);
        ++suite.checked;
        const bool ok1 = std::abs(fd1 - fibering_slope(t, triple, params)) <=
                         1e-6 * std::max(1.0, std::abs(fd1));
        const bool ok2 = std::abs(fd2 - fibering_curvature(t, triple, params)) <=
                         1e-6 * std::max(1.0, std::abs(fd2));
        if (!(ok1 && ok2)) ++suite.failed;
    }
    return suite;
}

VerifySuite verify_homogeneity(std::uint64_t seed) {
    VerifySuite suite{"triple_homogeneity", 0, 0};
    std::mt19937_64 rng(seed);
    const Grid grid = build_grid(1, 25);
    const Weights weights =
        make_weights(weight_from_spec(grid, "sin2pi"), weight_from_spec(grid, "const:1"));
    std::uniform_real_distribution<double> td(0.1, 10.0);
    for (int k = 0; k < 100; ++k) {
        const Params params = random_params(rng);
        const StatePair state = random_state(rng, grid, 0.05);
        const double t = td(rng);
        const IntegralTriple base = integral_triple(grid, weights, params, state);
        const IntegralTriple scaled_triple =
            integral_triple(grid, weights, params, scaled(state, t));
        const double s = params.coupling_sum();
        auto close = [](double a, double b) {
            return std::abs(a - b) <= 1e-12 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
        };
        ++suite.checked;
        if (!(close(scaled_triple.dirichlet, t * t * base.dirichlet) &&
              close(scaled_triple.concave, std::pow(t, params.q) * base.concave) &&
              close(scaled_triple.coupling, std::pow(t, s) * base.coupling)))
            ++suite.failed;
    }
    return suite;
}

VerifySuite verify_gradient_consistency(std::uint64_t seed) {
    VerifySuite suite{"gradient_consistency", 0, 0};
    std::mt19937_64 rng(seed);
    const Grid grid = build_grid(1, 31);
    const Weights weights =
        make_weights(weight_from_spec(grid, "sin2pi"), weight_from_spec(grid, "const:1"));
    const double step = 1e-5;
    for (int k = 0; k < 20; ++k) {
        const Params params = random_params(rng);
        const StatePair state = random_state(rng, grid, 0.2);
        const StatePair direction = random_state(rng, grid, 0.05);
        const StatePair residual = pde_residual(grid, weights, params, state);
        const double pairing =
            l2_dot(grid, residual.u, direction.u) + l2_dot(grid, residual.v, direction.v);
        auto J_at = [&](double eps) {
            StatePair moved = state;
            for (int i = 0; i < grid.node_count; ++i) {
                moved.u.values[i] += eps * direction.u.values[i];
                moved.v.values[i] += eps * direction.v.values[i];
            }
            return energy(grid, weights, params, moved);
        };
        const double fd = (J_at(step) - J_at(-step)) / (2.0 * step);
        ++suite.checked;
        if (std::abs(pairing - fd) > 1e-6 * std::max(1.0, std::abs(fd))) ++suite.failed;
    }
    return suite;
}

VerifySuite verify_projection_identities(std::uint64_t seed) {
    VerifySuite suite{"projection_identities", 0, 0};
    std::mt19937_64 rng(seed);
    const Grid grid = build_grid(1, 41);
    const Weights weights =
        make_weights(weight_from_spec(grid, "const:1"), weight_from_spec(grid, "const:1"));
    for (int k = 0; k < 50; ++k) {
        const Params params = make_params(0.05, 1.5, 2.0, 2.0);
        StatePair state = random_state(rng, grid, 0.05);
        // Normalize so the root search is well scaled.
        const double norm = std::sqrt(dirichlet_energy(grid, state));
        for (double& v : state.u.values) v /= norm;
        for (double& v : state.v.values) v /= norm;
        for (NehariClass branch : {NehariClass::Plus, NehariClass::Minus}) {
            bool ok = true;
            try {
                const Projection p = project_to_nehari(grid, weights, params, state, branch);
                const IntegralTriple fresh = integral_triple(grid, weights, params, p.state);
                const double residual = std::abs(nehari_constraint(fresh, params));
                ok = ok && residual <= 1e-10 * fresh.dirichlet;
                const auto [j1, j2] = on_manifold_energies(fresh, params);
                const double J = energy(fresh, params);
                ok = ok && std::abs(j1 - J) <= 1e-10 * std::max(1.0, std::abs(J));
                ok = ok && std::abs(j2 - J) <= 1e-10 * std::max(1.0, std::abs(J));
                const double curvature = fibering_curvature(1.0, fresh, params);
                const double via_m = std::pow(p.t, params.q + 1.0) *
                                     root_function_slope(
                                         p.t, integral_triple(grid, weights, params, state),
                                         params);
                ok = ok && std::abs(curvature - via_m) <=
                               1e-10 * std::max(1.0, std::abs(curvature));
            } catch (const BranchUnavailable&) {
                continue;  // geometry may legitimately miss a branch
            }
            ++suite.checked;
            if (!ok) ++suite.failed;
        }
    }
    return suite;
}

VerifySuite verify_root_counts(std::uint64_t seed) {
    VerifySuite suite{"quadrant_root_counts", 0, 0};
    std::mt19937_64 rng(seed);
    for (int k = 0; k < 200; ++k) {
        const Params params = random_params(rng);
        const IntegralTriple triple = random_triple(rng, true);
        if (triple.coupling > 0.0 && triple.concave > 0.0) {
            const PeakPoint peak = root_function_peak(triple, params);
            if (std::abs(params.lambda * triple.concave - peak.value) <=
                1e-3 * std::max(1.0, peak.value))
                continue;  // skip the degeneracy band
        }
        const FiberingGeometry geometry = classify_fibering(triple, params);
        const oracle::ScanResult scan =
            oracle::scan_fibering(triple, params, 1e-12, 1e12, 100000);
        ++suite.checked;
        if (scan.sign_changes.size() != geometry.roots.size()) ++suite.failed;
    }
    return suite;
}

// ---------------------------------------------------------------------------
// subcommand plumbing
// ---------------------------------------------------------------------------

struct Problem {
    Grid grid;
    Weights weights;
    Params params;
    Thresholds thresholds;
    SolveOptions options;
};

SolveOptions solve_options_from(const RunConfig& config, std::uint64_t seed) {
    SolveOptions options;
    options.max_outer_iterations = config.max_iterations;
    options.step_size = config.step_size;
    options.backtracking = config.backtracking;
    options.gradient_tolerance = config.gradient_tolerance;
    options.constraint_tolerance = config.constraint_tolerance;
    options.positivity_enforcement = config.positivity;
    options.seed = seed;
    return options;
}

Problem build_problem(const RunConfig& config, std::uint64_t seed) {
    Problem p{build_grid(config.dimension, config.n),
              {},
              make_params(1.0, config.q, config.alpha, config.beta),
              {},
              solve_options_from(config, seed)};
    p.weights = make_weights(weight_from_spec(p.grid, config.weight_a),
                             weight_from_spec(p.grid, config.weight_b));
    AscentOptions ascent;
    ascent.seed = seed;
    p.thresholds = compute_thresholds(p.grid, p.weights, p.params, ascent);
    const double lambda = config.lambda ? *config.lambda
                                        : *config.lambda_fraction_of_lambda1 *
                                              p.thresholds.lambda1;
    p.params = p.params.with_lambda(lambda);
    p.options.lambda1_hint = p.thresholds.lambda1;
    return p;
}

json grid_json(const Grid& grid) {
    return json{{"dimension", grid.dimension}, {"n", grid.n}};
}

json report_json(const SolutionReport& report) {
    return json{{"J", report.J_value},
                {"constraint_residual", report.constraint_residual},
                {"pde_residual_riesz_norm", report.pde_residual_riesz_norm},
                {"interior_min", report.interior_min},
                {"iterations", report.iterations},
                {"converged", report.converged},
                {"note", report.note}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

int subcommand_solve(const RunConfig& config, const std::filesystem::path& out,
                     std::uint64_t seed) {
    const Problem p = build_problem(config, seed);
    const DualSolution dual = solve_dual(p.grid, p.weights, p.params, p.options);

    write_field_file((out / "u_plus.txt").string(), dual.plus.state.u);
    write_field_file((out / "v_plus.txt").string(), dual.plus.state.v);
    write_field_file((out / "u_minus.txt").string(), dual.minus.state.u);
    write_field_file((out / "v_minus.txt").string(), dual.minus.state.v);

    json summary{{"schema", 1},
                 {"grid", grid_json(p.grid)},
                 {"weights", {{"a", config.weight_a}, {"b", config.weight_b}}},
                 {"params",
                  {{"lambda", p.params.lambda},
                   {"q", p.params.q},
                   {"alpha", p.params.alpha},
                   {"beta", p.params.beta},
                   {"p_star", p.params.p_star}}},
                 {"lambda1", p.thresholds.lambda1},
                 {"delta1_at_lambda", p.thresholds.delta1(p.params.lambda)},
                 {"plus", report_json(dual.plus)},
                 {"minus", report_json(dual.minus)},
                 {"separation", dual.separation},
                 {"fields",
                  {{"u_plus", "u_plus.txt"},
                   {"v_plus", "v_plus.txt"},
                   {"u_minus", "u_minus.txt"},
                   {"v_minus", "v_minus.txt"}}},
                 {"seed", seed}};
    write_json(out / "solution.json", summary);
    std::cout << "solve: J_plus=" << dual.plus.J_value << " J_minus=" << dual.minus.J_value
              << " separation=" << dual.separation
              << (dual.both_converged() ? "" : " (partial)") << "\n";
    return dual.both_converged() ? 0 : 1;
}

int subcommand_sweep(const RunConfig& config, const std::filesystem::path& out,
                     std::uint64_t seed) {
    const Problem p = build_problem(config, seed);
    std::vector<double> lambdas = config.sweep_lambdas;
    if (lambdas.empty())
        for (double f : config.sweep_fractions) lambdas.push_back(f * p.thresholds.lambda1);
    const std::vector<SweepRow> rows =
        lambda_sweep(p.grid, p.weights, p.params, lambdas, p.options);
    write_text(out / "sweep.csv", sweep_csv(rows));
    bool all = true;
    for (const SweepRow& r : rows) all = all && r.conv_plus && r.conv_minus;
    std::cout << "sweep: " << rows.size() << " rows, lambda1=" << p.thresholds.lambda1
              << (all ? "" : " (partial rows)") << "\n";
    return all ? 0 : 1;
}

int subcommand_classify(const RunConfig& config, const std::filesystem::path& out,
                        std::uint64_t seed) {
    const Problem p = build_problem(config, seed);
    const StatePair init = default_initializer(p.grid, p.weights, p.params, NehariClass::Plus);
    const IntegralTriple triple = integral_triple(p.grid, p.weights, p.params, init);
    const FiberingGeometry geometry = classify_fibering(triple, p.params);

    json roots = json::array();
    for (const FiberRoot& r : geometry.roots)
        roots.push_back(json{{"t", r.t}, {"class", to_string(r.cls)}});
    json j{{"schema", 1},
           {"initializer", "plus"},
           {"lambda", p.params.lambda},
           {"triple",
            {{"dirichlet", triple.dirichlet},
             {"concave", triple.concave},
             {"coupling", triple.coupling}}},
           {"case", to_string(geometry.kind)},
           {"degenerate", geometry.degenerate()},
           {"roots", roots}};
    if (geometry.t_star) j["t_star"] = *geometry.t_star;
    if (geometry.m_peak) j["m_peak"] = *geometry.m_peak;
    write_json(out / "geometry.json", j);
    std::cout << "classify: case=" << to_string(geometry.kind) << " roots=" << geometry.roots.size()
              << "\n";
    return 0;
}

int subcommand_constants(const RunConfig& config, const std::filesystem::path& out,
                         std::uint64_t seed) {
    const Problem p = build_problem(config, seed);
    json j{{"schema", 1},
           {"grid", grid_json(p.grid)},
           {"q", p.params.q},
           {"alpha", p.params.alpha},
           {"beta", p.params.beta},
           {"S_q", p.thresholds.S_q},
           {"S_pq", p.thresholds.S_pq},
           {"delta", p.thresholds.delta},
           {"c", p.thresholds.c},
           {"lambda1", p.thresholds.lambda1},
           {"lambda", p.params.lambda},
           {"delta1_at_lambda", p.thresholds.delta1(p.params.lambda)},
           {"seed", seed}};
    write_json(out / "constants.json", j);
    std::cout << "constants: lambda1=" << p.thresholds.lambda1 << " delta=" << p.thresholds.delta
              << "\n";
    return 0;
}

int subcommand_verify(const RunConfig&, const std::filesystem::path& out, std::uint64_t seed) {
    const std::vector<VerifySuite> suites = run_verify_suites(seed);
    json rows = json::array();
    bool all = true;
    for (const VerifySuite& s : suites) {
        rows.push_back(json{{"name", s.name}, {"checked", s.checked}, {"failed", s.failed}});
        all = all && s.failed == 0;
        std::cout << (s.failed == 0 ? "[pass] " : "[FAIL] ") << s.name << ": " << s.checked
                  << " checked, " << s.failed << " failed\n";
    }
    write_json(out / "verify.json", json{{"schema", 1},
                                         {"seed", seed},
                                         {"suites", rows},
                                         {"all_passed", all}});
    return all ? 0 : 1;
}

}  // namespace

std::vector<VerifySuite> run_verify_suites(std::uint64_t seed) {
    return {verify_master_identity(seed + 1), verify_derivative_chain(seed + 2),
            verify_homogeneity(seed + 3),     verify_gradient_consistency(seed + 4),
            verify_projection_identities(seed + 5), verify_root_counts(seed + 6)};
}

int run_subcommand(const std::string& name, const RunConfig& config, const std::string& out_dir,
                   std::optional<std::uint64_t> seed_override) {
    const std::filesystem::path out(out_dir);
    std::filesystem::create_directories(out);
    const std::uint64_t seed = seed_override.value_or(config.seed);
    try {
        if (name == "solve") return subcommand_solve(config, out, seed);
        if (name == "sweep") return subcommand_sweep(config, out, seed);
        if (name == "classify") return subcommand_classify(config, out, seed);
        if (name == "constants") return subcommand_constants(config, out, seed);
        if (name == "verify") return subcommand_verify(config, out, seed);
        throw std::invalid_argument("unknown subcommand '" + name + "'");
    } catch (const std::exception& e) {
        write_json(out / "error.json", json{{"schema", 1}, {"error", e.what()}});
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace nehari
