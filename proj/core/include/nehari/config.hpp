#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nehari {

// Flat key = value run description. All defaults are materialized by
// parse_config, so format_config(parse_config(path)) round-trips exactly.
struct RunConfig {
    int dimension = 1;
    int n = 2;
    std::string weight_a;  // const:<c> | sin2pi | step:<x0> | file:<path>
    std::string weight_b;
    double q = 1.5;
    double alpha = 2.0;
    double beta = 2.0;
    std::optional<double> lambda;
    std::optional<double> lambda_fraction_of_lambda1;
    std::vector<double> sweep_lambdas;    // absolute values, exclusive with fractions
    std::vector<double> sweep_fractions;  // of lambda1; default 0.1,0.5,0.9
    std::uint64_t seed = 42;
    std::string out_dir = "out";
    int max_iterations = 5000;
    double step_size = 1.0;
    double backtracking = 0.5;
    double gradient_tolerance = 1e-8;
    double constraint_tolerance = 1e-10;
    bool positivity = true;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parses and validates a config file. Unknown keys, range violations and
// missing weight files are reported with the offending key. Relative
// file: weight paths are resolved against the config file's directory.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& base_dir = ".");

// Echo with every default filled in; parsing it reproduces the RunConfig.
std::string format_config(const RunConfig& config);

}  // namespace nehari
