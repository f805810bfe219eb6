#include "nehari/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "nehari/grid.hpp"
#include "nehari/weights.hpp"

namespace nehari {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + value + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config: key '" + key + "' expects true/false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ConfigError("config: key '" + key + "' expects a comma list");
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_list(const std::vector<double>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

std::string resolve_weight_spec(const std::string& spec, const std::string& base_dir) {
    if (spec.rfind("file:", 0) != 0) return spec;
    std::filesystem::path p(spec.substr(5));
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    return "file:" + p.lexically_normal().string();
}

void validate_weight_spec(const std::string& key, const std::string& spec, const Grid& grid) {
    if (spec.rfind("file:", 0) == 0) {
        const std::string path = spec.substr(5);
        if (!std::filesystem::exists(path))
            throw ConfigError("config: key '" + key + "' references missing file '" + path + "'");
        const Field f = read_field_file(path);
        if (!(f.grid == grid))
            throw ConfigError("config: key '" + key + "' file '" + path +
                              "' does not match the configured grid");
        return;
    }
    try {
        weight_from_spec(grid, spec);
    } catch (const std::exception& e) {
        throw ConfigError("config: key '" + key + "': " + e.what());
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& base_dir) {
    std::map<std::string, std::string> kv;
    std::stringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(line_no) +
                              " is not of the form key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (kv.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
        kv[key] = value;
    }

    RunConfig c;
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("dimension")) c.dimension = static_cast<int>(parse_int("dimension", *v));
    if (auto v = take("n")) c.n = static_cast<int>(parse_int("n", *v));
    auto wa = take("weight_a");
    auto wb = take("weight_b");
    if (!wa) throw ConfigError("config: missing required key 'weight_a'");
    if (!wb) throw ConfigError("config: missing required key 'weight_b'");
    c.weight_a = resolve_weight_spec(*wa, base_dir);
    c.weight_b = resolve_weight_spec(*wb, base_dir);
    if (auto v = take("q")) c.q = parse_double("q", *v);
    if (auto v = take("alpha")) c.alpha = parse_double("alpha", *v);
    if (auto v = take("beta")) c.beta = parse_double("beta", *v);
    if (auto v = take("lambda")) c.lambda = parse_double("lambda", *v);
    if (auto v = take("lambda_fraction_of_lambda1"))
        c.lambda_fraction_of_lambda1 = parse_double("lambda_fraction_of_lambda1", *v);
    if (auto v = take("sweep_lambdas")) c.sweep_lambdas = parse_list("sweep_lambdas", *v);
    if (auto v = take("sweep_fractions")) c.sweep_fractions = parse_list("sweep_fractions", *v);
    if (auto v = take("seed")) c.seed = static_cast<std::uint64_t>(parse_int("seed", *v));
    if (auto v = take("out_dir")) c.out_dir = *v;
    if (auto v = take("max_iterations"))
        c.max_iterations = static_cast<int>(parse_int("max_iterations", *v));
    if (auto v = take("step_size")) c.step_size = parse_double("step_size", *v);
    if (auto v = take("backtracking")) c.backtracking = parse_double("backtracking", *v);
    if (auto v = take("gradient_tolerance"))
        c.gradient_tolerance = parse_double("gradient_tolerance", *v);
    if (auto v = take("constraint_tolerance"))
        c.constraint_tolerance = parse_double("constraint_tolerance", *v);
    if (auto v = take("positivity")) c.positivity = parse_bool("positivity", *v);

    if (!kv.empty()) throw ConfigError("config: unknown key '" + kv.begin()->first + "'");

    // Range validation, naming the offending key.
    if (c.dimension != 1 && c.dimension != 2)
        throw ConfigError("config: key 'dimension' must be 1 or 2");
    if (c.n < 2) throw ConfigError("config: key 'n' must be at least 2");
    if (!(c.q > 1.0 && c.q < 2.0)) throw ConfigError("config: key 'q' must lie in (1,2)");
    if (!(c.alpha > 1.0)) throw ConfigError("config: key 'alpha' must exceed 1");
    if (!(c.beta > 1.0)) throw ConfigError("config: key 'beta' must exceed 1");
    if (!(c.alpha + c.beta > 2.0))
        throw ConfigError("config: keys 'alpha'+'beta' must exceed 2");
    if (c.lambda && c.lambda_fraction_of_lambda1)
        throw ConfigError(
            "config: keys 'lambda' and 'lambda_fraction_of_lambda1' conflict; set exactly one");
    if (!c.lambda && !c.lambda_fraction_of_lambda1)
        throw ConfigError("config: set one of 'lambda' or 'lambda_fraction_of_lambda1'");
    if (c.lambda && !(*c.lambda > 0.0))
        throw ConfigError("config: key 'lambda' must be positive");
    if (c.lambda_fraction_of_lambda1 && !(*c.lambda_fraction_of_lambda1 > 0.0))
        throw ConfigError("config: key 'lambda_fraction_of_lambda1' must be positive");
    if (!c.sweep_lambdas.empty() && !c.sweep_fractions.empty())
        throw ConfigError(
            "config: keys 'sweep_lambdas' and 'sweep_fractions' conflict; set at most one");
    if (c.sweep_lambdas.empty() && c.sweep_fractions.empty())
        c.sweep_fractions = {0.1, 0.5, 0.9};
    if (c.max_iterations < 1) throw ConfigError("config: key 'max_iterations' must be positive");
    if (!(c.step_size > 0.0)) throw ConfigError("config: key 'step_size' must be positive");
    if (!(c.backtracking > 0.0 && c.backtracking < 1.0))
        throw ConfigError("config: key 'backtracking' must lie in (0,1)");
    if (!(c.gradient_tolerance > 0.0))
        throw ConfigError("config: key 'gradient_tolerance' must be positive");
    if (!(c.constraint_tolerance > 0.0))
        throw ConfigError("config: key 'constraint_tolerance' must be positive");

    const Grid grid = build_grid(c.dimension, c.n);
    validate_weight_spec("weight_a", c.weight_a, grid);
    validate_weight_spec("weight_b", c.weight_b, grid);
    return c;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string base_dir = std::filesystem::path(path).parent_path().string();
    return parse_config_text(buffer.str(), base_dir.empty() ? "." : base_dir);
}

std::string format_config(const RunConfig& c) {
    std::string out;
    out += "dimension = " + std::to_string(c.dimension) + "\n";
    out += "n = " + std::to_string(c.n) + "\n";
    out += "weight_a = " + c.weight_a + "\n";
    out += "weight_b = " + c.weight_b + "\n";
    out += "q = " + format_double(c.q) + "\n";
    out += "alpha = " + format_double(c.alpha) + "\n";
    out += "beta = " + format_double(c.beta) + "\n";
    if (c.lambda) out += "lambda = " + format_double(*c.lambda) + "\n";
    if (c.lambda_fraction_of_lambda1)
        out += "lambda_fraction_of_lambda1 = " + format_double(*c.lambda_fraction_of_lambda1) +
               "\n";
    if (!c.sweep_lambdas.empty()) out += "sweep_lambdas = " + format_list(c.sweep_lambdas) + "\n";
    if (!c.sweep_fractions.empty())
        out += "sweep_fractions = " + format_list(c.sweep_fractions) + "\n";
    out += "seed = " + std::to_string(c.seed) + "\n";
    out += "out_dir = " + c.out_dir + "\n";
    out += "max_iterations = " + std::to_string(c.max_iterations) + "\n";
    out += "step_size = " + format_double(c.step_size) + "\n";
    out += "backtracking = " + format_double(c.backtracking) + "\n";
    out += "gradient_tolerance = " + format_double(c.gradient_tolerance) + "\n";
    out += "constraint_tolerance = " + format_double(c.constraint_tolerance) + "\n";
    out += std::string("positivity = ") + (c.positivity ? "true" : "false") + "\n";
    return out;
}

}  // namespace nehari
