#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "cgd/experiment.hpp"

namespace cgd {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double parse_real(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw ConfigError(key, "expected a number, got '" + value + "'");
    return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const char* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(key, "expected a non-negative integer, got '" + value + "'");
    }
    return out;
}

Vector parse_vector(const std::string& key, const std::string& value) {
    Vector out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(key, trim(item)));
    if (out.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
    return out;
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "problem",   "optimizer",          "gamma",      "tau1",
        "tau2",      "power",              "eps",        "shape",
        "statistic", "metric_update_interval", "solver", "steps",
        "seed",      "eig_track_k",        "eig_track_interval", "batch_size",
        "output_dir", "dim",               "start",
    };
    return keys;
}

KeyValues parse_key_values(const std::string& text) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", "line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(content).substr(0, eq));
        std::string value = trim(std::string_view(content).substr(eq + 1));
        if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

KeyValues read_key_values(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("config", "cannot read '" + path.string() + "'");
    std::stringstream ss;
    ss << file.rdbuf();
    return parse_key_values(ss.str());
}

ExperimentConfig build_config(const KeyValues& entries) {
    ExperimentConfig cfg;
    for (const auto& [raw_key, value] : entries) {
        std::string key = raw_key;
        std::replace(key.begin(), key.end(), '-', '_');
        const auto& keys = config_keys();
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ConfigError(raw_key, "unknown key");
        }
        if (value.empty()) throw ConfigError(key, "missing value");

        if (key == "problem") {
            try {
                cfg.problem = parse_suite(value);
            } catch (const ConfigError&) {
                throw ConfigError(key, "expected 'rosenbrock' or 'multiply', got '" + value + "'");
            }
        } else if (key == "optimizer") {
            try {
                cfg.optimizer = parse_preset(value);
            } catch (const UnknownPreset& e) {
                throw ConfigError(key, e.what());
            }
        } else if (key == "gamma") {
            cfg.overrides.gamma = parse_real(key, value);
        } else if (key == "tau1") {
            cfg.overrides.tau1 = parse_real(key, value);
        } else if (key == "tau2") {
            cfg.overrides.tau2 = parse_real(key, value);
        } else if (key == "power") {
            cfg.overrides.power = parse_real(key, value);
        } else if (key == "eps") {
            cfg.overrides.eps = parse_real(key, value);
        } else if (key == "shape") {
            const std::string v = lower(value);
            if (v == "diagonal") cfg.shape = MetricShape::Diagonal;
            else if (v == "full") cfg.shape = MetricShape::Full;
            else throw ConfigError(key, "expected 'diagonal' or 'full', got '" + value + "'");
        } else if (key == "statistic") {
            const std::string v = lower(value);
            if (v == "second_moment" || v == "second-moment") cfg.statistic = MetricStatistic::SecondMoment;
            else if (v == "covariance") cfg.statistic = MetricStatistic::Covariance;
            else throw ConfigError(key, "expected 'second_moment' or 'covariance', got '" + value + "'");
        } else if (key == "metric_update_interval") {
            const auto n = parse_unsigned(key, value);
            if (n < 1 || n > UINT32_MAX) throw ConfigError(key, "must be in [1, 2^32)");
            cfg.metric_update_interval = static_cast<std::uint32_t>(n);
        } else if (key == "solver") {
            const std::string v = lower(value);
            if (v == "auto") cfg.solver = EigenSolver::Auto;
            else if (v == "jacobi") cfg.solver = EigenSolver::Jacobi;
            else if (v == "tridiagonal") cfg.solver = EigenSolver::Tridiagonal;
            else throw ConfigError(key, "expected 'auto', 'jacobi' or 'tridiagonal', got '" + value + "'");
        } else if (key == "steps") {
            cfg.steps = parse_unsigned(key, value);
        } else if (key == "seed") {
            cfg.seed = parse_unsigned(key, value);
        } else if (key == "eig_track_k") {
            cfg.eig_track_k = parse_unsigned(key, value);
        } else if (key == "eig_track_interval") {
            cfg.eig_track_interval = parse_unsigned(key, value);
        } else if (key == "batch_size") {
            cfg.batch_size = parse_unsigned(key, value);
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key == "dim") {
            cfg.dim = parse_unsigned(key, value);
        } else if (key == "start") {
            cfg.start = parse_vector(key, value);
        }
    }
    validate(cfg);
    return cfg;
}

}  // namespace cgd
