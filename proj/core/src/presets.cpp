#include "cgd/optimizer.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace cgd {
namespace {

struct Row {
    double gamma;
    double tau1;
    double tau2;
    double power;
};

// Tuned hyperparameters per benchmark. tau2 is unused when power == 0.
constexpr Row kRosenbrock[] = {
    {0.0024, 0.0, 0.0, 0.0},     // SGD
    {0.0067, 0.0, 999.0, 0.5},   // RMSProp
    {0.0822, 9.0, 999.0, 0.5},   // Adam
    {0.034, 8.21, 11.78, 0.5},   // AdaBelief
    {0.028, 9.24, 13.6, 0.23},   // CGD diagonal
    {0.012, 10.9, 9.46, 0.39},   // CGD full
};

constexpr Row kMultiply[] = {
    {0.098, 0.0, 0.0, 0.0},
    {0.058, 0.0, 999.0, 0.5},
    {0.099, 9.0, 999.0, 0.5},
    {0.01, 18.3, 9.21, 0.5},
    {0.069, 12.9, 12.3, 0.37},
    {0.0512, 17.1, 15.3, 0.40},
};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

CgdConfig preset(Preset name, Suite suite, const PresetOverrides& overrides) {
    const auto index = static_cast<std::size_t>(name);
    const Row row = suite == Suite::Rosenbrock ? kRosenbrock[index] : kMultiply[index];

    CgdConfig cfg;
    cfg.gamma = row.gamma;
    cfg.ts = {row.tau1, row.tau2};
    cfg.spec.power = row.power;
    cfg.spec.eps = 1e-8;

    switch (name) {
    case Preset::SGD:
    case Preset::RMSProp:
    case Preset::Adam:
        cfg.spec.shape = MetricShape::Diagonal;
        cfg.spec.statistic = MetricStatistic::SecondMoment;
        break;
    case Preset::AdaBelief:
    case Preset::CgdDiagonal:
        cfg.spec.shape = MetricShape::Diagonal;
        cfg.spec.statistic = MetricStatistic::Covariance;
        break;
    case Preset::CgdFull:
        cfg.spec.shape = MetricShape::Full;
        cfg.spec.statistic = MetricStatistic::Covariance;
        break;
    }

    if (overrides.gamma) cfg.gamma = *overrides.gamma;
    if (overrides.tau1) cfg.ts.tau1 = *overrides.tau1;
    if (overrides.tau2) cfg.ts.tau2 = *overrides.tau2;
    if (overrides.power) cfg.spec.power = *overrides.power;
    if (overrides.eps) cfg.spec.eps = *overrides.eps;
    validate(cfg);
    return cfg;
}

CgdConfig preset(Preset name, double gamma, Suite suite) {
    PresetOverrides o;
    o.gamma = gamma;
    return preset(name, suite, o);
}

Preset parse_preset(std::string_view name) {
    const std::string key = lower(name);
    for (Preset p : kAllPresets) {
        if (key == to_string(p)) return p;
    }
    if (key == "cgd_diagonal" || key == "cgddiagonal") return Preset::CgdDiagonal;
    if (key == "cgd_full" || key == "cgdfull") return Preset::CgdFull;
    throw UnknownPreset("unknown optimizer preset '" + std::string(name) + "'");
}

std::string_view to_string(Preset p) {
    switch (p) {
    case Preset::SGD: return "sgd";
    case Preset::RMSProp: return "rmsprop";
    case Preset::Adam: return "adam";
    case Preset::AdaBelief: return "adabelief";
    case Preset::CgdDiagonal: return "cgd-diagonal";
    case Preset::CgdFull: return "cgd-full";
    }
    return "?";
}

Suite parse_suite(std::string_view name) {
    const std::string key = lower(name);
    if (key == "rosenbrock") return Suite::Rosenbrock;
    if (key == "multiply") return Suite::Multiply;
    throw ConfigError("suite", "expected 'rosenbrock' or 'multiply', got '" + std::string(name) + "'");
}

std::string_view to_string(Suite s) {
    return s == Suite::Rosenbrock ? "rosenbrock" : "multiply";
}

}  // namespace cgd
