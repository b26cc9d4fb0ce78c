#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cgd/linalg.hpp"
#include "cgd/metric.hpp"
#include "cgd/moments.hpp"

namespace cgd {

struct CgdConfig {
    double gamma = 1e-3;
    Timescales ts;
    MetricSpec spec;
    /// Reuse the full-metric eigendecomposition for this many steps. 1 refreshes every step.
    std::uint32_t metric_update_interval = 1;
    EigenSolver solver = EigenSolver::Auto;
};

void validate(const CgdConfig& cfg);

/// Eigendecomposition of the full metric statistic, kept between steps when
/// metric_update_interval > 1.
struct MetricCache {
    EigenDecomposition eig;
    std::uint64_t refreshed_at = 0;
};

struct OptimizerState {
    Vector params;
    MomentState moments;
    std::optional<MetricCache> cache;

    /// Fresh moments (m1 = 0, m2 = I) in the mode the config needs.
    static OptimizerState initial(Vector params, const CgdConfig& cfg);
};

/// One discrete CGD update. Moments absorb `grad` first, then
/// params <- params - gamma * g^{-1} m1. `grad` must be the loss gradient at
/// state.params.
OptimizerState step(const OptimizerState& state, std::span<const double> grad, const CgdConfig& cfg);

/// Preconditioned direction g^{-1} m1 for an already-updated moment state.
Vector update_direction(const MomentState& moments, const CgdConfig& cfg,
                        std::optional<MetricCache>& cache);

enum class Preset { SGD, RMSProp, Adam, AdaBelief, CgdDiagonal, CgdFull };

/// Benchmark whose tuned hyperparameters a preset starts from.
enum class Suite { Rosenbrock, Multiply };

inline constexpr Preset kAllPresets[] = {Preset::SGD,       Preset::RMSProp,     Preset::Adam,
                                         Preset::AdaBelief, Preset::CgdDiagonal, Preset::CgdFull};

struct PresetOverrides {
    std::optional<double> gamma;
    std::optional<double> tau1;
    std::optional<double> tau2;
    std::optional<double> power;
    std::optional<double> eps;
};

CgdConfig preset(Preset name, Suite suite = Suite::Rosenbrock, const PresetOverrides& overrides = {});
CgdConfig preset(Preset name, double gamma, Suite suite = Suite::Rosenbrock);

/// Accepts the canonical names below, case-insensitively. Throws UnknownPreset.
Preset parse_preset(std::string_view name);
/// "sgd", "rmsprop", "adam", "adabelief", "cgd-diagonal", "cgd-full".
std::string_view to_string(Preset p);

Suite parse_suite(std::string_view name);
std::string_view to_string(Suite s);

}  // namespace cgd
