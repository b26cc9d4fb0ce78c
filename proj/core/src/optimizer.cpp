#include "cgd/optimizer.hpp"

#include <cmath>

namespace cgd {

void validate(const CgdConfig& cfg) {
    if (!std::isfinite(cfg.gamma) || cfg.gamma <= 0.0) throw DomainError("gamma must be finite and > 0");
    if (cfg.metric_update_interval == 0) throw DomainError("metric_update_interval must be >= 1");
    validate(cfg.ts);
    validate(cfg.spec);
}

OptimizerState OptimizerState::initial(Vector params, const CgdConfig& cfg) {
    OptimizerState s;
    s.moments = MomentState::initial(params.size(), required_mode(cfg.spec));
    s.params = std::move(params);
    return s;
}

Vector update_direction(const MomentState& moments, const CgdConfig& cfg,
                        std::optional<MetricCache>& cache) {
    const MetricSpec& spec = cfg.spec;
    if (spec.shape != MetricShape::Full || spec.power == 0.0) {
        return precondition(moments.m1, moments, spec, cfg.solver);
    }
    if (moments.mode() != MomentMode::Full) {
        throw ModeMismatch("full metric requested from a diagonal moment state");
    }
    const bool stale = !cache || moments.step < cache->refreshed_at ||
                       moments.step - cache->refreshed_at >= cfg.metric_update_interval;
    if (stale) {
        cache = MetricCache{eigendecompose(metric_statistic_full(moments, spec.statistic), cfg.solver),
                            moments.step};
    }
    return apply_inverse_metric(cache->eig, spec.power, spec.eps, moments.m1);
}

OptimizerState step(const OptimizerState& state, std::span<const double> grad, const CgdConfig& cfg) {
    if (grad.size() != state.params.size()) {
        throw DimensionMismatch("step", state.params.size(), grad.size());
    }
    OptimizerState next;
    next.moments = update_moments(state.moments, grad, cfg.ts);
    next.cache = cfg.metric_update_interval > 1 ? state.cache : std::nullopt;

    const Vector direction = update_direction(next.moments, cfg, next.cache);
    if (cfg.metric_update_interval <= 1) next.cache.reset();

    next.params = state.params;
    for (std::size_t i = 0; i < next.params.size(); ++i) next.params[i] -= cfg.gamma * direction[i];
    return next;
}

}  // namespace cgd
