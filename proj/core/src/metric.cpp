#include "cgd/metric.hpp"

#include <cmath>

namespace cgd {

void validate(const MetricSpec& spec) {
    if (!std::isfinite(spec.eps) || spec.eps <= 0.0) throw DomainError("eps must be finite and > 0");
    if (!std::isfinite(spec.power)) throw DomainError("power must be finite");
}

MomentMode required_mode(const MetricSpec& spec) {
    return spec.shape == MetricShape::Full ? MomentMode::Full : MomentMode::Diagonal;
}

Vector metric_statistic_diagonal(const MomentState& state, MetricStatistic statistic) {
    return statistic == MetricStatistic::Covariance ? covariance_diagonal(state)
                                                    : state.m2_diagonal();
}

SymMatrix metric_statistic_full(const MomentState& state, MetricStatistic statistic) {
    return statistic == MetricStatistic::Covariance ? covariance_full(state) : state.full_m2();
}

Vector precondition(std::span<const double> force, const MomentState& state, const MetricSpec& spec,
                    EigenSolver solver) {
    if (force.size() != state.dim()) throw DimensionMismatch("precondition", state.dim(), force.size());
    if (spec.shape == MetricShape::Full && state.mode() != MomentMode::Full) {
        throw ModeMismatch("full metric requested from a diagonal moment state");
    }
    if (spec.power == 0.0) return Vector(force.begin(), force.end());

    if (spec.shape == MetricShape::Diagonal) {
        return apply_inverse_metric_diagonal(metric_statistic_diagonal(state, spec.statistic),
                                             spec.power, spec.eps, force);
    }
    return apply_inverse_metric(metric_statistic_full(state, spec.statistic), spec.power, spec.eps,
                                force, solver);
}

}  // namespace cgd
