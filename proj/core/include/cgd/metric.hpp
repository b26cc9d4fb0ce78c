#pragma once

#include <span>

#include "cgd/linalg.hpp"
#include "cgd/moments.hpp"

namespace cgd {

enum class MetricShape { Diagonal, Full };
enum class MetricStatistic { SecondMoment, Covariance };

/// Metric g = (eps I + clamp0(S))^power, S chosen by `statistic` and
/// restricted to its diagonal when shape is Diagonal.
struct MetricSpec {
    MetricShape shape = MetricShape::Diagonal;
    MetricStatistic statistic = MetricStatistic::SecondMoment;
    double power = 0.5;
    double eps = 1e-8;
};

void validate(const MetricSpec& spec);

/// The moment mode a spec needs to be evaluated.
MomentMode required_mode(const MetricSpec& spec);

/// Diagonal of the selected statistic (unclamped).
Vector metric_statistic_diagonal(const MomentState& state, MetricStatistic statistic);

/// Full selected statistic (unclamped). Throws ModeMismatch for a diagonal state.
SymMatrix metric_statistic_full(const MomentState& state, MetricStatistic statistic);

/// g^{-1} force. power == 0 returns the force unchanged, bit for bit.
Vector precondition(std::span<const double> force, const MomentState& state, const MetricSpec& spec,
                    EigenSolver solver = EigenSolver::Auto);

}  // namespace cgd
