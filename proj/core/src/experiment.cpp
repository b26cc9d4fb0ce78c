#include "cgd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "cgd/random.hpp"

namespace cgd {
namespace {

// Independent streams derived from the run seed.
constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kInitStream = 2;

std::unique_ptr<Problem> make_problem(const ExperimentConfig& cfg) {
    if (cfg.problem == Suite::Rosenbrock) return std::make_unique<Rosenbrock>(cfg.dim);
    return std::make_unique<MultiplyProblem>(cfg.batch_size, mix_seed(cfg.seed, kDataStream));
}

Vector start_point(const ExperimentConfig& cfg) {
    if (cfg.start) return *cfg.start;
    if (cfg.problem == Suite::Multiply) {
        return UnconstrainedNet::initial_params(mix_seed(cfg.seed, kInitStream));
    }
    Vector q(cfg.dim, 0.0);
    if (cfg.dim == 2) q[1] = 0.5;
    return q;
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::size_t problem_dim(const ExperimentConfig& cfg) {
    return cfg.problem == Suite::Rosenbrock ? cfg.dim : UnconstrainedNet::kParamCount;
}

CgdConfig optimizer_config(const ExperimentConfig& cfg) {
    try {
        CgdConfig out = preset(cfg.optimizer, cfg.problem, cfg.overrides);
        if (cfg.shape) out.spec.shape = *cfg.shape;
        if (cfg.statistic) out.spec.statistic = *cfg.statistic;
        out.metric_update_interval = cfg.metric_update_interval;
        out.solver = cfg.solver;
        validate(out);
        return out;
    } catch (const DomainError& e) {
        throw ConfigError("optimizer", e.what());
    }
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.steps < 1) throw ConfigError("steps", "must be >= 1");
    if (cfg.eig_track_interval < 1) throw ConfigError("eig_track_interval", "must be >= 1");
    if (cfg.batch_size < 1) throw ConfigError("batch_size", "must be >= 1");
    if (cfg.problem == Suite::Rosenbrock && cfg.dim < 2) throw ConfigError("dim", "must be >= 2");
    const std::size_t d = problem_dim(cfg);
    if (cfg.start && cfg.start->size() != d) {
        throw ConfigError("start", "expected " + std::to_string(d) + " values, got " +
                                       std::to_string(cfg.start->size()));
    }
    if (cfg.start && !all_finite(*cfg.start)) throw ConfigError("start", "values must be finite");
    const CgdConfig opt = optimizer_config(cfg);
    if (cfg.eig_track_k > d) {
        throw ConfigError("eig_track_k", "must not exceed the problem dimension " + std::to_string(d));
    }
    if (cfg.eig_track_k > 0 && opt.spec.shape != MetricShape::Full) {
        throw ConfigError("eig_track_k", "eigenvalue tracking requires a full metric");
    }
}

Vector track_eigenvalues(const MomentState& moments, std::size_t k, EigenSolver solver) {
    if (k < 1 || k > moments.dim()) {
        throw DomainError("track_eigenvalues: k must be in [1, " + std::to_string(moments.dim()) + "]");
    }
    Vector values = eigenvalues(covariance_full(moments), solver);
    Vector top(k);
    for (std::size_t i = 0; i < k; ++i) top[i] = std::max(values[values.size() - 1 - i], 0.0);
    return top;
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    const CgdConfig opt = optimizer_config(cfg);
    const std::unique_ptr<Problem> problem = make_problem(cfg);
    const std::size_t d = problem->dim();

    RunRecord record;
    record.param_columns = d <= kMaxParamColumns ? d : 0;
    record.eig_columns = cfg.eig_track_k;
    record.rows.reserve(cfg.steps);

    OptimizerState state = OptimizerState::initial(start_point(cfg), opt);
    Vector eig;
    double smoothed = 0.0;

    for (std::uint64_t t = 1; t <= cfg.steps; ++t) {
        const Vector grad = problem->gradient(state.params, t);
        if (!all_finite(grad)) throw NumericalError(t, "gradient is not finite");
        state = step(state, grad, opt);
        if (!all_finite(state.params)) throw NumericalError(t, "parameters are not finite");

        RunRow row;
        row.step = t;
        row.loss = problem->loss(state.params, t);
        if (!std::isfinite(row.loss)) throw NumericalError(t, "loss is not finite");
        smoothed = t == 1 ? row.loss : ema_update(smoothed, row.loss, kPlotTau);
        row.smoothed_loss = smoothed;
        if (record.param_columns > 0) row.params = state.params;
        if (cfg.eig_track_k > 0) {
            if (t == 1 || t % cfg.eig_track_interval == 0) {
                eig = track_eigenvalues(state.moments, cfg.eig_track_k, opt.solver);
            }
            row.eigenvalues = eig;
        }
        record.rows.push_back(std::move(row));
    }
    record.final_params = std::move(state.params);
    return record;
}

ExperimentConfig suite_config(const SuiteOptions& options, Preset preset) {
    ExperimentConfig cfg;
    cfg.problem = options.suite;
    cfg.optimizer = preset;
    cfg.steps = options.steps;
    cfg.seed = options.seed;
    cfg.batch_size = options.batch_size;
    cfg.eig_track_interval = options.eig_track_interval;
    if (preset == Preset::CgdFull) {
        cfg.metric_update_interval = options.full_metric_update_interval;
        cfg.eig_track_k = std::min(options.eig_track_k, problem_dim(cfg));
    }
    return cfg;
}

std::vector<SuiteResult> run_suite(const SuiteOptions& options) {
    std::vector<SuiteResult> results;
    for (Preset p : kAllPresets) results.push_back({p, run_experiment(suite_config(options, p))});
    return results;
}

}  // namespace cgd
