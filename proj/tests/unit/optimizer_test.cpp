#include <cmath>
#include <random>

#include "cgd/optimizer.hpp"
#include "cgd/problems.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace cgd;

namespace {

std::vector<Vector> rosenbrock_run(const CgdConfig& cfg, Vector q0, int steps) {
    OptimizerState s = OptimizerState::initial(std::move(q0), cfg);
    std::vector<Vector> out;
    for (int t = 0; t < steps; ++t) {
        s = step(s, rosenbrock_grad(s.params), cfg);
        out.push_back(s.params);
    }
    return out;
}

}  // namespace

TEST_CASE("step: SGD example from the Rosenbrock start point") {
    const CgdConfig cfg = preset(Preset::SGD, 0.0024);
    const Vector grad = rosenbrock_grad(Vector{0.0, 0.5});
    CHECK(testing::max_abs_diff(grad, finite_diff_grad(Rosenbrock(2), Vector{0.0, 0.5}, 1e-6)) <= 1e-4);
    const auto s = step(OptimizerState::initial({0.0, 0.5}, cfg), grad, cfg);
    CHECK(s.params[0] == doctest::Approx(0.0048).epsilon(1e-14));
    CHECK(s.params[1] == doctest::Approx(0.26).epsilon(1e-14));
}

TEST_CASE("step: zero gradient is a fixed point for every preset") {
    for (Preset p : kAllPresets) {
        for (Suite suite : {Suite::Rosenbrock, Suite::Multiply}) {
            const CgdConfig cfg = preset(p, suite);
            OptimizerState s = OptimizerState::initial({0.3, -1.2, 4.0}, cfg);
            for (int t = 0; t < 25; ++t) {
                s = step(s, Vector(3, 0.0), cfg);
                CHECK(s.params == Vector{0.3, -1.2, 4.0});
                CHECK(s.moments.m1 == Vector(3, 0.0));
            }
        }
    }
}

TEST_CASE("step: first Adam step unrolled by hand") {
    const CgdConfig cfg = preset(Preset::Adam, Suite::Rosenbrock);
    const double tau1 = cfg.ts.tau1, tau2 = cfg.ts.tau2, gamma = cfg.gamma, eps = cfg.spec.eps;
    const Vector g = {-2.0, 100.0};
    const Vector q0 = {0.0, 0.5};
    const auto s = step(OptimizerState::initial(q0, cfg), g, cfg);
    for (std::size_t i = 0; i < 2; ++i) {
        const double m = g[i] / (1.0 + tau1);
        const double v = g[i] * g[i] / (1.0 + tau2) + tau2 / (1.0 + tau2);
        CHECK(s.params[i] == doctest::Approx(q0[i] - gamma * m / std::sqrt(v + eps)).epsilon(1e-14));
    }
}

TEST_CASE("preset: tabulated hyperparameters") {
    const CgdConfig adam = preset(Preset::Adam, 0.0822);
    CHECK(adam.ts.tau1 == 9.0);
    CHECK(adam.ts.tau2 == 999.0);
    CHECK(adam.spec.power == 0.5);
    CHECK(adam.spec.shape == MetricShape::Diagonal);
    CHECK(adam.spec.statistic == MetricStatistic::SecondMoment);

    const CgdConfig full = preset(Preset::CgdFull, 0.012);
    CHECK(full.ts.tau1 == 10.9);
    CHECK(full.ts.tau2 == 9.46);
    CHECK(full.spec.power == 0.39);
    CHECK(full.spec.shape == MetricShape::Full);
    CHECK(full.spec.statistic == MetricStatistic::Covariance);

    const CgdConfig sgd = preset(Preset::SGD, 0.5);
    CHECK(sgd.spec.power == 0.0);
    CHECK(sgd.ts.tau1 == 0.0);
    CHECK(sgd.gamma == 0.5);

    const CgdConfig rms = preset(Preset::RMSProp, Suite::Multiply);
    CHECK(rms.gamma == 0.058);
    CHECK(rms.ts.tau1 == 0.0);
    CHECK(rms.ts.tau2 == 999.0);

    const CgdConfig belief = preset(Preset::AdaBelief, Suite::Multiply);
    CHECK(belief.spec.statistic == MetricStatistic::Covariance);
    CHECK(belief.spec.shape == MetricShape::Diagonal);
    CHECK(belief.ts.tau1 == 18.3);

    const CgdConfig diag = preset(Preset::CgdDiagonal, Suite::Multiply);
    CHECK(diag.spec.power == 0.37);
    CHECK(diag.gamma == 0.069);
    CHECK(preset(Preset::CgdFull, Suite::Multiply).spec.power == 0.40);

    for (Preset p : kAllPresets) CHECK(preset(p).spec.eps == 1e-8);

    PresetOverrides o;
    o.power = 0.7;
    o.tau2 = 3.0;
    const CgdConfig custom = preset(Preset::CgdDiagonal, Suite::Rosenbrock, o);
    CHECK(custom.spec.power == 0.7);
    CHECK(custom.ts.tau2 == 3.0);
    CHECK(custom.ts.tau1 == 9.24);
}

TEST_CASE("preset: names") {
    for (Preset p : kAllPresets) CHECK(parse_preset(to_string(p)) == p);
    CHECK(parse_preset("Adam") == Preset::Adam);
    CHECK(parse_preset("cgd_full") == Preset::CgdFull);
    CHECK_THROWS_AS(parse_preset("adamw"), UnknownPreset);
    PresetOverrides bad;
    bad.gamma = -1.0;
    CHECK_THROWS_AS(preset(Preset::Adam, Suite::Rosenbrock, bad), DomainError);
}

TEST_CASE("step: SGD preset is exactly plain gradient descent") {
    std::mt19937_64 rng(3);
    const CgdConfig cfg = preset(Preset::SGD, 0.0371);
    Vector q(7);
    for (double& x : q) x = uniform(rng, -3.0, 3.0);
    OptimizerState s = OptimizerState::initial(q, cfg);
    for (int t = 0; t < 200; ++t) {
        Vector g(7);
        for (double& x : g) x = uniform(rng, -50.0, 50.0);
        s = step(s, g, cfg);
        for (std::size_t i = 0; i < 7; ++i) q[i] = q[i] - 0.0371 * g[i];
        REQUIRE(s.params == q);
    }
}

TEST_CASE("step: SGD step is linear in the learning rate") {
    std::mt19937_64 rng(10);
    Vector g(5);
    for (double& x : g) x = uniform(rng, -10.0, 10.0);
    const Vector origin(5, 0.0);
    const auto one = step(OptimizerState::initial(origin, preset(Preset::SGD, 0.01)), g, preset(Preset::SGD, 0.01));
    const auto two = step(OptimizerState::initial(origin, preset(Preset::SGD, 0.02)), g, preset(Preset::SGD, 0.02));
    for (std::size_t i = 0; i < 5; ++i) CHECK(two.params[i] - origin[i] == 2.0 * (one.params[i] - origin[i]));
}

TEST_CASE("step: classical presets match textbook references on Rosenbrock") {
    struct Case {
        Preset preset;
        testing::ReferenceMethod method;
    };
    const Case cases[] = {{Preset::SGD, testing::ReferenceMethod::SGD},
                          {Preset::RMSProp, testing::ReferenceMethod::RMSProp},
                          {Preset::Adam, testing::ReferenceMethod::Adam},
                          {Preset::AdaBelief, testing::ReferenceMethod::AdaBeliefVariance}};
    for (const auto& c : cases) {
        const CgdConfig cfg = preset(c.preset, Suite::Rosenbrock);
        const auto got = rosenbrock_run(cfg, {0.0, 0.5}, 100);
        const auto want = testing::reference_trajectory(c.method, cfg.gamma, cfg.ts.tau1, cfg.ts.tau2,
                                                        cfg.spec.eps, {0.0, 0.5}, 100);
        double worst = 0.0;
        for (std::size_t t = 0; t < got.size(); ++t) worst = std::max(worst, testing::max_abs_diff(got[t], want[t]));
        CAPTURE(to_string(c.preset));
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("step: deterministic") {
    for (Preset p : kAllPresets) {
        const CgdConfig cfg = preset(p);
        CHECK(rosenbrock_run(cfg, {0.0, 0.5}, 60) == rosenbrock_run(cfg, {0.0, 0.5}, 60));
    }
}

TEST_CASE("step: full CGD commutes with a rotation of coordinates") {
    std::mt19937_64 rng(2024);
    const std::size_t n = 5;
    const auto basis = testing::random_orthogonal(rng, n);
    std::vector<double> spectrum(n);
    for (double& l : spectrum) l = uniform(rng, 0.5, 5.0);
    const auto hess = testing::from_spectrum(basis, spectrum);
    Vector lin(n);
    for (double& x : lin) x = uniform(rng, -1.0, 1.0);
    auto grad = [&](const Vector& q) {
        Vector g = testing::apply(hess, q);
        for (std::size_t i = 0; i < n; ++i) g[i] += lin[i];
        return g;
    };

    const auto rot = testing::random_orthogonal(rng, n);
    const auto rot_t = testing::transpose(rot);
    Vector q0(n);
    for (double& x : q0) x = uniform(rng, -2.0, 2.0);

    const CgdConfig cfg = preset(Preset::CgdFull, Suite::Rosenbrock);
    OptimizerState s = OptimizerState::initial(q0, cfg);
    OptimizerState sr = OptimizerState::initial(testing::apply(rot, q0), cfg);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        s = step(s, grad(s.params), cfg);
        sr = step(sr, testing::apply(rot, grad(testing::apply(rot_t, sr.params))), cfg);
        worst = std::max(worst, testing::max_abs_diff(sr.params, testing::apply(rot, s.params)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("step: metric_update_interval reuses the eigendecomposition") {
    std::mt19937_64 rng(88);
    const std::size_t n = 4;
    std::vector<Vector> grads(12, Vector(n));
    for (auto& g : grads)
        for (double& x : g) x = uniform(rng, -1.0, 1.0);

    CgdConfig cfg = preset(Preset::CgdFull, Suite::Rosenbrock);
    cfg.metric_update_interval = 3;

    OptimizerState s = OptimizerState::initial(Vector(n, 0.0), cfg);
    MomentState moments = MomentState::initial(n, MomentMode::Full);
    Vector expected(n, 0.0);
    EigenDecomposition cached;
    for (std::size_t t = 0; t < grads.size(); ++t) {
        s = step(s, grads[t], cfg);
        moments = update_moments(moments, grads[t], cfg.ts);
        if (t % 3 == 0) cached = eigendecompose(covariance_full(moments));
        const Vector dir = apply_inverse_metric(cached, cfg.spec.power, cfg.spec.eps, moments.m1);
        for (std::size_t i = 0; i < n; ++i) expected[i] -= cfg.gamma * dir[i];
        CHECK(testing::max_abs_diff(s.params, expected) <= 1e-15);
    }

    // Interval 1 keeps no cache and refreshes every step.
    cfg.metric_update_interval = 1;
    OptimizerState fresh = OptimizerState::initial(Vector(n, 0.0), cfg);
    fresh = step(fresh, grads[0], cfg);
    CHECK_FALSE(fresh.cache.has_value());
}

TEST_CASE("step: errors") {
    const CgdConfig cfg = preset(Preset::Adam);
    CHECK_THROWS_AS(step(OptimizerState::initial({0.0, 0.0}, cfg), Vector{1.0}, cfg), DimensionMismatch);
    CgdConfig bad = cfg;
    bad.metric_update_interval = 0;
    CHECK_THROWS_AS(validate(bad), DomainError);
    bad = cfg;
    bad.gamma = 0.0;
    CHECK_THROWS_AS(validate(bad), DomainError);

    // A full-metric config on a diagonal state is a mode error.
    const CgdConfig full = preset(Preset::CgdFull);
    OptimizerState diag_state = OptimizerState::initial({0.0, 0.0}, cfg);
    CHECK_THROWS_AS(step(diag_state, Vector{1.0, 1.0}, full), ModeMismatch);
}
