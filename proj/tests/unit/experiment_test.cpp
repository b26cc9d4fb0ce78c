#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgd/experiment.hpp"
#include "doctest.h"

using namespace cgd;

namespace {

ExperimentConfig rosenbrock_cfg(Preset p, std::size_t steps) {
    ExperimentConfig cfg;
    cfg.problem = Suite::Rosenbrock;
    cfg.optimizer = p;
    cfg.steps = steps;
    return cfg;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

}  // namespace

TEST_CASE("run_experiment: one SGD step lowers the Rosenbrock loss") {
    const RunRecord r = run_experiment(rosenbrock_cfg(Preset::SGD, 1));
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].step == 1);
    CHECK(r.rows[0].loss < 26.0);
    CHECK(r.rows[0].loss == rosenbrock_loss(Vector{0.0048, 0.26}));
    CHECK(r.rows[0].smoothed_loss == r.rows[0].loss);
    CHECK(r.rows[0].params == r.final_params);
}

TEST_CASE("run_experiment: starting at the minimum stays there") {
    for (Preset p : kAllPresets) {
        ExperimentConfig cfg = rosenbrock_cfg(p, 20);
        cfg.start = Vector{1.0, 1.0};
        const RunRecord r = run_experiment(cfg);
        for (const auto& row : r.rows) CHECK(row.loss == 0.0);
    }
}

TEST_CASE("run_experiment: smoothed loss is an EMA of the raw loss") {
    const RunRecord r = run_experiment(rosenbrock_cfg(Preset::Adam, 50));
    double s = r.rows[0].loss;
    for (std::size_t i = 1; i < r.rows.size(); ++i) {
        s = s + (r.rows[i].loss - s) / (1.0 + kPlotTau);
        CHECK(r.rows[i].smoothed_loss == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("run_experiment: reruns are byte-identical") {
    ExperimentConfig cfg = rosenbrock_cfg(Preset::CgdFull, 300);
    cfg.eig_track_k = 2;
    CHECK(to_csv(run_experiment(cfg)) == to_csv(run_experiment(cfg)));

    ExperimentConfig mul;
    mul.problem = Suite::Multiply;
    mul.optimizer = Preset::CgdDiagonal;
    mul.steps = 20;
    mul.seed = 4;
    const std::string a = to_csv(run_experiment(mul));
    CHECK(a == to_csv(run_experiment(mul)));
    mul.seed = 5;
    CHECK(a != to_csv(run_experiment(mul)));
}

TEST_CASE("run_experiment: eigenvalue tracking cadence") {
    ExperimentConfig cfg = rosenbrock_cfg(Preset::CgdFull, 35);
    cfg.eig_track_k = 2;
    cfg.eig_track_interval = 10;
    const RunRecord r = run_experiment(cfg);
    CHECK(r.eig_columns == 2);
    for (const auto& row : r.rows) {
        REQUIRE(row.eigenvalues.size() == 2);
        CHECK(row.eigenvalues[0] >= row.eigenvalues[1]);
        CHECK(row.eigenvalues[1] >= 0.0);
    }
    // Values only change on refresh steps 1, 10, 20, 30.
    CHECK(r.rows[1].eigenvalues == r.rows[0].eigenvalues);
    CHECK(r.rows[8].eigenvalues == r.rows[0].eigenvalues);
    CHECK(r.rows[9].eigenvalues != r.rows[8].eigenvalues);
    CHECK(r.rows[34].eigenvalues == r.rows[29].eigenvalues);
}

TEST_CASE("run_experiment: divergence is reported with its step") {
    ExperimentConfig cfg = rosenbrock_cfg(Preset::SGD, 500);
    cfg.overrides.gamma = 0.5;
    try {
        run_experiment(cfg);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.step() >= 1);
        CHECK(e.step() <= 500);
    }
}

TEST_CASE("track_eigenvalues") {
    const auto fresh = MomentState::initial(4, MomentMode::Full);
    CHECK(track_eigenvalues(fresh, 3) == Vector{1.0, 1.0, 1.0});

    const auto once = update_moments(fresh, Vector{0.5, -1.0, 2.0, 0.1}, {0.0, 0.0});
    for (double l : track_eigenvalues(once, 4)) CHECK(l == 0.0);

    MomentState rank1 = MomentState::initial(3, MomentMode::Full);
    const Vector v = {1.0, 2.0, -2.0};
    rank1.m2 = SymMatrix::generate(3, [&](std::size_t i, std::size_t j) { return v[i] * v[j]; });
    const Vector top = track_eigenvalues(rank1, 3);
    CHECK(top[0] == doctest::Approx(9.0).epsilon(1e-13));
    CHECK(top[1] == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(top[2] == doctest::Approx(0.0).epsilon(1e-13));

    CHECK_THROWS_AS(track_eigenvalues(MomentState::initial(3, MomentMode::Diagonal), 1), ModeMismatch);
    CHECK_THROWS_AS(track_eigenvalues(fresh, 0), DomainError);
    CHECK_THROWS_AS(track_eigenvalues(fresh, 5), DomainError);
}

TEST_CASE("csv: schema") {
    const RunRecord plain = run_experiment(rosenbrock_cfg(Preset::Adam, 3));
    CHECK(csv_header(plain) == std::vector<std::string>{"step", "loss", "smoothed_loss", "q0", "q1"});

    ExperimentConfig cfg = rosenbrock_cfg(Preset::CgdFull, 3);
    cfg.dim = 3;
    cfg.eig_track_k = 3;
    const RunRecord tracked = run_experiment(cfg);
    CHECK(csv_header(tracked) ==
          std::vector<std::string>{"step", "loss", "smoothed_loss", "q0", "q1", "q2", "eig0", "eig1", "eig2"});

    cfg.dim = 5;
    cfg.eig_track_k = 0;
    CHECK(csv_header(run_experiment(cfg)) == std::vector<std::string>{"step", "loss", "smoothed_loss"});

    const std::string text = to_csv(tracked);
    CHECK(text.back() == '\n');
    std::stringstream ss(text);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(ss, line)) {
        CHECK(split(line).size() == 9);
        ++lines;
    }
    CHECK(lines == 4);
}

TEST_CASE("csv: values round-trip exactly") {
    const RunRecord r = run_experiment(rosenbrock_cfg(Preset::CgdDiagonal, 200));
    std::stringstream ss(to_csv(r));
    std::string line;
    std::getline(ss, line);
    for (const auto& row : r.rows) {
        REQUIRE(std::getline(ss, line));
        const auto cols = split(line);
        double loss = 0.0;
        std::from_chars(cols[1].data(), cols[1].data() + cols[1].size(), loss);
        CHECK(loss == row.loss);
        CHECK(std::abs(loss - row.loss) <= 1e-15 * std::abs(row.loss));
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
}

TEST_CASE("write_csv: writes the file and reports IO failures") {
    const auto dir = std::filesystem::temp_directory_path() / "cgd_experiment_test";
    std::filesystem::create_directories(dir);
    const RunRecord r = run_experiment(rosenbrock_cfg(Preset::SGD, 5));
    write_csv(r, dir / "out.csv");
    std::ifstream in(dir / "out.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == to_csv(r));
    CHECK_THROWS_AS(write_csv(r, dir / "missing" / "sub" / "out.csv"), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("config: parsing") {
    const KeyValues kv = parse_key_values(
        "# comment\n"
        "problem = rosenbrock\n"
        "optimizer = cgd-full   # trailing comment\n"
        "\n"
        "gamma = 0.02\n"
        "steps = 40\n"
        "eig_track_k = 2\n"
        "start = 0.5, -0.5\n");
    const ExperimentConfig cfg = build_config(kv);
    CHECK(cfg.problem == Suite::Rosenbrock);
    CHECK(cfg.optimizer == Preset::CgdFull);
    CHECK(cfg.steps == 40);
    CHECK(*cfg.start == Vector{0.5, -0.5});
    const CgdConfig opt = optimizer_config(cfg);
    CHECK(opt.gamma == 0.02);
    CHECK(opt.ts.tau1 == 10.9);

    KeyValues later = kv;
    later.emplace_back("steps", "7");
    later.emplace_back("metric-update-interval", "4");
    const ExperimentConfig overridden = build_config(later);
    CHECK(overridden.steps == 7);
    CHECK(optimizer_config(overridden).metric_update_interval == 4);

    const ExperimentConfig mul = build_config(parse_key_values(
        "problem = multiply\noptimizer = adam\nshape = full\nstatistic = covariance\nsolver = tridiagonal\n"));
    CHECK(optimizer_config(mul).spec.shape == MetricShape::Full);
    CHECK(optimizer_config(mul).spec.statistic == MetricStatistic::Covariance);
    CHECK(optimizer_config(mul).gamma == 0.099);
    CHECK(problem_dim(mul) == 552);
}

TEST_CASE("config: errors name the field") {
    auto field_of = [](const std::string& text) -> std::string {
        try {
            build_config(parse_key_values(text));
        } catch (const ConfigError& e) {
            return e.field();
        }
        return "<none>";
    };
    CHECK(field_of("stpes = 10\n") == "stpes");
    CHECK(field_of("steps = ten\n") == "steps");
    CHECK(field_of("steps = 0\n") == "steps");
    CHECK(field_of("steps = -3\n") == "steps");
    CHECK(field_of("optimizer = adamw\n") == "optimizer");
    CHECK(field_of("problem = mnist\n") == "problem");
    CHECK(field_of("gamma = -1\n") == "optimizer");
    CHECK(field_of("eig_track_k = 2\n") == "eig_track_k");
    CHECK(field_of("optimizer = cgd-full\neig_track_k = 3\n") == "eig_track_k");
    CHECK(field_of("start = 1, 2, 3\n") == "start");
    CHECK(field_of("shape = round\n") == "shape");
    CHECK(field_of("dim = 1\n") == "dim");
    CHECK(field_of("gamma =\n") == "gamma");
    CHECK_THROWS_AS(parse_key_values("just words\n"), ConfigError);
    CHECK_THROWS_AS(read_key_values("/nonexistent/cgd.cfg"), ConfigError);
}

TEST_CASE("suite_config: every preset on its tuned hyperparameters") {
    SuiteOptions options;
    options.suite = Suite::Multiply;
    options.full_metric_update_interval = 3;
    for (Preset p : kAllPresets) {
        const ExperimentConfig cfg = suite_config(options, p);
        CHECK(cfg.optimizer == p);
        CHECK(cfg.steps == 5000);
        CHECK(cfg.eig_track_k == (p == Preset::CgdFull ? 10u : 0u));
        CHECK(optimizer_config(cfg).metric_update_interval == (p == Preset::CgdFull ? 3u : 1u));
    }
    options.suite = Suite::Rosenbrock;
    CHECK(suite_config(options, Preset::CgdFull).eig_track_k == 2);
}
