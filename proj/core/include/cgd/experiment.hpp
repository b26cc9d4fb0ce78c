#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgd/optimizer.hpp"
#include "cgd/problems.hpp"

namespace cgd {

/// Plot-only smoothing timescale for the loss and tracked eigenvalues.
inline constexpr double kPlotTau = 20.0;
/// Parameters are written to the CSV only for problems this small.
inline constexpr std::size_t kMaxParamColumns = 4;

struct ExperimentConfig {
    Suite problem = Suite::Rosenbrock;
    Preset optimizer = Preset::Adam;
    PresetOverrides overrides;
    std::optional<MetricShape> shape;
    std::optional<MetricStatistic> statistic;
    std::uint32_t metric_update_interval = 1;
    EigenSolver solver = EigenSolver::Auto;

    std::size_t steps = 1000;
    std::uint64_t seed = 0;
    std::size_t eig_track_k = 0;
    std::size_t eig_track_interval = 10;
    std::size_t batch_size = 100;
    std::filesystem::path output_dir = ".";

    /// Rosenbrock dimension; the multiplication network is always 552.
    std::size_t dim = 2;
    /// Starting point override. Rosenbrock defaults to (0, 0.5) in 2-d and
    /// the origin otherwise; the network defaults to seeded initialization.
    std::optional<Vector> start;
};

std::size_t problem_dim(const ExperimentConfig& cfg);

/// Preset for the problem's suite with all overrides applied. Throws ConfigError.
CgdConfig optimizer_config(const ExperimentConfig& cfg);

/// Throws ConfigError naming the offending field.
void validate(const ExperimentConfig& cfg);

struct RunRow {
    std::uint64_t step = 0;
    double loss = 0.0;
    double smoothed_loss = 0.0;
    /// Empty unless the problem has at most kMaxParamColumns parameters.
    Vector params;
    /// Top-k covariance eigenvalues, descending. Refreshed at step 1 and every
    /// eig_track_interval steps, carried forward in between.
    Vector eigenvalues;
};

struct RunRecord {
    std::size_t param_columns = 0;
    std::size_t eig_columns = 0;
    std::vector<RunRow> rows;
    Vector final_params;
};

/// Runs `cfg.steps` optimizer steps. Row t holds the loss after step t,
/// evaluated on the mini-batch used for that step. Throws NumericalError when
/// the loss or parameters turn non-finite.
RunRecord run_experiment(const ExperimentConfig& cfg);

/// Top-k eigenvalues of clamp0(m2 - m1 m1^T), descending. Throws ModeMismatch
/// for a diagonal state and DomainError unless 1 <= k <= dim.
Vector track_eigenvalues(const MomentState& moments, std::size_t k,
                         EigenSolver solver = EigenSolver::Auto);

// ---------------------------------------------------------------------------
// CSV

/// Column names: step,loss,smoothed_loss[,q0..][,eig0..].
std::vector<std::string> csv_header(const RunRecord& record);
std::string to_csv(const RunRecord& record);
/// Throws IoError.
void write_csv(const RunRecord& record, const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// ---------------------------------------------------------------------------
// Config files: flat `key = value` lines, '#' comments.

using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(const std::string& text);
KeyValues read_key_values(const std::filesystem::path& path);

/// Later entries win. Unknown keys and malformed values throw ConfigError.
ExperimentConfig build_config(const KeyValues& entries);

/// Keys accepted by build_config.
const std::vector<std::string>& config_keys();

// ---------------------------------------------------------------------------
// Six-optimizer comparison

struct SuiteOptions {
    Suite suite = Suite::Rosenbrock;
    std::size_t steps = 5000;
    std::uint64_t seed = 0;
    std::size_t batch_size = 100;
    std::uint32_t full_metric_update_interval = 1;
    /// Eigenvalues tracked for the full-CGD run; clipped to the problem dimension.
    std::size_t eig_track_k = 10;
    std::size_t eig_track_interval = 10;
};

ExperimentConfig suite_config(const SuiteOptions& options, Preset preset);

struct SuiteResult {
    Preset preset;
    RunRecord record;
};

/// Runs every preset on the suite's problem, in kAllPresets order.
std::vector<SuiteResult> run_suite(const SuiteOptions& options);

}  // namespace cgd
