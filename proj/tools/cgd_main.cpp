// cgd: run covariant gradient descent experiments and write CSV trajectories.
//
//   cgd run --config <file> [--key value ...]
//   cgd compare --suite rosenbrock|multiply --out <dir>
//   cgd gradcheck --problem rosenbrock|multiply

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cgd/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

constexpr double kGradcheckTolerance = 1e-5;

std::filesystem::path output_path(const std::filesystem::path& dir, cgd::Suite suite, cgd::Preset p) {
    return dir / (std::string(cgd::to_string(suite)) + "_" + std::string(cgd::to_string(p)) + ".csv");
}

// Turns trailing `--key value` / `--key=value` pairs into config entries.
cgd::KeyValues overrides_from_args(const std::vector<std::string>& args) {
    cgd::KeyValues out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& arg = args[i];
        if (arg.rfind("--", 0) != 0) throw cgd::ConfigError(arg, "expected --key value");
        std::string key = arg.substr(2);
        const auto eq = key.find('=');
        if (eq != std::string::npos) {
            out.emplace_back(key.substr(0, eq), key.substr(eq + 1));
            continue;
        }
        if (i + 1 >= args.size()) throw cgd::ConfigError(key, "missing value");
        out.emplace_back(std::move(key), args[++i]);
    }
    return out;
}

void print_summary(const cgd::RunRecord& record, const char* label, const std::filesystem::path& path,
                   double seconds) {
    const auto& last = record.rows.back();
    std::printf("%-13s steps=%llu final_loss=%.6e smoothed=%.6e time=%.2fs -> %s\n", label,
                static_cast<unsigned long long>(last.step), last.loss, last.smoothed_loss, seconds,
                path.string().c_str());
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& extras) {
    cgd::KeyValues entries = cgd::read_key_values(config_path);
    const cgd::KeyValues extra = overrides_from_args(extras);
    entries.insert(entries.end(), extra.begin(), extra.end());
    const cgd::ExperimentConfig cfg = cgd::build_config(entries);

    const auto t0 = std::chrono::steady_clock::now();
    const cgd::RunRecord record = cgd::run_experiment(cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::filesystem::create_directories(cfg.output_dir);
    const auto path = output_path(cfg.output_dir, cfg.problem, cfg.optimizer);
    cgd::write_csv(record, path);
    print_summary(record, std::string(cgd::to_string(cfg.optimizer)).c_str(), path, seconds);
    return kExitOk;
}

int cmd_compare(const cgd::SuiteOptions& options, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (cgd::Preset p : cgd::kAllPresets) {
        const auto t0 = std::chrono::steady_clock::now();
        const cgd::RunRecord record = cgd::run_experiment(cgd::suite_config(options, p));
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto path = output_path(out_dir, options.suite, p);
        cgd::write_csv(record, path);
        print_summary(record, std::string(cgd::to_string(p)).c_str(), path, seconds);
    }
    return kExitOk;
}

int cmd_gradcheck(const std::string& problem, std::size_t points, std::uint64_t seed, std::size_t dim) {
    const cgd::Suite suite = cgd::parse_suite(problem);
    const cgd::GradcheckReport report = suite == cgd::Suite::Rosenbrock
                                            ? cgd::gradcheck_rosenbrock(dim, points, seed)
                                            : cgd::gradcheck_multiply(points, seed);
    std::printf("problem=%s points=%zu max_relative_error=%.3e\n", problem.c_str(), report.points,
                report.max_relative_error);
    return report.max_relative_error <= kGradcheckTolerance ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Covariant gradient descent experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run one experiment from a key = value config file");
    std::string config_path;
    run->add_option("--config", config_path, "Config file")->required();
    run->allow_extras();

    auto* compare = app.add_subcommand("compare", "Run all six optimizer presets on a benchmark");
    std::string suite_name;
    std::string out_dir;
    cgd::SuiteOptions suite_options;
    compare->add_option("--suite", suite_name, "rosenbrock or multiply")->required();
    compare->add_option("--out", out_dir, "Output directory")->required();
    compare->add_option("--steps", suite_options.steps, "Optimizer steps per run");
    compare->add_option("--seed", suite_options.seed, "Run seed");
    compare->add_option("--batch-size", suite_options.batch_size, "Mini-batch size (multiply)");
    compare->add_option("--metric-update-interval", suite_options.full_metric_update_interval,
                        "Steps between full-metric eigendecompositions");
    compare->add_option("--eig-k", suite_options.eig_track_k, "Eigenvalues tracked for full CGD");

    auto* gradcheck = app.add_subcommand("gradcheck", "Compare analytic gradients with finite differences");
    std::string problem;
    std::size_t points = 20;
    std::uint64_t seed = 0;
    std::size_t dim = 2;
    gradcheck->add_option("--problem", problem, "rosenbrock or multiply")->required();
    gradcheck->add_option("--points", points, "Random points to check");
    gradcheck->add_option("--seed", seed, "Seed for points and batches");
    gradcheck->add_option("--dim", dim, "Rosenbrock dimension");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(config_path, run->remaining());
        if (*compare) {
            suite_options.suite = cgd::parse_suite(suite_name);
            return cmd_compare(suite_options, out_dir);
        }
        if (*gradcheck) return cmd_gradcheck(problem, points, seed, dim);
    } catch (const cgd::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const cgd::UnknownPreset& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const cgd::DimensionTooSmall& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const cgd::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return kExitFailure;
}
