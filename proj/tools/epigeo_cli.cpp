#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "epigeo/experiments.hpp"

namespace {

enum ExitCode : int {
    kOk = 0,
    kCheckFailure = 1,
    kConfigError = 2,
    kNumericalAbort = 3,
};

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string geometry;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "JSON configuration file");
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", opts.seed, "master seed (overrides config)");
    cmd->add_option("--geometry", opts.geometry, "euclidean, projective or both")
        ->check(CLI::IsMember({"euclidean", "projective", "both"}));
}

epigeo::ExperimentConfig load_config(const CommonOptions& opts) {
    epigeo::ExperimentConfig config;
    if (!opts.config_path.empty()) {
        config = epigeo::ExperimentConfig::from_json_file(opts.config_path);
    }
    if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
    if (opts.seed) config.seed = *opts.seed;
    if (opts.geometry == "euclidean") config.geometry = epigeo::GeometrySelection::Euclidean;
    if (opts.geometry == "projective") config.geometry = epigeo::GeometrySelection::Projective;
    if (opts.geometry == "both") config.geometry = epigeo::GeometrySelection::Both;
    config.validate();
    return config;
}

void print_report(const epigeo::CheckReport& report) {
    for (const auto& row : report.rows) {
        std::cout << (row.pass ? "[PASS] " : "[FAIL] ") << row.name
                  << "  statistic=" << row.statistic << "  threshold=" << row.threshold;
        if (!row.note.empty()) std::cout << "  (" << row.note << ")";
        std::cout << "\n";
    }
    std::cout << (report.all_passed() ? "all checks passed" : "CHECK FAILURES PRESENT")
              << "\n";
}

int write_report(const epigeo::CheckReport& report, const epigeo::ExperimentConfig& config,
                 const std::string& filename) {
    namespace fs = std::filesystem;
    fs::create_directories(config.output_dir);
    const fs::path path = fs::path(config.output_dir) / filename;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << report.to_csv(config.to_json());
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return kNumericalAbort;
    }
    std::cout << "report written to " << path.string() << "\n";
    return report.all_passed() ? kOk : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curiosity-driven exploration with Euclidean vs projective world models"};
    app.require_subcommand(1);

    CommonOptions opts;
    CLI::App* sim1 = app.add_subcommand("sim1", "exploration trajectories for both geometries");
    CLI::App* sim2 = app.add_subcommand("sim2", "first-step epistemic value over an object grid");
    CLI::App* oracle = app.add_subcommand("oracle", "sample-based oracle verification suite");
    CLI::App* check = app.add_subcommand("check", "deterministic invariant suite");
    for (CLI::App* cmd : {sim1, sim2, oracle, check}) add_common(cmd, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        const epigeo::ExperimentConfig config = load_config(opts);

        if (sim1->parsed()) {
            const epigeo::Sim1Result result = epigeo::run_sim1(config);
            for (const auto& path : result.csv_paths) std::cout << "wrote " << path << "\n";
            std::cout << "wrote " << result.svg_path << "\n";
            for (const auto& trajectory : result.trajectories) {
                if (trajectory.abort_reason) {
                    std::cerr << "run aborted: " << *trajectory.abort_reason << "\n";
                    return kNumericalAbort;
                }
            }
            return kOk;
        }
        if (sim2->parsed()) {
            const epigeo::Sim2Result result = epigeo::run_sim2(config);
            for (const auto& path : result.csv_paths) std::cout << "wrote " << path << "\n";
            std::cout << "wrote " << result.svg_path << "\n";
            return kOk;
        }
        if (oracle->parsed()) {
            const epigeo::CheckReport report = epigeo::run_oracle_suite(config);
            print_report(report);
            return write_report(report, config, "oracle_report.csv");
        }
        const epigeo::CheckReport report = epigeo::run_invariant_suite(config);
        print_report(report);
        return write_report(report, config, "check_report.csv");
    } catch (const epigeo::ConfigError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return kConfigError;
    } catch (const std::exception& err) {
        std::cerr << "numerical abort: " << err.what() << "\n";
        return kNumericalAbort;
    }
}
