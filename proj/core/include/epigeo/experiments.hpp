#pragma once

#include <string>
#include <vector>

#include "epigeo/agent.hpp"
#include "epigeo/report.hpp"

namespace epigeo {

enum class GeometrySelection { Euclidean, Projective, Both };

/// Object-position grid for the direction-profile protocol: cell centers
/// of a cells_per_side^2 grid spanning [-extent, extent]^2, with cells
/// closer than exclusion_radius to the agent dropped.
struct GridSpec {
    int cells_per_side = 20;
    double extent = 5.0;
    double exclusion_radius = 1.0;
};

/// Parameters of the oracle verification suite.
struct OracleConfig {
    int cloud_size = 10000;
    double epsilon_scale = 0.05;  // ball radius as a fraction of cloud std
    long mi_samples = 100000;
    int mi_instances = 50;
    int scaling_seeds = 10;
};

/// Full experiment configuration; every field has a default and can be
/// overridden from a JSON document (schema in the README).
struct ExperimentConfig {
    GeometrySelection geometry = GeometrySelection::Both;
    int dim = 2;
    double gamma = 1.0;
    Eigen::VectorXd start;
    Eigen::VectorXd object;
    int iterations = 20;
    double step_norm = 0.1;
    double epsilon = 0.1;
    double sigma0 = 0.5;
    double idle_band = 1e-4;
    double min_distance = 0.2;
    bool raw_frame_observation = false;
    bool observation_noise = false;
    IntegrationConfig integration;
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    GridSpec grid;
    OracleConfig oracle;

    ExperimentConfig();

    static ExperimentConfig from_json_string(const std::string& text);
    static ExperimentConfig from_json_file(const std::string& path);

    /// Serialized snapshot of every effective setting; embedded as a
    /// comment header in all output files.
    std::string to_json() const;

    /// The geometry kinds selected by `geometry`.
    std::vector<GeometryKind> kinds() const;

    /// Agent configuration for one kind.
    ExplorationConfig exploration(const GeometryKind& kind) const;

    void validate() const;
};

/// Per-direction aggregate of epistemic value over object positions.
struct DirectionStat {
    int bin = 0;  // 0..7 translation index; idle rows have is_idle set
    bool is_idle = false;
    double angle = 0.0;  // radians in [0, 2*pi)
    double mean = 0.0;
    double std_error = 0.0;
    int count = 0;
};

/// First-step move scores over a grid of object positions for one kind.
struct GridResult {
    GeometryKind kind;
    struct Row {
        Eigen::VectorXd object;
        int bin = 0;  // as DirectionStat::bin
        bool is_idle = false;
        double value = 0.0;
    };
    std::vector<Row> rows;
    std::vector<DirectionStat> stats;  // idle first, then bins 0..7
    int excluded_positions = 0;
};

struct Sim1Result {
    std::vector<Trajectory> trajectories;
    std::vector<std::string> csv_paths;
    std::string svg_path;
};

struct Sim2Result {
    std::vector<GridResult> results;
    std::vector<std::string> csv_paths;
    std::string svg_path;
};

/// Exploration protocol: one run per selected geometry kind with
/// identical seeds; writes trajectory_<kind>.csv and trajectories.svg
/// under config.output_dir.
Sim1Result run_sim1(const ExperimentConfig& config);

/// Direction-profile protocol: scores the first-step move set for every
/// grid object position under each selected kind; writes grid_<kind>.csv,
/// direction_profile.csv and epistemic_by_direction.svg.
Sim2Result run_sim2(const ExperimentConfig& config);

/// In-memory variants used by tests and the plotting layer.
std::vector<GridResult> compute_grid_results(const ExperimentConfig& config);
std::string trajectory_to_csv(const Trajectory& trajectory, const std::string& config_json);
std::string grid_to_csv(const GridResult& result, const std::string& config_json);

/// Oracle verification suite (sample-based checks of the closed-form
/// pipeline); report written to oracle_report.csv under output_dir by
/// the CLI layer.
CheckReport run_oracle_suite(const ExperimentConfig& config);

/// Deterministic invariant suite over the geometry/belief/pushforward/
/// agent layers.
CheckReport run_invariant_suite(const ExperimentConfig& config);

}  // namespace epigeo
