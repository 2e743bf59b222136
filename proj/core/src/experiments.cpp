#include "epigeo/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "epigeo/rng.hpp"
#include "render.hpp"

namespace epigeo {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

Eigen::VectorXd to_vector(const json& j, const char* field) {
    if (!j.is_array() || (j.size() != 2 && j.size() != 3)) {
        throw ConfigError(std::string("config: ") + field + " must be a 2- or 3-vector");
    }
    Eigen::VectorXd out(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw ConfigError(std::string("config: ") + field + " must hold numbers");
        }
        out(i) = j[i].get<double>();
    }
    return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

GeometrySelection parse_selection(const std::string& name) {
    if (name == "euclidean") return GeometrySelection::Euclidean;
    if (name == "projective") return GeometrySelection::Projective;
    if (name == "both") return GeometrySelection::Both;
    throw ConfigError("config: geometry must be euclidean, projective or both");
}

std::string selection_name(GeometrySelection s) {
    switch (s) {
        case GeometrySelection::Euclidean: return "euclidean";
        case GeometrySelection::Projective: return "projective";
        default: return "both";
    }
}

IntegrationScheme parse_scheme(const std::string& name) {
    if (name == "monte_carlo") return IntegrationScheme::MonteCarlo;
    if (name == "grid_quadrature") return IntegrationScheme::GridQuadrature;
    throw ConfigError("config: integration.scheme must be monte_carlo or grid_quadrature");
}

template <typename T>
void read_field(const json& j, const char* field, T& out) {
    if (!j.contains(field)) return;
    try {
        out = j.at(field).get<T>();
    } catch (const json::exception& err) {
        throw ConfigError(std::string("config: bad value for ") + field + ": " + err.what());
    }
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open for writing: " + path.string());
    }
    out << contents;
    if (!out) {
        throw Error("write failed: " + path.string());
    }
}

std::string kind_name(const GeometryKind& kind) {
    return kind.is_projective() ? "projective" : "euclidean";
}

}  // namespace

// ── config ───────────────────────────────────────────────────────────────

ExperimentConfig::ExperimentConfig() {
    start = Eigen::Vector2d(0.0, 0.0);
    object = Eigen::Vector2d(0.0, 2.0);
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& err) {
        throw ConfigError(std::string("config: invalid JSON: ") + err.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");

    ExperimentConfig cfg;
    if (j.contains("geometry")) cfg.geometry = parse_selection(j.at("geometry").get<std::string>());
    read_field(j, "dim", cfg.dim);
    read_field(j, "gamma", cfg.gamma);
    if (j.contains("start")) cfg.start = to_vector(j.at("start"), "start");
    if (j.contains("object")) cfg.object = to_vector(j.at("object"), "object");
    read_field(j, "iterations", cfg.iterations);
    read_field(j, "step_norm", cfg.step_norm);
    read_field(j, "epsilon", cfg.epsilon);
    read_field(j, "sigma0", cfg.sigma0);
    read_field(j, "idle_band", cfg.idle_band);
    read_field(j, "min_distance", cfg.min_distance);
    read_field(j, "raw_frame_observation", cfg.raw_frame_observation);
    read_field(j, "observation_noise", cfg.observation_noise);
    read_field(j, "seed", cfg.seed);
    read_field(j, "output_dir", cfg.output_dir);
    if (j.contains("integration")) {
        const json& ji = j.at("integration");
        if (ji.contains("scheme")) {
            cfg.integration.scheme = parse_scheme(ji.at("scheme").get<std::string>());
        }
        read_field(ji, "sample_count", cfg.integration.sample_count);
        read_field(ji, "nodes_per_axis", cfg.integration.nodes_per_axis);
        read_field(ji, "half_width_sigmas", cfg.integration.half_width_sigmas);
    }
    if (j.contains("grid")) {
        const json& jg = j.at("grid");
        read_field(jg, "cells_per_side", cfg.grid.cells_per_side);
        read_field(jg, "extent", cfg.grid.extent);
        read_field(jg, "exclusion_radius", cfg.grid.exclusion_radius);
    }
    if (j.contains("oracle")) {
        const json& jo = j.at("oracle");
        read_field(jo, "cloud_size", cfg.oracle.cloud_size);
        read_field(jo, "epsilon_scale", cfg.oracle.epsilon_scale);
        read_field(jo, "mi_samples", cfg.oracle.mi_samples);
        read_field(jo, "mi_instances", cfg.oracle.mi_instances);
        read_field(jo, "scaling_seeds", cfg.oracle.scaling_seeds);
    }
    // If dim was given without explicit points, resize the defaults.
    if (cfg.dim == 3 && cfg.start.size() == 2 && !j.contains("start") && !j.contains("object")) {
        cfg.start = Eigen::Vector3d(0.0, 0.0, 0.0);
        cfg.object = Eigen::Vector3d(0.0, 0.0, 2.0);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config: cannot read " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_string(buffer.str());
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["geometry"] = selection_name(geometry);
    j["dim"] = dim;
    j["gamma"] = gamma;
    j["start"] = vector_to_json(start);
    j["object"] = vector_to_json(object);
    j["iterations"] = iterations;
    j["step_norm"] = step_norm;
    j["epsilon"] = epsilon;
    j["sigma0"] = sigma0;
    j["idle_band"] = idle_band;
    j["min_distance"] = min_distance;
    j["raw_frame_observation"] = raw_frame_observation;
    j["observation_noise"] = observation_noise;
    j["integration"] = {
        {"scheme", integration.scheme == IntegrationScheme::MonteCarlo ? "monte_carlo"
                                                                       : "grid_quadrature"},
        {"sample_count", integration.sample_count},
        {"nodes_per_axis", integration.nodes_per_axis},
        {"half_width_sigmas", integration.half_width_sigmas},
    };
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["grid"] = {{"cells_per_side", grid.cells_per_side},
                 {"extent", grid.extent},
                 {"exclusion_radius", grid.exclusion_radius}};
    j["oracle"] = {{"cloud_size", oracle.cloud_size},
                   {"epsilon_scale", oracle.epsilon_scale},
                   {"mi_samples", oracle.mi_samples},
                   {"mi_instances", oracle.mi_instances},
                   {"scaling_seeds", oracle.scaling_seeds}};
    return j.dump();
}

std::vector<GeometryKind> ExperimentConfig::kinds() const {
    switch (geometry) {
        case GeometrySelection::Euclidean: return {GeometryKind::euclidean()};
        case GeometrySelection::Projective: return {GeometryKind::projective(gamma)};
        default: return {GeometryKind::euclidean(), GeometryKind::projective(gamma)};
    }
}

ExplorationConfig ExperimentConfig::exploration(const GeometryKind& kind) const {
    ExplorationConfig out;
    out.geometry = kind;
    out.start = start;
    out.object = object;
    out.iterations = iterations;
    out.step_norm = step_norm;
    out.epsilon = epsilon;
    out.sigma0 = sigma0;
    out.idle_band = idle_band;
    out.min_distance = min_distance;
    out.integration = integration;
    out.seed = seed;
    out.raw_frame_observation = raw_frame_observation;
    out.observation_noise = observation_noise;
    return out;
}

void ExperimentConfig::validate() const {
    if (dim != 2 && dim != 3) throw ConfigError("config: dim must be 2 or 3");
    if (start.size() != dim || object.size() != dim) {
        throw ConfigError("config: start/object do not match dim");
    }
    if (!(gamma > 0.0)) throw ConfigError("config: gamma must be > 0");
    if (grid.cells_per_side < 2) throw ConfigError("config: grid.cells_per_side must be >= 2");
    if (!(grid.extent > 0.0)) throw ConfigError("config: grid.extent must be > 0");
    if (grid.exclusion_radius < 0.0) throw ConfigError("config: grid.exclusion_radius < 0");
    if (oracle.cloud_size < 10000) throw ConfigError("config: oracle.cloud_size must be >= 10^4");
    if (!(oracle.epsilon_scale > 0.0)) throw ConfigError("config: oracle.epsilon_scale <= 0");
    if (oracle.mi_samples < 100000) throw ConfigError("config: oracle.mi_samples must be >= 10^5");
    if (oracle.mi_instances < 1) throw ConfigError("config: oracle.mi_instances < 1");
    if (oracle.scaling_seeds < 1) throw ConfigError("config: oracle.scaling_seeds < 1");
    try {
        exploration(kinds().front()).validate();
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("config: ") + err.what());
    }
}

// ── CSV serialization ────────────────────────────────────────────────────

std::string trajectory_to_csv(const Trajectory& trajectory, const std::string& config_json) {
    using detail::g17;
    const int d = trajectory.config.dim();
    std::ostringstream os;
    os << "# epigeo trajectory (" << kind_name(trajectory.config.geometry) << ")\n";
    os << "# config: " << config_json << "\n";
    if (trajectory.abort_reason) {
        os << "# aborted: " << *trajectory.abort_reason << "\n";
    }
    os << "step,x,y" << (d == 3 ? ",z" : "") << ",chosen_move,value_idle";
    for (int k = 0; k < 8; ++k) os << ",value_" << k;
    os << "\n";

    auto position_of = [&](const AgentState& state) { return state.frame.origin; };
    auto write_row = [&](int step, const Eigen::VectorXd& pos, const TrajectoryStep* decision) {
        os << step;
        for (int i = 0; i < d; ++i) os << ',' << g17(pos(i));
        if (decision == nullptr) {
            // Final state: no decision was made here.
            os << std::string(10, ',');
        } else {
            os << ',';
            if (decision->chosen.is_idle()) {
                os << "idle";
            } else {
                os << g17(decision->chosen.direction_angle);
            }
            for (const auto& scored : decision->scored) {
                os << ',' << (scored.valid() ? g17(scored.epistemic_value) : "nan");
            }
        }
        os << "\n";
    };

    for (std::size_t t = 0; t < trajectory.steps.size(); ++t) {
        write_row(static_cast<int>(t), position_of(trajectory.steps[t].state),
                  &trajectory.steps[t]);
    }
    write_row(static_cast<int>(trajectory.steps.size()),
              position_of(trajectory.last_state()), nullptr);
    return os.str();
}

std::string grid_to_csv(const GridResult& result, const std::string& config_json) {
    using detail::g17;
    std::ostringstream os;
    os << "# epigeo grid scores (" << kind_name(result.kind) << ")\n";
    os << "# config: " << config_json << "\n";
    os << "obj_x,obj_y,direction_bin,value\n";
    for (const auto& row : result.rows) {
        os << g17(row.object(0)) << ',' << g17(row.object(1)) << ',';
        if (row.is_idle) {
            os << "idle";
        } else {
            os << row.bin;
        }
        os << ',' << g17(row.value) << "\n";
    }
    return os.str();
}

namespace {

std::string direction_profile_csv(const std::vector<GridResult>& results,
                                  const std::string& config_json) {
    using detail::g17;
    std::ostringstream os;
    os << "# epigeo direction profile (mean epistemic value per direction bin)\n";
    os << "# config: " << config_json << "\n";
    os << "geometry,direction_bin,angle,mean,std_error,count\n";
    for (const auto& result : results) {
        for (const auto& stat : result.stats) {
            os << kind_name(result.kind) << ',';
            if (stat.is_idle) {
                os << "idle,";
            } else {
                os << stat.bin << ',';
            }
            os << g17(stat.angle) << ',' << g17(stat.mean) << ',' << g17(stat.std_error) << ','
               << stat.count << "\n";
        }
    }
    return os.str();
}

}  // namespace

// ── simulation protocols ─────────────────────────────────────────────────

Sim1Result run_sim1(const ExperimentConfig& config) {
    config.validate();
    const std::string snapshot = config.to_json();
    const fs::path out_dir(config.output_dir);
    fs::create_directories(out_dir);

    Sim1Result result;
    for (const GeometryKind& kind : config.kinds()) {
        Trajectory trajectory = run_exploration(config.exploration(kind));
        const fs::path csv_path = out_dir / ("trajectory_" + kind_name(kind) + ".csv");
        write_file(csv_path, trajectory_to_csv(trajectory, snapshot));
        result.csv_paths.push_back(csv_path.string());
        result.trajectories.push_back(std::move(trajectory));
    }
    const fs::path svg_path = out_dir / "trajectories.svg";
    write_file(svg_path,
               detail::render_trajectories_svg(result.trajectories, config.object, snapshot));
    result.svg_path = svg_path.string();
    return result;
}

std::vector<GridResult> compute_grid_results(const ExperimentConfig& config) {
    config.validate();
    if (config.dim != 2) {
        throw ConfigError("grid protocol: only the planar (dim = 2) setup is defined");
    }
    const double cell = 2.0 * config.grid.extent / config.grid.cells_per_side;

    std::vector<Eigen::VectorXd> objects;
    int excluded = 0;
    for (int i = 0; i < config.grid.cells_per_side; ++i) {
        for (int j = 0; j < config.grid.cells_per_side; ++j) {
            Eigen::Vector2d center(-config.grid.extent + (i + 0.5) * cell,
                                   -config.grid.extent + (j + 0.5) * cell);
            if ((center - Eigen::Vector2d(config.start)).norm() < config.grid.exclusion_radius) {
                ++excluded;
                continue;
            }
            objects.push_back(center);
        }
    }

    std::vector<GridResult> results;
    for (const GeometryKind& kind : config.kinds()) {
        GridResult grid_result;
        grid_result.kind = kind;
        grid_result.excluded_positions = excluded;
        const SensorModel sensor = SensorModel::gaussian(config.epsilon);

        std::vector<std::vector<double>> per_bin(9);  // index 0 idle, 1..8 -> bins 0..7
        for (std::size_t obj_index = 0; obj_index < objects.size(); ++obj_index) {
            const Eigen::VectorXd& object = objects[obj_index];
            const Frame frame = look_at_frame(config.start, object);
            const Eigen::VectorXd center =
                observe(frame, object, kind, std::nullopt, 0, config.raw_frame_observation);
            const AgentState state{frame, GaussianBelief::isotropic(center, config.sigma0), 0};

            const auto moves = enumerate_moves(state, object, config.step_norm);
            for (std::size_t m = 0; m < moves.size(); ++m) {
                IntegrationConfig cfg = config.integration;
                cfg.seed = derive_seed(config.seed, obj_index, m);
                const ScoredMove scored =
                    score_move(state, moves[m], object, kind, sensor, cfg);
                if (!scored.valid()) {
                    throw Error("grid protocol: scoring failed at object (" +
                                std::to_string(object(0)) + ", " + std::to_string(object(1)) +
                                "): " + *scored.failure);
                }
                GridResult::Row row;
                row.object = object;
                row.is_idle = moves[m].is_idle();
                row.bin = row.is_idle ? 0 : static_cast<int>(m) - 1;
                row.value = scored.epistemic_value;
                grid_result.rows.push_back(std::move(row));
                per_bin[moves[m].is_idle() ? 0 : m].push_back(scored.epistemic_value);
            }
        }

        for (int slot = 0; slot < 9; ++slot) {
            DirectionStat stat;
            stat.is_idle = slot == 0;
            stat.bin = stat.is_idle ? 0 : slot - 1;
            stat.angle = stat.is_idle ? 0.0 : 2.0 * std::numbers::pi * stat.bin / 8.0;
            const auto& values = per_bin[slot];
            stat.count = static_cast<int>(values.size());
            double sum = 0.0;
            for (double v : values) sum += v;
            stat.mean = values.empty() ? 0.0 : sum / double(values.size());
            double var = 0.0;
            for (double v : values) var += (v - stat.mean) * (v - stat.mean);
            stat.std_error = values.size() > 1
                                 ? std::sqrt(var / double(values.size() - 1) /
                                             double(values.size()))
                                 : 0.0;
            grid_result.stats.push_back(stat);
        }
        results.push_back(std::move(grid_result));
    }
    return results;
}

Sim2Result run_sim2(const ExperimentConfig& config) {
    const std::string snapshot = config.to_json();
    const fs::path out_dir(config.output_dir);
    fs::create_directories(out_dir);

    Sim2Result result;
    result.results = compute_grid_results(config);
    for (const auto& grid_result : result.results) {
        const fs::path csv_path = out_dir / ("grid_" + kind_name(grid_result.kind) + ".csv");
        write_file(csv_path, grid_to_csv(grid_result, snapshot));
        result.csv_paths.push_back(csv_path.string());
    }
    const fs::path profile_path = out_dir / "direction_profile.csv";
    write_file(profile_path, direction_profile_csv(result.results, snapshot));
    result.csv_paths.push_back(profile_path.string());

    const fs::path svg_path = out_dir / "epistemic_by_direction.svg";
    write_file(svg_path, detail::render_direction_profile_svg(result.results, snapshot));
    result.svg_path = svg_path.string();
    return result;
}

}  // namespace epigeo
