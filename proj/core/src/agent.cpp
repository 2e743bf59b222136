#include "epigeo/agent.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "epigeo/rng.hpp"

namespace epigeo {

namespace {

constexpr int kTranslationCount = 8;

GaussianBelief initial_belief(const ExplorationConfig& cfg, const Frame& frame) {
    // The belief starts centered on the object's internal representation.
    const Eigen::VectorXd center =
        observe(frame, cfg.object, cfg.geometry, std::nullopt, 0, cfg.raw_frame_observation);
    return GaussianBelief::isotropic(center, cfg.sigma0);
}

}  // namespace

Move Move::idle() { return Move{MoveKind::Idle, 0.0, 0.0}; }

Move Move::translate(double direction_angle, double step_norm) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (!(step_norm > 0.0)) {
        throw std::invalid_argument("Move: step_norm must be > 0");
    }
    if (direction_angle < 0.0 || direction_angle >= two_pi) {
        throw std::invalid_argument("Move: direction_angle must lie in [0, 2*pi)");
    }
    return Move{MoveKind::Translate, direction_angle, step_norm};
}

void ExplorationConfig::validate() const {
    const int d = dim();
    if (d != 2 && d != 3) {
        throw std::invalid_argument("ExplorationConfig: dimension must be 2 or 3");
    }
    if (object.size() != start.size()) {
        throw std::invalid_argument("ExplorationConfig: start/object dimension mismatch");
    }
    if (iterations < 0) throw std::invalid_argument("ExplorationConfig: iterations < 0");
    if (!(step_norm > 0.0)) throw std::invalid_argument("ExplorationConfig: step_norm <= 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("ExplorationConfig: epsilon <= 0");
    if (!(sigma0 > 0.0)) throw std::invalid_argument("ExplorationConfig: sigma0 <= 0");
    if (!(idle_band > 0.0)) throw std::invalid_argument("ExplorationConfig: idle_band <= 0");
    if (min_distance < 0.0) throw std::invalid_argument("ExplorationConfig: min_distance < 0");
    if ((object - start).norm() <= min_distance) {
        throw std::invalid_argument("ExplorationConfig: start is within min_distance of object");
    }
    if (geometry.is_projective() && !(geometry.gamma > 0.0)) {
        throw std::invalid_argument("ExplorationConfig: projective gamma must be > 0");
    }
    integration.validate();
}

std::vector<Move> enumerate_moves(const AgentState& state,
                                  const Eigen::VectorXd& object,
                                  double step_norm) {
    if ((object - state.frame.origin).norm() <= kSingularPlaneTol) {
        throw DegenerateDirectionError("enumerate_moves: object coincides with agent position");
    }
    std::vector<Move> moves;
    moves.reserve(kTranslationCount + 1);
    moves.push_back(Move::idle());
    for (int k = 0; k < kTranslationCount; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / kTranslationCount;
        moves.push_back(Move::translate(angle, step_norm));
    }
    return moves;
}

Eigen::VectorXd move_position(const Frame& frame, const Move& move) {
    if (move.is_idle()) return frame.origin;
    const int d = frame.dim();
    const Eigen::VectorXd depth = frame.basis.col(d - 1);
    const Eigen::VectorXd lateral = frame.basis.col(0);
    return frame.origin +
           move.step_norm * (std::cos(move.direction_angle) * depth +
                             std::sin(move.direction_angle) * lateral);
}

ScoredMove score_move(const AgentState& state,
                      const Move& move,
                      const Eigen::VectorXd& object,
                      const GeometryKind& kind,
                      const SensorModel& sensor,
                      const IntegrationConfig& cfg) {
    ScoredMove result;
    result.move = move;
    try {
        const Eigen::VectorXd candidate = move_position(state.frame, move);
        const Frame next = look_at_frame(candidate, object);
        const Transform transform = frame_transition(state.frame, next, kind);
        GaussianBelief pushed = pushforward(state.belief, transform, cfg);
        result.epistemic_value = epistemic_value(pushed, sensor);
        result.pushed_belief = std::move(pushed);
    } catch (const std::exception& err) {
        result.failure = err.what();
        result.epistemic_value = -std::numeric_limits<double>::infinity();
    }
    return result;
}

Move select_move(const std::vector<ScoredMove>& scored, double idle_band) {
    const ScoredMove* idle = nullptr;
    bool has_idle = false;
    for (const auto& s : scored) {
        if (!s.move.is_idle()) continue;
        has_idle = true;
        if (s.valid()) idle = &s;
    }
    if (scored.empty() || !has_idle) {
        throw std::invalid_argument("select_move: list must contain the idle move");
    }
    const ScoredMove* best = nullptr;
    for (const auto& s : scored) {
        if (s.move.is_idle() || !s.valid()) continue;
        if (best == nullptr || s.epistemic_value > best->epistemic_value ||
            (s.epistemic_value == best->epistemic_value &&
             s.move.direction_angle < best->move.direction_angle)) {
            best = &s;
        }
    }
    if (idle == nullptr && best == nullptr) {
        throw Error("select_move: all moves failed scoring");
    }
    if (idle == nullptr) return best->move;
    if (best == nullptr || best->epistemic_value <= idle->epistemic_value + idle_band) {
        return idle->move;
    }
    return best->move;
}

Eigen::VectorXd observe(const Frame& frame,
                        const Eigen::VectorXd& object,
                        const GeometryKind& kind,
                        const std::optional<SensorModel>& noise,
                        std::uint64_t noise_seed,
                        bool raw_frame_observation) {
    Eigen::VectorXd rep = transform_point(world_to_frame(frame), object);
    if (kind.is_projective() && !raw_frame_observation) {
        rep = perspective_contract(rep, kind.gamma);
    }
    if (noise) {
        std::mt19937_64 gen(noise_seed);
        std::normal_distribution<double> normal(0.0, noise->epsilon);
        for (Eigen::Index i = 0; i < rep.size(); ++i) rep(i) += normal(gen);
    }
    return rep;
}

Trajectory run_exploration(const ExplorationConfig& config) {
    config.validate();
    const SensorModel sensor = SensorModel::gaussian(config.epsilon);

    Frame frame = look_at_frame(config.start, config.object);
    GaussianBelief belief = initial_belief(config, frame);
    AgentState state{frame, belief, 0};
    Trajectory trajectory{config, state, {}, std::nullopt, std::nullopt};
    for (int t = 0; t < config.iterations; ++t) {
        TrajectoryStep step{state, {}, Move::idle(), Eigen::VectorXd()};
        try {
            const auto moves = enumerate_moves(state, config.object, config.step_norm);
            step.scored.reserve(moves.size());
            int move_index = 0;
            for (const auto& move : moves) {
                IntegrationConfig cfg = config.integration;
                cfg.seed = derive_seed(config.seed, std::uint64_t(t), std::uint64_t(move_index));
                step.scored.push_back(
                    score_move(state, move, config.object, config.geometry, sensor, cfg));
                ++move_index;
            }

            step.chosen = select_move(step.scored, config.idle_band);
            if (!step.chosen.is_idle()) {
                // Min-distance halt: when the preferred translation would get
                // closer than min_distance to the object, stay idle instead of
                // substituting an inferior move.
                const Eigen::VectorXd landing = move_position(state.frame, step.chosen);
                if ((config.object - landing).norm() < config.min_distance) {
                    step.chosen = Move::idle();
                }
            }

            const ScoredMove* executed = nullptr;
            for (const auto& s : step.scored) {
                if (s.move.kind == step.chosen.kind &&
                    s.move.direction_angle == step.chosen.direction_angle) {
                    executed = &s;
                    break;
                }
            }
            if (executed == nullptr || !executed->valid()) {
                throw Error("run_exploration: selected move has no pushed belief");
            }

            const Eigen::VectorXd next_position = move_position(state.frame, step.chosen);
            const Frame next_frame = look_at_frame(next_position, config.object);
            GaussianBelief pushed = *executed->pushed_belief;

            const std::uint64_t obs_seed = derive_seed(config.seed, std::uint64_t(t), 0xb5ULL);
            step.observation =
                observe(next_frame, config.object, config.geometry,
                        config.observation_noise ? std::optional<SensorModel>(sensor)
                                                 : std::nullopt,
                        obs_seed, config.raw_frame_observation);
            GaussianBelief conditioned = condition(pushed, sensor, step.observation);

            state = AgentState{next_frame, std::move(conditioned), t + 1};
            trajectory.steps.push_back(std::move(step));
        } catch (const std::exception& err) {
            trajectory.abort_reason = err.what();
            break;
        }
    }
    trajectory.final_state = state;
    return trajectory;
}

}  // namespace epigeo
