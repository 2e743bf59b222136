#pragma once

#include <optional>
#include <string>
#include <vector>

#include "epigeo/belief.hpp"
#include "epigeo/geometry.hpp"
#include "epigeo/pushforward.hpp"

namespace epigeo {

enum class MoveKind { Idle, Translate };

/// One candidate move: idle, or a fixed-norm translation whose direction
/// angle is measured from the agent-to-object direction (angle 0 walks
/// straight at the object, angle pi straight away).
struct Move {
    MoveKind kind = MoveKind::Idle;
    double direction_angle = 0.0;  // radians in [0, 2*pi)
    double step_norm = 0.0;        // world units, > 0 for Translate

    static Move idle();
    static Move translate(double direction_angle, double step_norm);

    bool is_idle() const { return kind == MoveKind::Idle; }
};

/// Agent configuration for one exploration run.
struct ExplorationConfig {
    GeometryKind geometry;
    Eigen::VectorXd start;
    Eigen::VectorXd object;
    int iterations = 20;
    double step_norm = 0.1;
    double epsilon = 0.1;     // sensor noise std in the internal model
    double sigma0 = 0.5;      // initial belief std
    double idle_band = 1e-4;  // value range treated as numerically equal
    double min_distance = 0.2;  // moves landing closer than this are excluded
    IntegrationConfig integration;
    std::uint64_t seed = 1;
    bool raw_frame_observation = false;  // observe the frame coordinate without
                                         // the perspective contraction
    bool observation_noise = false;      // add sensor noise to observations

    int dim() const { return static_cast<int>(start.size()); }
    void validate() const;
};

/// Agent state between iterations: its frame always faces the object.
struct AgentState {
    Frame frame;
    GaussianBelief belief;
    int step_index = 0;
};

/// A move together with the belief it would induce and that belief's
/// epistemic value. Moves whose scoring failed carry the error text and
/// take no part in selection.
struct ScoredMove {
    Move move;
    double epistemic_value = 0.0;
    std::optional<GaussianBelief> pushed_belief;
    std::optional<std::string> failure;

    bool valid() const { return pushed_belief.has_value() && !failure.has_value(); }
};

/// One executed iteration: the state the decision was made in, all nine
/// scored candidates, the chosen move and the observation that followed.
struct TrajectoryStep {
    AgentState state;
    std::vector<ScoredMove> scored;
    Move chosen;
    Eigen::VectorXd observation;
};

/// Record of a full exploration run.
struct Trajectory {
    ExplorationConfig config;
    AgentState initial;
    std::vector<TrajectoryStep> steps;
    std::optional<AgentState> final_state;
    std::optional<std::string> abort_reason;

    const AgentState& last_state() const {
        return final_state ? *final_state : initial;
    }
};

/// The nine candidate moves: idle first, then eight translations at
/// angles 2*pi*k/8 (k ascending), angle 0 oriented toward the object.
std::vector<Move> enumerate_moves(const AgentState& state,
                                  const Eigen::VectorXd& object,
                                  double step_norm);

/// World position reached from `frame` by `move`; translations act in
/// the plane spanned by the frame's depth axis and first lateral axis.
Eigen::VectorXd move_position(const Frame& frame, const Move& move);

/// Scores one move: looks at the object from the post-move position,
/// pushes the belief through the induced internal transform and returns
/// its epistemic value. Failures are captured in the result, not thrown.
ScoredMove score_move(const AgentState& state,
                      const Move& move,
                      const Eigen::VectorXd& object,
                      const GeometryKind& kind,
                      const SensorModel& sensor,
                      const IntegrationConfig& cfg);

/// Argmax with the idle tie rule: when no translation beats the idle
/// value by more than idle_band, idle wins; exact ties between
/// translations go to the smaller angle.
Move select_move(const std::vector<ScoredMove>& scored, double idle_band);

/// Internal-model representation of the object seen from `frame`:
/// the frame coordinate in the Euclidean case, its perspective
/// contraction in the projective case. Optional sensor noise (off in the
/// nominal loop) perturbs the result with std epsilon.
Eigen::VectorXd observe(const Frame& frame,
                        const Eigen::VectorXd& object,
                        const GeometryKind& kind,
                        const std::optional<SensorModel>& noise = std::nullopt,
                        std::uint64_t noise_seed = 0,
                        bool raw_frame_observation = false);

/// Runs the exploration loop: score all moves, select, execute, push the
/// belief through the executed transform, observe, condition. Module
/// errors abort the run and leave a partial trajectory with the reason.
Trajectory run_exploration(const ExplorationConfig& config);

}  // namespace epigeo
