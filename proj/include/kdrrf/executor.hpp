#pragma once

#include <string>

#include "kdrrf/forest.hpp"

namespace kdrrf {

/// Per-action execution noise standing in for real-world physics and
/// perception uncertainty.
struct NoiseModel {
    double sigma_pos = 0.0;    // m, per axis
    double sigma_theta = 0.0;  // rad
};

/// One executed rearranging control with its pre-noise prediction and the
/// post-noise observed state.
struct ExecutedControl {
    Twist2 twist;
    SystemState predicted;
    SystemState observed;
};

/// One executed (transit, rearrange) segment pair.
struct ExecutedSegment {
    JointPath transit;
    std::vector<ExecutedControl> controls;
    bool from_size_limit = false;
};

struct EpisodeResult {
    bool success = false;
    std::string failure_reason;
    double wall_time = 0.0;       // virtual seconds: planning + execution
    double planning_time = 0.0;   // virtual seconds
    double execution_time = 0.0;  // simulated motion seconds
    int num_rearranging_actions = 0;
    int num_segments = 0;  // M
    int num_transits = 0;  // transits that actually moved the arm
    int num_fallback_extractions = 0;
    double last_iteration_cost = 0.0;  // budget overshoot bound
    std::vector<ExecutedSegment> trajectory;
    SystemState final_state;
    uint64_t seed = 0;
};

/// Apply each twist through the physics, then perturb every object pose by
/// the noise model (clamped to the workspace, penetrations re-resolved).
/// Appends one record per executed control when `records` is given.
SystemState execute_controls(const SystemState& q, const std::vector<MotionPair::Step>& rearrange,
                             const Scenario& s, const NoiseModel& noise, RngStream& rng,
                             std::vector<ExecutedControl>* records = nullptr);

/// Closed-loop episode: spawn forest, expand until progress, execute the
/// motion pair under noise, observe, respawn; stops on goal or when the
/// (deterministic) clock exhausts the budget.
EpisodeResult run_episode(const Scenario& s);

/// As run_episode, with the planner/noise/budget overridden.
EpisodeResult run_episode(const Scenario& s, PlannerKind planner, const NoiseModel& noise,
                          double time_budget);

}  // namespace kdrrf
