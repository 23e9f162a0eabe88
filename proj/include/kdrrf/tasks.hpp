#pragma once

#include "kdrrf/rng.hpp"
#include "kdrrf/scenario.hpp"

namespace kdrrf {

/// Goal criterion g: 1 iff the state satisfies the task goal.
int goal(const SystemState& q, const TaskSpec& t, const Scenario& s);

/// Cost-decreasing heuristic h >= 0; h shrinks as the state approaches the
/// goal. Ignores object orientations.
double heuristic(const SystemState& q, const TaskSpec& t);

/// (dh/dx_i, dh/dy_i) for object i; analytic where available, otherwise
/// central finite differences with step 1e-5 m.
Vec2 heuristic_gradient(const SystemState& q, const TaskSpec& t, int object_index);

/// Progress threshold for a planning cycle starting at q: the explicit
/// TaskSpec value when positive, else progress_fraction * h(q).
double effective_progress_threshold(const SystemState& q, const TaskSpec& t);

/// Goal-biased planner sample: object poses drawn inside (or toward) the
/// task's goal set, arm configuration untouched by the caller.
void sample_goal_biased_objects(SystemState& q, const TaskSpec& t, const Scenario& s,
                                RngStream& rng);

/// Deterministic pre-grasp end-effector pose candidates around the target
/// object (used by the grasping goal's reachability check).
std::vector<Pose2> pregrasp_poses(const SystemState& q, const TaskSpec& t, const Scenario& s);

}  // namespace kdrrf
