#pragma once

#include <optional>

#include "kdrrf/scenario.hpp"

namespace kdrrf {

/// Quasi-static pushing transition: sweep the end-effector along the twist in
/// substeps, displacing penetrated objects along contact normals. Objects
/// have no residual velocity. Deterministic: identical inputs give
/// bit-identical outputs.
///
/// Returns nullopt when the control is infeasible: the arm projection fails
/// mid-sweep (joint limit or singularity) or penetration resolution jams.
std::optional<SystemState> transition(const SystemState& q, const Twist2& v, const Scenario& s,
                                      const PhysicsParams& p);

/// Convenience overload using the scenario's physics parameters.
inline std::optional<SystemState> transition(const SystemState& q, const Twist2& v,
                                             const Scenario& s) {
    return transition(q, v, s, s.physics);
}

/// True iff every substate of the sweep is valid per is_state_valid; the
/// planar arm keeps the end-effector in the task manifold by construction.
bool sweep_manifold_check(const SystemState& q_start, const Twist2& v, const Scenario& s,
                          const PhysicsParams& p);

inline bool sweep_manifold_check(const SystemState& q_start, const Twist2& v, const Scenario& s) {
    return sweep_manifold_check(q_start, v, s, s.physics);
}

/// Displace objects so no pair penetrates deeper than the contact tolerance;
/// used by the physics substeps and for post-noise cleanup. Returns false if
/// the configuration jams (residual > 10 x tolerance after max iterations).
bool resolve_penetrations(SystemState& q, const std::optional<Pose2>& tool_pose,
                          const Scenario& s, const PhysicsParams& p);

/// Number of integration substeps transition() uses for a twist.
int substep_count(const Twist2& v, const PhysicsParams& p);

}  // namespace kdrrf
