#pragma once

#include <array>

#include "kdrrf/scenario.hpp"

namespace kdrrf {

/// Collision model of the arm at one configuration: three link capsules plus
/// the end-effector disc.
struct ArmGeometry {
    std::array<Capsule, 3> links;
    Vec2 ee_center{};
    double ee_radius = 0.0;
};

ArmGeometry arm_geometry(const JointVec& q, const ArmSpec& spec);

/// Valid system state: arm within joint limits, object centroids inside the
/// workspace, robot clear of static obstacles and of itself. Contacts
/// between movables, obstacles, and the robot do not invalidate a state.
/// Throws std::invalid_argument on a structural mismatch with the scenario.
bool is_state_valid(const SystemState& q, const Scenario& s);

/// Arm-only validity: joint limits, no link/tool collision with static
/// obstacles, no self-collision between non-adjacent links.
bool arm_config_valid(const JointVec& q, const Scenario& s);

/// Transit validity: arm_config_valid plus clearance from every movable
/// object frozen at its pose. Transit motions must touch nothing.
bool arm_contact_free(const JointVec& q, const SystemState& frozen, const Scenario& s);

}  // namespace kdrrf
