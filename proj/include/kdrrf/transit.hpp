#pragma once

#include <optional>

#include "kdrrf/rng.hpp"
#include "kdrrf/scenario.hpp"

namespace kdrrf {

/// Geometric joint-space path. Consecutive waypoints interpolate
/// collision-free (against obstacles and the frozen movables) when sampled
/// at `resolution` radians.
struct JointPath {
    std::vector<JointVec> waypoints;
    double resolution = 0.05;

    [[nodiscard]] double length() const;

    friend bool operator==(const JointPath&, const JointPath&) = default;
};

/// Planner work counters, charged against the episode clock by the caller.
struct TransitStats {
    int nodes_extended = 0;
};

/// Bidirectional RRT-connect between two contact-free configurations, with
/// greedy shortcutting. Objects stay frozen at their poses in
/// `frozen_state`. Returns nullopt when the node budget runs out.
/// Throws std::invalid_argument when an endpoint is not contact-free.
std::optional<JointPath> generate_path(const JointVec& from_config, const JointVec& to_config,
                                       const SystemState& frozen_state, const Scenario& s,
                                       int budget, RngStream& rng, TransitStats* stats = nullptr);

/// Connectivity probe: generate_path with the (smaller) probe budget,
/// discarding the path. False is a budget verdict, not a disconnection proof.
bool exists_path(const JointVec& from_config, const JointVec& to_config,
                 const SystemState& frozen_state, const Scenario& s, int budget, RngStream& rng,
                 TransitStats* stats = nullptr);

/// Straight-line edge validity at the given joint-space resolution.
bool edge_contact_free(const JointVec& a, const JointVec& b, const SystemState& frozen,
                       const Scenario& s, double resolution);

/// Re-validate a whole path waypoint-by-waypoint at the given resolution.
bool path_contact_free(const JointPath& path, const SystemState& frozen, const Scenario& s,
                       double resolution);

}  // namespace kdrrf
