#pragma once

#include <string>

#include "kdrrf/executor.hpp"
#include "kdrrf/scenario.hpp"

namespace kdrrf {

/// Deterministic SVG rendering of a state: workspace, obstacles, goal
/// regions, objects colored by class, arm as a capsule chain.
std::string render_scene_svg(const SystemState& q, const Scenario& s);

/// As render_scene_svg, overlaying the executed end-effector traces
/// (rearranging strokes solid, transits dashed) and the final state.
std::string render_trajectory_svg(const EpisodeResult& episode, const Scenario& s);

void save_svg(const std::string& svg, const std::string& path);

}  // namespace kdrrf
