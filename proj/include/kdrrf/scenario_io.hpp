#pragma once

#include <string>

#include "kdrrf/executor.hpp"
#include "kdrrf/scenario.hpp"

namespace kdrrf {

/// Scenario file format: JSON with top-level keys `workspace`, `shapes`,
/// `obstacles`, `objects`, `goal_regions`, `task`, `params`, `noise_sigma`,
/// `seed`. Lengths in meters, angles in radians. load(save(x)) == x.
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

void save_scenario(const Scenario& s, const std::string& path);
Scenario load_scenario(const std::string& path);

/// Line-delimited trajectory export: one JSON record per executed control
/// (timestamp, twist, predicted state, observed state), transits as
/// boundary records.
std::string trajectory_to_jsonl(const EpisodeResult& episode);
void save_trajectory(const EpisodeResult& episode, const std::string& path);

}  // namespace kdrrf
