#pragma once

#include <string>

#include "kdrrf/executor.hpp"

namespace kdrrf {

/// Independent feasibility audit of an executed episode: re-derives every
/// condition from the recorded trajectory using only the world/physics
/// primitives, trusting no planner bookkeeping.
struct FeasibilityReport {
    bool start_matches = false;        // first segment starts at the initial arm config
    bool goal_satisfied = false;       // final observed state satisfies g
    bool transits_contact_free = false;
    bool rearrange_valid = false;      // controls replay, stay valid and in-manifold
    bool endpoints_chain = false;      // adjacent segment endpoints coincide
    std::string detail;                // first violation, empty when feasible

    [[nodiscard]] bool feasible() const {
        return start_matches && goal_satisfied && transits_contact_free && rearrange_valid &&
               endpoints_chain;
    }
};

FeasibilityReport check_solution(const EpisodeResult& episode, const Scenario& s);

}  // namespace kdrrf
