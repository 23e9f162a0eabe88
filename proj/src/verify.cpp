#include "kdrrf/verify.hpp"

#include "kdrrf/physics.hpp"
#include "kdrrf/tasks.hpp"
#include "kdrrf/transit.hpp"
#include "kdrrf/world.hpp"

namespace kdrrf {

namespace {

std::string seg_tag(size_t m, const char* what) {
    return "segment " + std::to_string(m) + ": " + what;
}

}  // namespace

FeasibilityReport check_solution(const EpisodeResult& episode, const Scenario& s) {
    FeasibilityReport rep;
    auto fail = [&](const std::string& why) {
        if (rep.detail.empty()) rep.detail = why;
    };

    // (b) the final observed state satisfies the goal criterion
    rep.goal_satisfied = goal(episode.final_state, s.task, s) == 1;
    if (!rep.goal_satisfied) fail("final state does not satisfy the goal");

    // (a) the first transit starts at the initial robot configuration
    rep.start_matches = true;
    if (!episode.trajectory.empty()) {
        const auto& first = episode.trajectory.front();
        rep.start_matches = !first.transit.waypoints.empty() &&
                            first.transit.waypoints.front() == s.initial_state.arm;
        if (!rep.start_matches) fail("first transit does not start at the initial configuration");
    }

    rep.transits_contact_free = true;
    rep.rearrange_valid = true;
    rep.endpoints_chain = true;

    SystemState boundary = s.initial_state;  // observed state entering each segment
    for (size_t m = 0; m < episode.trajectory.size(); ++m) {
        const ExecutedSegment& seg = episode.trajectory[m];
        if (seg.transit.waypoints.empty()) {
            rep.endpoints_chain = false;
            fail(seg_tag(m, "empty transit"));
            break;
        }

        // (e) transit begins where the previous segment observed the arm
        if (seg.transit.waypoints.front() != boundary.arm) {
            rep.endpoints_chain = false;
            fail(seg_tag(m, "transit does not start at the previous observed configuration"));
        }

        // (c) transit intermediate states are contact-free against the
        // objects observed at its start (validated at half resolution)
        if (!path_contact_free(seg.transit, boundary, s, 0.5 * seg.transit.resolution)) {
            rep.transits_contact_free = false;
            fail(seg_tag(m, "transit is not contact-free"));
        }

        // (e) rearranging controls start where the transit ends
        SystemState state = boundary;
        state.arm = seg.transit.waypoints.back();

        // (d) each control replays through the physics, stays valid and
        // inside the manifold; observations chain between controls
        for (size_t k = 0; k < seg.controls.size(); ++k) {
            const ExecutedControl& ctl = seg.controls[k];
            if (!sweep_manifold_check(state, ctl.twist, s)) {
                rep.rearrange_valid = false;
                fail(seg_tag(m, "rearranging sweep leaves the valid manifold"));
                break;
            }
            auto predicted = transition(state, ctl.twist, s);
            if (!predicted || !(*predicted == ctl.predicted)) {
                rep.rearrange_valid = false;
                fail(seg_tag(m, "recorded prediction does not replay"));
                break;
            }
            if (ctl.observed.arm != predicted->arm) {
                rep.endpoints_chain = false;
                fail(seg_tag(m, "observation changes the arm configuration"));
                break;
            }
            state = ctl.observed;
        }
        boundary = state;
    }

    // The last observed state must be the episode's final state.
    if (!(boundary == episode.final_state)) {
        rep.endpoints_chain = false;
        fail("trajectory does not chain to the final state");
    }
    return rep;
}

}  // namespace kdrrf
