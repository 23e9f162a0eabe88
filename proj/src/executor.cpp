#include "kdrrf/executor.hpp"

#include <algorithm>
#include <cmath>

#include "kdrrf/world.hpp"

namespace kdrrf {

SystemState execute_controls(const SystemState& q, const std::vector<MotionPair::Step>& rearrange,
                             const Scenario& s, const NoiseModel& noise, RngStream& rng,
                             std::vector<ExecutedControl>* records) {
    SystemState state = q;
    for (const auto& step : rearrange) {
        auto predicted = transition(state, step.twist, s);
        if (!predicted) break;  // jammed under drifted objects; stop the segment

        SystemState observed = *predicted;
        if (noise.sigma_pos > 0.0 || noise.sigma_theta > 0.0) {
            for (auto& obj : observed.objects) {
                obj.pose.x = std::clamp(obj.pose.x + rng.gaussian(0.0, noise.sigma_pos),
                                        s.workspace.min.x, s.workspace.max.x);
                obj.pose.y = std::clamp(obj.pose.y + rng.gaussian(0.0, noise.sigma_pos),
                                        s.workspace.min.y, s.workspace.max.y);
                obj.pose.theta = wrap_angle(obj.pose.theta + rng.gaussian(0.0, noise.sigma_theta));
            }
            Pose2 tool = fk(observed.arm, s.arm);
            resolve_penetrations(observed, tool, s, s.physics);
            for (auto& obj : observed.objects) {
                obj.pose.x = std::clamp(obj.pose.x, s.workspace.min.x, s.workspace.max.x);
                obj.pose.y = std::clamp(obj.pose.y, s.workspace.min.y, s.workspace.max.y);
            }
        }
        if (records) records->push_back({step.twist, *predicted, observed});
        state = std::move(observed);
    }
    return state;
}

EpisodeResult run_episode(const Scenario& s) {
    NoiseModel noise{s.noise_sigma, s.noise_sigma > 0.0 ? s.execution.sigma_theta : 0.0};
    return run_episode(s, s.planner.planner, noise, s.execution.time_budget);
}

EpisodeResult run_episode(const Scenario& s, PlannerKind planner, const NoiseModel& noise,
                          double time_budget) {
    Scenario cfg = s;
    cfg.planner.planner = planner;
    if (planner == PlannerKind::Dhrrt) cfg.planner.n_tree = 1;  // single tree, trivial transits

    EpisodeResult result;
    result.seed = cfg.seed;

    RngStream planner_rng = RngStream::derive(cfg.seed, "planner");
    RngStream exec_rng = RngStream::derive(cfg.seed, "exec");
    RngStream transit_rng = RngStream::derive(cfg.seed, "transit");

    SystemState q_current = cfg.initial_state;
    result.final_state = q_current;
    if (goal(q_current, cfg.task, cfg) == 1) {
        result.success = true;
        return result;
    }

    CostMeter meter;
    double execution_time = 0.0;
    auto planning_seconds = [&]() { return meter.seconds(cfg.execution); };
    auto wall = [&]() { return planning_seconds() + execution_time; };

    double progress_threshold = effective_progress_threshold(q_current, cfg.task);
    Forest forest = spawn_forest(cfg.planner.n_tree, q_current, cfg, cfg.task, planner_rng, &meter);
    int consecutive_transit_failures = 0;

    while (wall() < time_budget) {
        const double iteration_start = wall();
        expand_forest(forest, cfg, cfg.task, planner_rng, &meter);
        auto pair =
            evaluate_progress(forest, q_current, cfg, cfg.task, progress_threshold, transit_rng, &meter);
        if (!pair) {
            result.last_iteration_cost = std::max(result.last_iteration_cost, wall() - iteration_start);
            continue;
        }

        // Transit: revalidate against the latest observed state, replan on
        // failure, give up after repeated failures.
        if (!path_contact_free(pair->transit, q_current, cfg, pair->transit.resolution)) {
            TransitStats stats;
            auto replanned =
                generate_path(q_current.arm, pair->transit.waypoints.back(), q_current, cfg,
                              cfg.transit.path_budget, transit_rng, &stats);
            meter.transit_nodes += stats.nodes_extended;
            if (!replanned) {
                if (++consecutive_transit_failures > 5) {
                    result.failure_reason = "repeated transit failure";
                    break;
                }
                continue;
            }
            pair->transit = std::move(*replanned);
        }
        consecutive_transit_failures = 0;

        ExecutedSegment segment;
        segment.transit = pair->transit;
        segment.from_size_limit = pair->from_size_limit;
        if (pair->from_size_limit) ++result.num_fallback_extractions;

        if (pair->transit.waypoints.size() > 1) {
            execution_time += pair->transit.length() / cfg.execution.transit_joint_speed;
            ++result.num_transits;
        }
        q_current.arm = pair->transit.waypoints.back();

        SystemState observed =
            execute_controls(q_current, pair->rearrange, cfg, noise, exec_rng, &segment.controls);
        for (const auto& ctl : segment.controls) execution_time += ctl.twist.duration;
        result.num_rearranging_actions += static_cast<int>(segment.controls.size());
        q_current = observed;
        ++result.num_segments;
        result.trajectory.push_back(std::move(segment));
        result.last_iteration_cost = std::max(result.last_iteration_cost, wall() - iteration_start);

        if (goal(q_current, cfg.task, cfg) == 1) {
            result.success = true;
            break;
        }
        progress_threshold = effective_progress_threshold(q_current, cfg.task);
        forest = spawn_forest(cfg.planner.n_tree, q_current, cfg, cfg.task, planner_rng, &meter);
    }

    result.planning_time = planning_seconds();
    result.execution_time = execution_time;
    result.wall_time = wall();
    result.final_state = q_current;
    if (!result.success && result.failure_reason.empty())
        result.failure_reason = "time budget exhausted";
    return result;
}

}  // namespace kdrrf
