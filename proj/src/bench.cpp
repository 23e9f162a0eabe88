#include "kdrrf/bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "kdrrf/rng.hpp"
#include "kdrrf/tasks.hpp"
#include "kdrrf/world.hpp"

#ifndef KDRRF_VERSION
#define KDRRF_VERSION "v0.0.0"
#endif

namespace kdrrf {

using nlohmann::json;

namespace {

Scenario desk_scenario_base(const GenOptions& opts) {
    Scenario s;
    s.workspace = Rect{{0.15, -0.45}, {1.05, 0.45}};
    s.arm = ArmSpec{};
    s.arm.home = {0.35, 0.8, -0.5};
    s.initial_state.arm = s.arm.home;
    s.shapes.push_back(opts.square_objects
                           ? Shape::box(opts.object_radius, opts.object_radius)
                           : Shape::disc(opts.object_radius));
    s.execution.time_budget = opts.time_budget;
    s.noise_sigma = opts.noise_sigma;
    s.planner.planner = opts.planner;
    return s;
}

void add_obstacles(Scenario& s, int count, RngStream& rng) {
    if (count <= 0) return;
    int wall_shape = static_cast<int>(s.shapes.size());
    s.shapes.push_back(Shape::box(0.015, 0.08));
    for (int i = 0; i < count; ++i) {
        for (int attempt = 0; attempt < 100; ++attempt) {
            Pose2 pose{rng.uniform(s.workspace.min.x + 0.15, s.workspace.max.x - 0.15),
                       rng.uniform(s.workspace.min.y + 0.15, s.workspace.max.y - 0.15),
                       rng.uniform(-M_PI, M_PI)};
            Obstacle ob{wall_shape, pose};
            // The home configuration must stay collision-free.
            Scenario probe = s;
            probe.obstacles.push_back(ob);
            if (arm_config_valid(s.arm.home, probe)) {
                s.obstacles.push_back(ob);
                break;
            }
        }
    }
}

}  // namespace

TaskScale task_scale(TaskKind kind, bool paper_scale) {
    if (paper_scale) {
        switch (kind) {
            case TaskKind::Grasping: return {36, 2, 180.0};
            case TaskKind::Relocating: return {36, 2, 180.0};
            case TaskKind::SortingFree: return {9, 3, 300.0};
            case TaskKind::SortingRegions: return {9, 3, 300.0};
        }
    }
    switch (kind) {
        case TaskKind::Grasping: return {10, 2, 60.0};
        case TaskKind::Relocating: return {10, 2, 60.0};
        case TaskKind::SortingFree: return {6, 3, 60.0};
        case TaskKind::SortingRegions: return {6, 3, 120.0};
    }
    return {6, 3, 60.0};
}

Scenario generate_scenario(TaskKind kind, int num_objects, int num_classes, uint64_t seed,
                           const GenOptions& opts) {
    if (num_objects <= 0) throw std::runtime_error("generate_scenario: num_objects must be > 0");
    if (num_classes <= 0 || num_classes > num_objects)
        throw std::runtime_error("generate_scenario: num_classes must be in [1, num_objects]");

    Scenario s = desk_scenario_base(opts);
    s.seed = seed;
    s.num_classes = num_classes;
    s.task.kind = kind;

    switch (kind) {
        case TaskKind::SortingRegions: {
            const std::vector<Vec2> centers = {{0.35, -0.28}, {0.35, 0.28}, {0.72, 0.0},
                                               {0.72, -0.3}, {0.72, 0.3}};
            if (num_classes > static_cast<int>(centers.size()))
                throw std::runtime_error("generate_scenario: too many classes for goal regions");
            for (int c = 0; c < num_classes; ++c) {
                Vec2 ctr = centers[c];
                s.task.goal_regions.push_back(Rect{{ctr.x - 0.09, ctr.y - 0.09},
                                                   {ctr.x + 0.09, ctr.y + 0.09}});
            }
            break;
        }
        case TaskKind::Relocating:
            s.task.target_object = 0;
            s.task.relocate_region = Rect{{0.34, 0.22}, {0.50, 0.38}};
            break;
        case TaskKind::Grasping:
            s.task.target_object = 0;
            s.task.clutter_radius = 0.12;
            break;
        case TaskKind::SortingFree:
            s.task.cluster_d_in = 0.12;
            s.task.separation_d_out = 0.35;
            break;
    }

    RngStream rng = RngStream::derive(seed, "gen");
    add_obstacles(s, opts.obstacle_count, rng);

    const double r_obj = s.shapes[0].bounding_radius();
    const Rect inset{{s.workspace.min.x + r_obj + 0.01, s.workspace.min.y + r_obj + 0.01},
                     {s.workspace.max.x - r_obj - 0.01, s.workspace.max.y - r_obj - 0.01}};
    const ArmGeometry home_geom = arm_geometry(s.arm.home, s.arm);

    auto place_ok = [&](const Pose2& pose, int class_id,
                        const std::vector<ObjectState>& placed) {
        Vec2 p = pose.position();
        // Clear of previously placed objects.
        for (const auto& o : placed)
            if ((o.pose.position() - p).norm() < 2.0 * r_obj + 0.005) return false;
        // Clear of obstacles.
        for (const auto& ob : s.obstacles)
            if (collide(s.shapes[0], pose, s.shapes[ob.shape_id], ob.pose)) return false;
        // Clear of the parked arm.
        for (const auto& link : home_geom.links)
            if (point_segment_distance(p, link.a, link.b) < r_obj + link.radius + 0.01)
                return false;
        if ((p - home_geom.ee_center).norm() < r_obj + home_geom.ee_radius + 0.01) return false;
        // Not already inside its own goal region.
        if (kind == TaskKind::SortingRegions && s.task.goal_regions[class_id].contains(p))
            return false;
        if (kind == TaskKind::Relocating && class_id == 1 && s.task.relocate_region.contains(p))
            return false;
        return true;
    };

    const int max_attempts = 10000;
    int attempts = 0;
    for (int retry = 0;; ++retry) {
        std::vector<ObjectState> objects;
        bool ok = true;
        for (int i = 0; i < num_objects && ok; ++i) {
            int class_id;
            if (kind == TaskKind::Grasping || kind == TaskKind::Relocating)
                class_id = (i == 0) ? 1 : 0;  // class 1 marks the target
            else
                class_id = i % num_classes;
            bool placed = false;
            while (attempts < max_attempts) {
                ++attempts;
                Pose2 pose{rng.uniform(inset.min.x, inset.max.x),
                           rng.uniform(inset.min.y, inset.max.y), rng.uniform(-M_PI, M_PI)};
                if (kind == TaskKind::Grasping && i > 0 && i <= 3) {
                    // Guarantee initial clutter inside the clearance radius.
                    Vec2 t = objects[0].pose.position();
                    double a = rng.uniform(-M_PI, M_PI);
                    double d = rng.uniform(2.0 * r_obj + 0.01, s.task.clutter_radius - 0.005);
                    pose = Pose2{std::clamp(t.x + d * std::cos(a), inset.min.x, inset.max.x),
                                 std::clamp(t.y + d * std::sin(a), inset.min.y, inset.max.y),
                                 rng.uniform(-M_PI, M_PI)};
                }
                if (place_ok(pose, class_id, objects)) {
                    objects.push_back({pose, 0, class_id});
                    placed = true;
                    break;
                }
            }
            if (!placed) ok = false;
        }
        if (ok) {
            s.initial_state.objects = std::move(objects);
            if (is_state_valid(s.initial_state, s) && goal(s.initial_state, s.task, s) == 0) break;
        }
        if (attempts >= max_attempts)
            throw std::runtime_error(
                "generate_scenario: placement failed after 10000 rejections "
                "(over-packed: num_objects=" +
                std::to_string(num_objects) + ", radius=" + std::to_string(opts.object_radius) + ")");
    }

    s.validate();
    return s;
}

namespace {

struct EpisodeJob {
    std::string task;
    PlannerKind planner;
    int trial;
    Scenario scenario;
};

std::vector<TrialOutcome> run_jobs(std::vector<EpisodeJob>& jobs, int num_jobs) {
    std::vector<TrialOutcome> outcomes(jobs.size());
    const int n = static_cast<int>(jobs.size());
    if (num_jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(num_jobs)
        for (int i = 0; i < n; ++i) {
            outcomes[i] = {jobs[i].task, to_string(jobs[i].planner), jobs[i].trial,
                           jobs[i].scenario.seed, run_episode(jobs[i].scenario)};
        }
    } else {
        // Serial reference path; kept separate so the parallel kernel can be
        // validated against it.
        for (int i = 0; i < n; ++i) {
            outcomes[i] = {jobs[i].task, to_string(jobs[i].planner), jobs[i].trial,
                           jobs[i].scenario.seed, run_episode(jobs[i].scenario)};
        }
    }
    return outcomes;
}

}  // namespace

std::vector<BenchRow> aggregate_rows(const std::vector<TrialOutcome>& trial_records) {
    // Aggregation is order-independent: records sort by (task, planner, trial).
    std::vector<TrialOutcome> sorted = trial_records;
    std::sort(sorted.begin(), sorted.end(), [](const TrialOutcome& a, const TrialOutcome& b) {
        return std::tie(a.task, a.planner, a.trial) < std::tie(b.task, b.planner, b.trial);
    });

    std::vector<BenchRow> rows;
    std::map<std::pair<std::string, std::string>, size_t> index;
    for (const auto& rec : sorted) {
        auto key = std::make_pair(rec.task, rec.planner);
        if (!index.count(key)) {
            index[key] = rows.size();
            rows.push_back(BenchRow{rec.task, rec.planner});
        }
        BenchRow& row = rows[index[key]];
        row.trials += 1;
        if (rec.result.success) row.successes += 1;
    }
    // Success-only statistics, paper convention.
    for (auto& row : rows) {
        std::vector<double> times, actions;
        for (const auto& rec : sorted) {
            if (rec.task != row.task || rec.planner != row.planner || !rec.result.success) continue;
            times.push_back(rec.result.planning_time);
            actions.push_back(static_cast<double>(rec.result.num_rearranging_actions));
        }
        auto stats = [](const std::vector<double>& xs) -> std::pair<double, double> {
            if (xs.empty()) return {0.0, 0.0};
            double mean = 0.0;
            for (double x : xs) mean += x;
            mean /= static_cast<double>(xs.size());
            double var = 0.0;
            for (double x : xs) var += (x - mean) * (x - mean);
            var = xs.size() > 1 ? var / static_cast<double>(xs.size() - 1) : 0.0;
            return {mean, std::sqrt(var)};
        };
        std::tie(row.time_mean, row.time_std) = stats(times);
        std::tie(row.actions_mean, row.actions_std) = stats(actions);
    }
    return rows;
}

BenchmarkReport run_benchmark(const BenchConfig& cfg) {
    std::vector<EpisodeJob> jobs;
    for (TaskKind kind : cfg.tasks) {
        TaskScale scale = task_scale(kind, cfg.paper_scale);
        double budget = cfg.budget_override > 0.0 ? cfg.budget_override : scale.time_budget;
        for (int trial = 0; trial < cfg.trials; ++trial) {
            GenOptions gen = cfg.gen;
            gen.time_budget = budget;
            gen.noise_sigma = cfg.noise_sigma;
            uint64_t trial_seed =
                RngStream::derive(cfg.seed, to_string(kind), static_cast<uint64_t>(trial))
                    .next_u64();
            Scenario scenario =
                generate_scenario(kind, scale.num_objects, scale.num_classes, trial_seed, gen);
            for (PlannerKind planner : cfg.planners) {
                Scenario run = scenario;
                run.planner.planner = planner;
                jobs.push_back({to_string(kind), planner, trial, std::move(run)});
            }
        }
    }

    BenchmarkReport report;
    report.version = KDRRF_VERSION;
    json echo = {{"trials", cfg.trials},
                 {"seed", cfg.seed},
                 {"noise_sigma", cfg.noise_sigma},
                 {"jobs", cfg.jobs},
                 {"paper_scale", cfg.paper_scale}};
    report.config_echo = echo.dump();
    report.trial_records = run_jobs(jobs, cfg.jobs);
    std::sort(report.trial_records.begin(), report.trial_records.end(),
              [](const TrialOutcome& a, const TrialOutcome& b) {
                  return std::tie(a.task, a.planner, a.trial) < std::tie(b.task, b.planner, b.trial);
              });
    report.rows = aggregate_rows(report.trial_records);
    return report;
}

BenchmarkReport run_benchmark_scenarios(const std::vector<Scenario>& scenarios,
                                        const std::vector<PlannerKind>& planners, int jobs) {
    std::vector<EpisodeJob> episode_jobs;
    for (size_t i = 0; i < scenarios.size(); ++i) {
        for (PlannerKind planner : planners) {
            Scenario run = scenarios[i];
            run.planner.planner = planner;
            episode_jobs.push_back(
                {to_string(run.task.kind), planner, static_cast<int>(i), std::move(run)});
        }
    }
    BenchmarkReport report;
    report.version = KDRRF_VERSION;
    json echo = {{"scenarios", scenarios.size()}, {"jobs", jobs}};
    report.config_echo = echo.dump();
    report.trial_records = run_jobs(episode_jobs, jobs);
    std::sort(report.trial_records.begin(), report.trial_records.end(),
              [](const TrialOutcome& a, const TrialOutcome& b) {
                  return std::tie(a.task, a.planner, a.trial) < std::tie(b.task, b.planner, b.trial);
              });
    report.rows = aggregate_rows(report.trial_records);
    return report;
}

std::string report_to_json(const BenchmarkReport& report) {
    json j;
    j["version"] = report.version;
    j["config"] = json::parse(report.config_echo);
    json rows = json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"task", row.task},
                        {"planner", row.planner},
                        {"successes", row.successes},
                        {"trials", row.trials},
                        {"time_mean", row.time_mean},
                        {"time_std", row.time_std},
                        {"actions_mean", row.actions_mean},
                        {"actions_std", row.actions_std}});
    j["rows"] = rows;
    json trials = json::array();
    for (const auto& rec : report.trial_records)
        trials.push_back({{"task", rec.task},
                          {"planner", rec.planner},
                          {"trial", rec.trial},
                          {"seed", rec.seed},
                          {"success", rec.result.success},
                          {"wall_time", rec.result.wall_time},
                          {"planning_time", rec.result.planning_time},
                          {"execution_time", rec.result.execution_time},
                          {"num_rearranging_actions", rec.result.num_rearranging_actions},
                          {"num_segments", rec.result.num_segments},
                          {"num_transits", rec.result.num_transits},
                          {"num_fallback_extractions", rec.result.num_fallback_extractions},
                          {"failure_reason", rec.result.failure_reason}});
    j["trials"] = trials;
    return j.dump(2);
}

std::string report_table(const BenchmarkReport& report) {
    char buf[256];
    std::string out;
    snprintf(buf, sizeof(buf), "%-18s %-7s %12s %18s %18s\n", "task", "planner", "success",
             "time (s)", "num. action");
    out += buf;
    out += std::string(76, '-') + '\n';
    for (const auto& row : report.rows) {
        snprintf(buf, sizeof(buf), "%-18s %-7s %6d/%-5d %9.1f +- %6.1f %9.1f +- %6.1f\n",
                 row.task.c_str(), row.planner.c_str(), row.successes, row.trials, row.time_mean,
                 row.time_std, row.actions_mean, row.actions_std);
        out += buf;
    }
    return out;
}

}  // namespace kdrrf
