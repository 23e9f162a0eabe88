#pragma once

#include <string>
#include <vector>

#include "kdrrf/executor.hpp"
#include "kdrrf/scenario.hpp"

namespace kdrrf {

struct GenOptions {
    double object_radius = 0.025;  // m
    bool square_objects = false;   // squares of side 2*object_radius instead of discs
    int obstacle_count = 0;
    double time_budget = 60.0;
    double noise_sigma = 0.0;
    PlannerKind planner = PlannerKind::Kdrrf;
};

/// Randomized valid scenario for a task; deterministic under seed.
/// Throws std::runtime_error when placement keeps failing (over-packed).
Scenario generate_scenario(TaskKind kind, int num_objects, int num_classes, uint64_t seed,
                           const GenOptions& opts = {});

struct TrialOutcome {
    std::string task;
    std::string planner;
    int trial = 0;
    uint64_t seed = 0;
    EpisodeResult result;
};

struct BenchRow {
    std::string task;
    std::string planner;
    int successes = 0;
    int trials = 0;
    // Statistics over successful trials only.
    double time_mean = 0.0;
    double time_std = 0.0;
    double actions_mean = 0.0;
    double actions_std = 0.0;

    [[nodiscard]] double success_rate() const {
        return trials > 0 ? static_cast<double>(successes) / trials : 0.0;
    }
};

struct BenchmarkReport {
    std::string version;
    std::string config_echo;  // JSON snippet of the run configuration
    std::vector<BenchRow> rows;
    std::vector<TrialOutcome> trial_records;
};

struct BenchConfig {
    std::vector<TaskKind> tasks{TaskKind::Grasping, TaskKind::Relocating, TaskKind::SortingFree,
                                TaskKind::SortingRegions};
    std::vector<PlannerKind> planners{PlannerKind::Kdrrf, PlannerKind::Dhrrt};
    int trials = 50;
    uint64_t seed = 1;
    double noise_sigma = 0.0;
    int jobs = 1;            // 1 = serial reference path, >1 = OpenMP
    bool paper_scale = false;
    double budget_override = 0.0;  // > 0 replaces the per-task default
    GenOptions gen;
};

/// Desk-scale task dimensions (paper-scale behind the flag): object count,
/// class count and time budget for one task.
struct TaskScale {
    int num_objects;
    int num_classes;
    double time_budget;
};
TaskScale task_scale(TaskKind kind, bool paper_scale);

/// Run trials x planners x tasks episodes and aggregate. Trials are
/// independent (per-trial RNG streams); jobs > 1 runs them under OpenMP with
/// results identical to the serial path.
BenchmarkReport run_benchmark(const BenchConfig& cfg);

/// Benchmark a fixed scenario set (same aggregation, scenario per trial).
BenchmarkReport run_benchmark_scenarios(const std::vector<Scenario>& scenarios,
                                        const std::vector<PlannerKind>& planners, int jobs);

/// Recompute the aggregate rows from per-trial records (report audit path).
std::vector<BenchRow> aggregate_rows(const std::vector<TrialOutcome>& trial_records);

std::string report_to_json(const BenchmarkReport& report);
std::string report_table(const BenchmarkReport& report);

}  // namespace kdrrf
