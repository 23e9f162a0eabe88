#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "kdrrf/bench.hpp"
#include "kdrrf/render.hpp"
#include "kdrrf/scenario_io.hpp"
#include "kdrrf/verify.hpp"

using namespace kdrrf;

namespace {

PlannerKind parse_planner(const std::string& name) {
    if (name == "kdrrf") return PlannerKind::Kdrrf;
    if (name == "dhrrt") return PlannerKind::Dhrrt;
    throw CLI::ValidationError("--planner", "expected kdrrf or dhrrt");
}

int cmd_gen(const std::string& task, int objects, int classes, uint64_t seed,
            const GenOptions& opts, const std::string& out) {
    TaskKind kind = task_kind_from_string(task);
    Scenario s = generate_scenario(kind, objects, classes, seed, opts);
    if (out.empty()) {
        std::cout << scenario_to_json(s) << '\n';
    } else {
        save_scenario(s, out);
        std::cout << "wrote " << out << '\n';
    }
    return 0;
}

int cmd_plan(const std::string& scenario_path, const std::string& planner, uint64_t seed,
             bool seed_set, double budget, double noise, bool noise_set, const std::string& out,
             const std::string& render_path, bool verify) {
    Scenario s = load_scenario(scenario_path);
    if (seed_set) s.seed = seed;
    if (budget > 0.0) s.execution.time_budget = budget;
    if (noise_set) s.noise_sigma = noise;
    if (!planner.empty()) s.planner.planner = parse_planner(planner);

    EpisodeResult result = run_episode(s);
    std::printf("%s: %s  wall=%.1fs plan=%.1fs actions=%d segments=%d transits=%d\n",
                to_string(s.planner.planner).c_str(), result.success ? "success" : "failure",
                result.wall_time, result.planning_time, result.num_rearranging_actions,
                result.num_segments, result.num_transits);
    if (!result.success) std::printf("reason: %s\n", result.failure_reason.c_str());

    if (!out.empty()) save_trajectory(result, out);
    if (!render_path.empty()) save_svg(render_trajectory_svg(result, s), render_path);
    if (verify) {
        FeasibilityReport rep = check_solution(result, s);
        std::printf("feasibility: %s%s%s\n", rep.feasible() ? "pass" : "FAIL",
                    rep.detail.empty() ? "" : " - ", rep.detail.c_str());
        if (result.success && !rep.feasible()) return 2;
    }
    return 0;
}

int cmd_bench(const BenchConfig& cfg, const std::string& scenario_path, const std::string& out) {
    BenchmarkReport report;
    if (!scenario_path.empty()) {
        std::vector<Scenario> scenarios{load_scenario(scenario_path)};
        report = run_benchmark_scenarios(scenarios, cfg.planners, cfg.jobs);
    } else {
        report = run_benchmark(cfg);
    }
    std::cout << report_table(report);
    if (!out.empty()) {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << report_to_json(report) << '\n';
        std::cout << "wrote " << out << '\n';
    }
    return 0;
}

int cmd_render(const std::string& scenario_path, const std::string& traj_path,
               const std::string& out) {
    Scenario s = load_scenario(scenario_path);
    if (traj_path.empty()) {
        save_svg(render_scene_svg(s.initial_state, s), out);
    } else {
        // Re-run the episode deterministically; the file is its replay.
        EpisodeResult result = run_episode(s);
        save_svg(render_trajectory_svg(result, s), out);
    }
    std::cout << "wrote " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kdRRF rearrangement planning benchmark"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate a scenario file");
    std::string gen_task = "sorting_regions", gen_out;
    int gen_objects = 6, gen_classes = 3, gen_obstacles = 0;
    uint64_t gen_seed = 1;
    bool gen_square = false;
    gen->add_option("--task", gen_task, "task kind");
    gen->add_option("--objects", gen_objects, "number of movable objects");
    gen->add_option("--classes", gen_classes, "number of object classes");
    gen->add_option("--seed", gen_seed, "generation seed");
    gen->add_option("--obstacles", gen_obstacles, "number of static obstacles");
    gen->add_flag("--square", gen_square, "square objects instead of discs");
    gen->add_option("--out", gen_out, "output path (stdout when omitted)");

    // plan
    auto* plan = app.add_subcommand("plan", "run one planning episode");
    std::string plan_scenario, plan_planner, plan_out, plan_render;
    uint64_t plan_seed = 0;
    double plan_budget = 0.0, plan_noise = 0.0;
    bool plan_verify = false;
    plan->add_option("--scenario", plan_scenario, "scenario file")->required();
    plan->add_option("--planner", plan_planner, "kdrrf or dhrrt");
    auto* plan_seed_opt = plan->add_option("--seed", plan_seed, "episode seed override");
    plan->add_option("--budget", plan_budget, "time budget override (seconds)");
    auto* plan_noise_opt = plan->add_option("--noise", plan_noise, "noise sigma override (m)");
    plan->add_option("--out", plan_out, "trajectory output (jsonl)");
    plan->add_option("--render", plan_render, "render the executed episode (svg)");
    plan->add_flag("--verify", plan_verify, "audit the solution feasibility");

    // bench
    auto* bench = app.add_subcommand("bench", "run the benchmark suite");
    std::string bench_scenario, bench_out, bench_task, bench_planner = "both";
    BenchConfig cfg;
    bench->add_option("--scenario", bench_scenario, "benchmark one scenario file");
    bench->add_option("--task", bench_task, "restrict to one task kind");
    bench->add_option("--planner", bench_planner, "kdrrf, dhrrt or both");
    bench->add_option("--trials", cfg.trials, "trials per task");
    bench->add_option("--seed", cfg.seed, "base seed");
    bench->add_option("--budget", cfg.budget_override, "budget override (seconds)");
    bench->add_option("--noise", cfg.noise_sigma, "noise sigma (m)");
    bench->add_option("--jobs", cfg.jobs, "parallel trials (OpenMP)");
    bench->add_option("--out", bench_out, "report output (json)");
    bench->add_flag("--paper-scale", cfg.paper_scale, "paper-scale object counts and budgets");

    // render
    auto* render = app.add_subcommand("render", "render a scenario or trajectory");
    std::string render_scenario, render_traj, render_out;
    render->add_option("--scenario", render_scenario, "scenario file")->required();
    render->add_option("--traj", render_traj, "replay the episode and overlay traces");
    render->add_option("--out", render_out, "output path (svg)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            GenOptions opts;
            opts.obstacle_count = gen_obstacles;
            opts.square_objects = gen_square;
            return cmd_gen(gen_task, gen_objects, gen_classes, gen_seed, opts, gen_out);
        }
        if (plan->parsed())
            return cmd_plan(plan_scenario, plan_planner, plan_seed, plan_seed_opt->count() > 0,
                            plan_budget, plan_noise, plan_noise_opt->count() > 0, plan_out,
                            plan_render, plan_verify);
        if (bench->parsed()) {
            if (!bench_task.empty()) cfg.tasks = {task_kind_from_string(bench_task)};
            if (bench_planner == "kdrrf") cfg.planners = {PlannerKind::Kdrrf};
            else if (bench_planner == "dhrrt") cfg.planners = {PlannerKind::Dhrrt};
            else if (bench_planner != "both")
                throw CLI::ValidationError("--planner", "expected kdrrf, dhrrt or both");
            return cmd_bench(cfg, bench_scenario, bench_out);
        }
        if (render->parsed()) return cmd_render(render_scenario, render_traj, render_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
