#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kdrrf/arm.hpp"
#include "kdrrf/geometry.hpp"

namespace kdrrf {

struct ObjectState {
    Pose2 pose{};
    int shape_id = 0;
    int class_id = 0;

    friend bool operator==(const ObjectState&, const ObjectState&) = default;
};

/// Full system state: arm configuration plus the poses of all movables.
/// Object order is fixed for the life of a scenario.
struct SystemState {
    JointVec arm{0.0, 0.0, 0.0};
    std::vector<ObjectState> objects;

    friend bool operator==(const SystemState&, const SystemState&) = default;
};

struct Obstacle {
    int shape_id = 0;
    Pose2 pose{};

    friend bool operator==(const Obstacle&, const Obstacle&) = default;
};

enum class TaskKind { Grasping, Relocating, SortingFree, SortingRegions };

std::string to_string(TaskKind kind);
TaskKind task_kind_from_string(const std::string& s);

struct TaskSpec {
    TaskKind kind = TaskKind::SortingRegions;
    int target_object = 0;           // grasping, relocating
    Rect relocate_region{};          // relocating
    std::vector<Rect> goal_regions;  // sorting_regions, one per class
    double clutter_radius = 0.15;    // grasping
    double cluster_d_in = 0.12;      // sorting_free
    double separation_d_out = 0.35;  // sorting_free
    // Progress threshold p in heuristic units; <= 0 selects the automatic
    // threshold (progress_fraction of the heuristic at each forest respawn).
    double progress_threshold = 0.0;
    double progress_fraction = 0.1;

    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct PhysicsParams {
    double substep_dt = 0.05;         // s
    int max_resolve_iters = 32;
    double contact_tolerance = 1e-4;  // m
    double rotation_coupling = 0.5;   // polygon rotation heuristic, [0, 1]

    friend bool operator==(const PhysicsParams&, const PhysicsParams&) = default;
};

struct TransitParams {
    double extend_step = 0.1;    // rad, RRT-connect extension step
    double resolution = 0.05;    // rad, max joint-space gap between validated samples
    int path_budget = 5000;      // nodes, generate_path
    int exists_budget = 1000;    // nodes, exists_path
    int shortcut_attempts = 100;

    friend bool operator==(const TransitParams&, const TransitParams&) = default;
};

enum class RootSampling { Uniform, TaskOriented };
enum class StretchKind { Exp, Power };
enum class PlannerKind { Kdrrf, Dhrrt };

std::string to_string(PlannerKind kind);

struct PlannerParams {
    PlannerKind planner = PlannerKind::Kdrrf;
    int n_tree = 3;
    int candidate_controls = 5;   // C
    int forest_size_limit = 300;  // S_max
    RootSampling root_sampling = RootSampling::TaskOriented;
    StretchKind stretch = StretchKind::Exp;
    double stretch_power = 2.0;
    double goal_bias = 0.1;
    double w_robot = 0.2;
    double w_obj = 1.0;
    double w_theta = 0.1;
    // Root offset sampled in [min, max] x (object bounding radius + tool radius).
    double root_offset_min = 1.2;
    double root_offset_max = 2.0;
    int root_attempts = 50;
    double twist_duration = 0.5;  // s, per sampled control
    double v_lin_max = 0.2;       // m/s
    double v_ang_max = 1.0;       // rad/s

    friend bool operator==(const PlannerParams&, const PlannerParams&) = default;
};

/// Deterministic accounting rates for the episode clock. Planning work is
/// charged per simulated physics substep / transit tree node / IK solve, so
/// a (scenario, seed) pair always exhausts its budget at the same point.
struct ExecutionParams {
    double time_budget = 60.0;            // s
    double sigma_theta = 0.02;            // rad, per-action orientation noise
    double cost_per_substep = 2e-3;       // s charged per simulated substep
    double cost_per_transit_node = 1e-4;  // s charged per RRT-connect extension
    double cost_per_ik = 2e-3;            // s charged per IK query
    double transit_joint_speed = 1.5;     // rad/s, transit execution charge rate

    friend bool operator==(const ExecutionParams&, const ExecutionParams&) = default;
};

struct Scenario {
    Rect workspace{};
    std::vector<Shape> shapes;
    std::vector<Obstacle> obstacles;
    SystemState initial_state;
    int num_classes = 1;  // L
    TaskSpec task;
    ArmSpec arm;
    PhysicsParams physics;
    TransitParams transit;
    PlannerParams planner;
    ExecutionParams execution;
    double noise_sigma = 0.0;  // m, per-action position noise
    uint64_t seed = 0;

    [[nodiscard]] int num_objects() const { return static_cast<int>(initial_state.objects.size()); }
    [[nodiscard]] const Shape& object_shape(const ObjectState& o) const { return shapes[o.shape_id]; }

    /// Throws std::invalid_argument on inconsistent indices or regions.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

}  // namespace kdrrf
