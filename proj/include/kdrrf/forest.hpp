#pragma once

#include <optional>

#include "kdrrf/physics.hpp"
#include "kdrrf/rng.hpp"
#include "kdrrf/scenario.hpp"
#include "kdrrf/tasks.hpp"
#include "kdrrf/transit.hpp"

namespace kdrrf {

/// Work counters mapped onto the episode clock by the executor.
struct CostMeter {
    long substeps = 0;       // physics substeps simulated while planning
    long transit_nodes = 0;  // RRT-connect extensions
    long ik_solves = 0;

    [[nodiscard]] double seconds(const ExecutionParams& e) const {
        return substeps * e.cost_per_substep + transit_nodes * e.cost_per_transit_node +
               ik_solves * e.cost_per_ik;
    }
};

/// Node of a kinodynamic tree: a system state reached from its parent by one
/// end-effector twist (with its joint-space realization).
struct TreeNode {
    SystemState state;
    int parent = -1;  // node index, -1 for roots
    std::optional<Twist2> incoming_twist;
    std::optional<JointControl> incoming_control;
    double h_value = 0.0;
    int tree_id = 0;
    int child_count = 0;
};

/// A forest of kinodynamic trees over one shared object arrangement, indexed
/// globally for nearest-neighbor queries.
struct Forest {
    std::vector<TreeNode> nodes;
    std::vector<int> roots;       // node indices of tree roots
    int latest = -1;              // most recently added non-root node
    int dropped_roots = 0;        // root slots that failed to spawn

    [[nodiscard]] int size() const { return static_cast<int>(nodes.size()); }
    [[nodiscard]] std::vector<int> leaves() const;
    /// Path of node indices from the root of idx's tree down to idx.
    [[nodiscard]] std::vector<int> trace_to_root(int idx) const;
};

/// One executable planning step: a transit path to a tree root followed by
/// the rearranging controls from that root to the selected node.
struct MotionPair {
    struct Step {
        Twist2 twist;
        JointControl control;
        SystemState predicted;
    };
    JointPath transit;
    std::vector<Step> rearrange;
    int source_node = -1;
    bool from_size_limit = false;  // extracted via the S_max fallback
};

/// Weighted state-space metric: joint-space distance plus per-object
/// positional and wrapped-angular terms.
double distance(const SystemState& a, const SystemState& b, const PlannerParams& params);

/// One object-arrangement-preserving root state near a selected movable
/// object (uniform or gradient-stretched selection), or nullopt if IK fails.
std::optional<SystemState> sample_root(const SystemState& q, const TaskSpec& task,
                                       const Scenario& s, RngStream& rng,
                                       CostMeter* meter = nullptr);

/// Per-object selection probabilities used by sample_root.
std::vector<double> root_selection_probabilities(const SystemState& q, const TaskSpec& task,
                                                 const PlannerParams& params);

/// Spawn n_tree roots: root 0 is q; the rest are sampled near objects,
/// contact-free, and connectivity-checked against q's arm configuration.
/// Degrades to fewer roots (>= 1) when sampling keeps failing.
Forest spawn_forest(int n_tree, const SystemState& q, const Scenario& s, const TaskSpec& task,
                    RngStream& rng, CostMeter* meter = nullptr);

/// One expansion attempt: sample a state, pick the nearest node across all
/// trees, try candidate_controls twists, keep the best simulated outcome if
/// its projection and sweep check succeed. Grows the forest by 0 or 1 nodes.
void expand_forest(Forest& f, const Scenario& s, const TaskSpec& task, RngStream& rng,
                   CostMeter* meter = nullptr);

/// Dynamic-horizon extraction: the latest node when it reaches the goal or
/// improves h(q_current) by more than the progress threshold; the best leaf
/// when the forest hits the size limit; nullopt to keep expanding.
std::optional<MotionPair> evaluate_progress(const Forest& f, const SystemState& q_current,
                                            const Scenario& s, const TaskSpec& task,
                                            double progress_threshold, RngStream& transit_rng,
                                            CostMeter* meter = nullptr);

/// Brute-force nearest node index under distance(); the production query is
/// the same linear scan, exposed for oracle checks.
int find_nearest(const Forest& f, const SystemState& q, const PlannerParams& params);

/// Uniform or goal-biased planner state sample.
SystemState sample_state(const Scenario& s, const TaskSpec& task, RngStream& rng);

}  // namespace kdrrf
