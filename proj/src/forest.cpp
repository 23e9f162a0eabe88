#include "kdrrf/forest.hpp"

#include <algorithm>
#include <cmath>

#include "kdrrf/world.hpp"

namespace kdrrf {

std::vector<int> Forest::leaves() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
        if (nodes[i].child_count == 0) out.push_back(i);
    return out;
}

std::vector<int> Forest::trace_to_root(int idx) const {
    std::vector<int> chain;
    for (int i = idx; i >= 0; i = nodes[i].parent) chain.push_back(i);
    std::reverse(chain.begin(), chain.end());
    return chain;
}

double distance(const SystemState& a, const SystemState& b, const PlannerParams& params) {
    double joint = 0.0;
    for (int i = 0; i < 3; ++i) joint += (a.arm[i] - b.arm[i]) * (a.arm[i] - b.arm[i]);
    double d = params.w_robot * std::sqrt(joint);
    for (size_t i = 0; i < a.objects.size(); ++i) {
        d += params.w_obj * (a.objects[i].pose.position() - b.objects[i].pose.position()).norm();
        d += params.w_theta * std::abs(wrap_angle(a.objects[i].pose.theta - b.objects[i].pose.theta));
    }
    return d;
}

int find_nearest(const Forest& f, const SystemState& q, const PlannerParams& params) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < f.size(); ++i) {
        double d = distance(f.nodes[i].state, q, params);
        if (d < best_d) {  // ties resolve to the lowest insertion index
            best_d = d;
            best = i;
        }
    }
    return best;
}

SystemState sample_state(const Scenario& s, const TaskSpec& task, RngStream& rng) {
    SystemState q = s.initial_state;
    for (int i = 0; i < 3; ++i)
        q.arm[i] = rng.uniform(s.arm.joint_limits[i].first, s.arm.joint_limits[i].second);
    if (rng.uniform01() < s.planner.goal_bias) {
        sample_goal_biased_objects(q, task, s, rng);
    } else {
        for (auto& o : q.objects) {
            o.pose = Pose2{rng.uniform(s.workspace.min.x, s.workspace.max.x),
                           rng.uniform(s.workspace.min.y, s.workspace.max.y),
                           rng.uniform(-M_PI, M_PI)};
        }
    }
    return q;
}

std::vector<double> root_selection_probabilities(const SystemState& q, const TaskSpec& task,
                                                 const PlannerParams& params) {
    const size_t n = q.objects.size();
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    if (params.root_sampling == RootSampling::Uniform) return p;

    // Task-oriented: stretch the per-object heuristic gradient magnitudes.
    std::vector<double> weights(n);
    double z = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double mag = heuristic_gradient(q, task, static_cast<int>(i)).norm();
        double w = params.stretch == StretchKind::Exp ? std::exp(mag)
                                                      : std::pow(mag, params.stretch_power);
        weights[i] = w;
        z += w;
    }
    if (z <= 0.0 || !std::isfinite(z)) return p;  // degenerate: fall back to uniform
    for (size_t i = 0; i < n; ++i) p[i] = weights[i] / z;
    return p;
}

std::optional<SystemState> sample_root(const SystemState& q, const TaskSpec& task,
                                       const Scenario& s, RngStream& rng, CostMeter* meter) {
    auto probs = root_selection_probabilities(q, task, s.planner);
    double u = rng.uniform01();
    int chosen = static_cast<int>(probs.size()) - 1;
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            chosen = static_cast<int>(i);
            break;
        }
    }

    const ObjectState& obj = q.objects[chosen];
    double contact_dist = s.object_shape(obj).bounding_radius() + s.arm.ee_radius;
    double offset = contact_dist * rng.uniform(s.planner.root_offset_min, s.planner.root_offset_max);
    double angle = rng.uniform(-M_PI, M_PI);
    Vec2 pos = obj.pose.position() + offset * Vec2{std::cos(angle), std::sin(angle)};
    double facing = std::atan2(obj.pose.y - pos.y, obj.pose.x - pos.x);
    Pose2 target{pos.x, pos.y, wrap_angle(facing + rng.uniform(-M_PI / 4.0, M_PI / 4.0))};

    if (meter) ++meter->ik_solves;
    auto config = ik(target, s.arm, q.arm);
    if (!config) return std::nullopt;
    SystemState root = q;
    root.arm = *config;
    return root;
}

Forest spawn_forest(int n_tree, const SystemState& q, const Scenario& s, const TaskSpec& task,
                    RngStream& rng, CostMeter* meter) {
    Forest f;
    auto add_root = [&](const SystemState& state) {
        TreeNode node;
        node.state = state;
        node.h_value = heuristic(state, task);
        node.tree_id = static_cast<int>(f.roots.size());
        f.roots.push_back(f.size());
        f.nodes.push_back(std::move(node));
    };
    add_root(q);

    for (int slot = 1; slot < n_tree; ++slot) {
        bool placed = false;
        for (int attempt = 0; attempt < s.planner.root_attempts && !placed; ++attempt) {
            auto root = sample_root(q, task, s, rng, meter);
            if (!root) continue;
            if (!arm_contact_free(root->arm, q, s)) continue;
            TransitStats stats;
            RngStream probe_rng(rng.next_u64());
            bool connected =
                exists_path(q.arm, root->arm, q, s, s.transit.exists_budget, probe_rng, &stats);
            if (meter) meter->transit_nodes += stats.nodes_extended;
            if (!connected) continue;
            add_root(*root);
            placed = true;
        }
        if (!placed) ++f.dropped_roots;  // degrade rather than fail
    }
    return f;
}

void expand_forest(Forest& f, const Scenario& s, const TaskSpec& task, RngStream& rng,
                   CostMeter* meter) {
    const PlannerParams& pp = s.planner;
    SystemState q_rand = sample_state(s, task, rng);
    int near_idx = find_nearest(f, q_rand, pp);
    const TreeNode& near = f.nodes[near_idx];

    // Sample C twists, simulate each, keep the one closest to q_rand.
    std::optional<Twist2> best_twist;
    std::optional<SystemState> best_state;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < pp.candidate_controls; ++c) {
        Twist2 v{rng.uniform(-pp.v_lin_max, pp.v_lin_max), rng.uniform(-pp.v_lin_max, pp.v_lin_max),
                 rng.uniform(-pp.v_ang_max, pp.v_ang_max), pp.twist_duration};
        if (meter) meter->substeps += substep_count(v, s.physics);
        auto q_next = transition(near.state, v, s);
        if (!q_next) continue;
        double d = distance(*q_next, q_rand, pp);
        if (d < best_d) {
            best_d = d;
            best_twist = v;
            best_state = std::move(q_next);
        }
    }
    if (!best_twist) return;

    if (meter) meter->substeps += substep_count(*best_twist, s.physics);
    auto control = jacobian_projection(*best_twist, near.state.arm, s.arm, s.physics.substep_dt,
                                       [&](const JointVec& cfg) { return arm_config_valid(cfg, s); });
    if (!control) return;
    if (meter) meter->substeps += substep_count(*best_twist, s.physics);
    if (!sweep_manifold_check(near.state, *best_twist, s)) return;

    TreeNode node;
    node.state = std::move(*best_state);
    node.parent = near_idx;
    node.incoming_twist = *best_twist;
    node.incoming_control = std::move(*control);
    node.h_value = heuristic(node.state, task);
    node.tree_id = near.tree_id;
    f.nodes[near_idx].child_count += 1;
    f.latest = f.size();
    f.nodes.push_back(std::move(node));
}

namespace {

std::optional<MotionPair> extract_pair(const Forest& f, int node_idx,
                                       const SystemState& q_current, const Scenario& s,
                                       RngStream& transit_rng, CostMeter* meter,
                                       bool from_size_limit) {
    auto chain = f.trace_to_root(node_idx);
    const TreeNode& root = f.nodes[chain.front()];

    // Guard the transit contract: endpoints must be contact-free unless the
    // query is in-place (observation noise can leave the arm in contact).
    if (q_current.arm != root.state.arm &&
        (!arm_contact_free(q_current.arm, q_current, s) ||
         !arm_contact_free(root.state.arm, q_current, s)))
        return std::nullopt;

    TransitStats stats;
    auto transit = generate_path(q_current.arm, root.state.arm, q_current, s,
                                 s.transit.path_budget, transit_rng, &stats);
    if (meter) meter->transit_nodes += stats.nodes_extended;
    if (!transit) return std::nullopt;

    MotionPair pair;
    pair.transit = std::move(*transit);
    pair.source_node = node_idx;
    pair.from_size_limit = from_size_limit;
    for (size_t i = 1; i < chain.size(); ++i) {
        const TreeNode& n = f.nodes[chain[i]];
        pair.rearrange.push_back({*n.incoming_twist, *n.incoming_control, n.state});
    }
    return pair;
}

}  // namespace

std::optional<MotionPair> evaluate_progress(const Forest& f, const SystemState& q_current,
                                            const Scenario& s, const TaskSpec& task,
                                            double progress_threshold, RngStream& transit_rng,
                                            CostMeter* meter) {
    const double h_current = heuristic(q_current, task);

    bool triggered = false;
    int trigger_idx = -1;
    if (f.latest >= 0) {
        const TreeNode& latest = f.nodes[f.latest];
        if (goal(latest.state, task, s) == 1 ||
            h_current - latest.h_value > progress_threshold) {
            triggered = true;
            trigger_idx = f.latest;
        }
    }
    bool size_limit = !triggered && f.size() >= s.planner.forest_size_limit;
    if (!triggered && !size_limit) return std::nullopt;

    // Candidate order: the triggering node first, then non-root leaves by
    // ascending heuristic; each needs a reachable transit to its tree root.
    std::vector<int> candidates;
    if (triggered) candidates.push_back(trigger_idx);
    auto leaf_idxs = f.leaves();
    std::vector<std::pair<double, int>> ranked;
    for (int idx : leaf_idxs) {
        if (f.nodes[idx].parent < 0) continue;  // bare roots carry no controls
        if (idx == trigger_idx) continue;
        ranked.emplace_back(f.nodes[idx].h_value, idx);
    }
    std::sort(ranked.begin(), ranked.end());
    for (const auto& [h, idx] : ranked) candidates.push_back(idx);

    for (int idx : candidates) {
        auto pair = extract_pair(f, idx, q_current, s, transit_rng, meter, size_limit);
        if (pair) return pair;
    }
    return std::nullopt;
}

}  // namespace kdrrf
