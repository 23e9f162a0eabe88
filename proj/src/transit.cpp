#include "kdrrf/transit.hpp"

#include <cmath>
#include <stdexcept>

#include "kdrrf/world.hpp"

namespace kdrrf {

namespace {

double joint_dist(const JointVec& a, const JointVec& b) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

JointVec lerp(const JointVec& a, const JointVec& b, double t) {
    return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

struct Tree {
    std::vector<JointVec> configs;
    std::vector<int> parents;

    int nearest(const JointVec& q) const {
        int best = 0;
        double best_d = joint_dist(configs[0], q);
        for (size_t i = 1; i < configs.size(); ++i) {
            double d = joint_dist(configs[i], q);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        return best;
    }

    void add(const JointVec& q, int parent) {
        configs.push_back(q);
        parents.push_back(parent);
    }

    std::vector<JointVec> trace(int idx) const {
        std::vector<JointVec> out;
        for (int i = idx; i >= 0; i = parents[i]) out.push_back(configs[i]);
        return out;
    }
};

}  // namespace

double JointPath::length() const {
    double len = 0.0;
    for (size_t i = 1; i < waypoints.size(); ++i) len += joint_dist(waypoints[i - 1], waypoints[i]);
    return len;
}

bool edge_contact_free(const JointVec& a, const JointVec& b, const SystemState& frozen,
                       const Scenario& s, double resolution) {
    double d = joint_dist(a, b);
    int samples = std::max(1, static_cast<int>(std::ceil(d / resolution)));
    for (int k = 0; k <= samples; ++k) {
        if (!arm_contact_free(lerp(a, b, static_cast<double>(k) / samples), frozen, s))
            return false;
    }
    return true;
}

bool path_contact_free(const JointPath& path, const SystemState& frozen, const Scenario& s,
                       double resolution) {
    if (path.waypoints.empty()) return false;
    if (path.waypoints.size() == 1) return true;  // in-place transit, vacuously free
    for (size_t i = 1; i < path.waypoints.size(); ++i)
        if (!edge_contact_free(path.waypoints[i - 1], path.waypoints[i], frozen, s, resolution))
            return false;
    return arm_contact_free(path.waypoints.front(), frozen, s);
}

std::optional<JointPath> generate_path(const JointVec& from_config, const JointVec& to_config,
                                       const SystemState& frozen_state, const Scenario& s,
                                       int budget, RngStream& rng, TransitStats* stats) {
    const double step = s.transit.extend_step;
    const double resolution = s.transit.resolution;

    // In-place query: a trivial transit never leaves the current contact
    // state, so no clearance is demanded of it.
    if (from_config == to_config) {
        return JointPath{{from_config}, resolution};
    }
    if (!arm_contact_free(from_config, frozen_state, s) ||
        !arm_contact_free(to_config, frozen_state, s))
        throw std::invalid_argument("transit endpoint is not contact-free");
    if (edge_contact_free(from_config, to_config, frozen_state, s, resolution)) {
        return JointPath{{from_config, to_config}, resolution};
    }

    Tree start_tree, goal_tree;
    start_tree.add(from_config, -1);
    goal_tree.add(to_config, -1);
    Tree* a = &start_tree;
    Tree* b = &goal_tree;
    bool a_is_start = true;

    int nodes = 0;
    std::optional<std::pair<int, int>> bridge;  // (start-tree idx, goal-tree idx)

    auto extend_toward = [&](Tree& tree, int near_idx, const JointVec& target)
        -> std::optional<int> {
        const JointVec& near_q = tree.configs[near_idx];
        double d = joint_dist(near_q, target);
        JointVec next = d <= step ? target : lerp(near_q, target, step / d);
        if (!edge_contact_free(near_q, next, frozen_state, s, resolution)) return std::nullopt;
        tree.add(next, near_idx);
        ++nodes;
        if (stats) ++stats->nodes_extended;
        return static_cast<int>(tree.configs.size()) - 1;
    };

    while (nodes < budget) {
        JointVec q_rand;
        for (int i = 0; i < 3; ++i)
            q_rand[i] = rng.uniform(s.arm.joint_limits[i].first, s.arm.joint_limits[i].second);

        auto new_idx = extend_toward(*a, a->nearest(q_rand), q_rand);
        if (new_idx) {
            // Connect: greedily grow the other tree toward the new node.
            const JointVec target = a->configs[*new_idx];
            int near_b = b->nearest(target);
            while (nodes < budget) {
                auto idx = extend_toward(*b, near_b, target);
                if (!idx) break;
                near_b = *idx;
                if (joint_dist(b->configs[near_b], target) < 1e-12) {
                    bridge = a_is_start ? std::make_pair(*new_idx, near_b)
                                        : std::make_pair(near_b, *new_idx);
                    break;
                }
            }
            if (bridge) break;
        }
        std::swap(a, b);
        a_is_start = !a_is_start;
    }
    if (!bridge) return std::nullopt;

    auto from_half = start_tree.trace(bridge->first);   // new .. from
    auto to_half = goal_tree.trace(bridge->second);     // meet .. to
    JointPath path;
    path.resolution = resolution;
    path.waypoints.assign(from_half.rbegin(), from_half.rend());
    // Meeting configs coincide; skip the duplicate.
    for (size_t i = 1; i < to_half.size(); ++i) path.waypoints.push_back(to_half[i]);
    path.waypoints.front() = from_config;
    path.waypoints.back() = to_config;

    // Greedy shortcutting: try to splice random waypoint pairs.
    for (int attempt = 0; attempt < s.transit.shortcut_attempts; ++attempt) {
        size_t n = path.waypoints.size();
        if (n <= 2) break;
        size_t i = rng.uniform_index(n - 1);
        size_t j = i + 1 + rng.uniform_index(n - i - 1);
        if (j <= i + 1) continue;
        if (edge_contact_free(path.waypoints[i], path.waypoints[j], frozen_state, s, resolution)) {
            path.waypoints.erase(path.waypoints.begin() + i + 1, path.waypoints.begin() + j);
        }
    }
    return path;
}

bool exists_path(const JointVec& from_config, const JointVec& to_config,
                 const SystemState& frozen_state, const Scenario& s, int budget, RngStream& rng,
                 TransitStats* stats) {
    return generate_path(from_config, to_config, frozen_state, s, budget, rng, stats).has_value();
}

}  // namespace kdrrf
