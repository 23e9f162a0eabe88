#include "kdrrf/tasks.hpp"

#include <algorithm>
#include <cmath>

#include "kdrrf/world.hpp"

namespace kdrrf {

namespace {

std::vector<std::vector<int>> class_members(const SystemState& q, int num_classes) {
    std::vector<std::vector<int>> members(num_classes);
    for (size_t i = 0; i < q.objects.size(); ++i)
        members[q.objects[i].class_id].push_back(static_cast<int>(i));
    return members;
}

Vec2 class_centroid(const SystemState& q, const std::vector<int>& idxs) {
    Vec2 c{};
    for (int i : idxs) c += q.objects[i].pose.position();
    return (1.0 / static_cast<double>(idxs.size())) * c;
}

int max_class_id(const SystemState& q) {
    int m = 0;
    for (const auto& o : q.objects) m = std::max(m, o.class_id);
    return m;
}

double heuristic_sorting_regions(const SystemState& q, const TaskSpec& t) {
    // Sum of squared distances from each object to its class region center.
    double h = 0.0;
    for (const auto& o : q.objects) {
        Vec2 c = t.goal_regions[o.class_id].center();
        double dx = o.pose.x - c.x;
        double dy = o.pose.y - c.y;
        h += dx * dx + dy * dy;
    }
    return h;
}

double heuristic_relocating(const SystemState& q, const TaskSpec& t) {
    Vec2 c = t.relocate_region.center();
    Vec2 p = q.objects[t.target_object].pose.position();
    return (p - c).norm_sq();
}

double heuristic_grasping(const SystemState& q, const TaskSpec& t) {
    // Quadratic clutter penalty for non-target objects inside the radius.
    Vec2 target = q.objects[t.target_object].pose.position();
    double h = 0.0;
    for (size_t i = 0; i < q.objects.size(); ++i) {
        if (static_cast<int>(i) == t.target_object) continue;
        double d = (q.objects[i].pose.position() - target).norm();
        double gap = std::max(0.0, t.clutter_radius - d);
        h += gap * gap;
    }
    return h;
}

double heuristic_sorting_free(const SystemState& q, const TaskSpec& t) {
    // Intra-class spread plus a hinge on inter-class centroid proximity.
    int num_classes = max_class_id(q) + 1;
    auto members = class_members(q, num_classes);
    double h = 0.0;
    for (const auto& idxs : members) {
        for (size_t a = 0; a < idxs.size(); ++a)
            for (size_t b = a + 1; b < idxs.size(); ++b)
                h += (q.objects[idxs[a]].pose.position() - q.objects[idxs[b]].pose.position())
                         .norm_sq();
    }
    for (int i = 0; i < num_classes; ++i) {
        if (members[i].empty()) continue;
        Vec2 ci = class_centroid(q, members[i]);
        for (int j = i + 1; j < num_classes; ++j) {
            if (members[j].empty()) continue;
            double gap = std::max(0.0, t.separation_d_out - (ci - class_centroid(q, members[j])).norm());
            h += gap * gap;
        }
    }
    return h;
}

}  // namespace

double heuristic(const SystemState& q, const TaskSpec& t) {
    switch (t.kind) {
        case TaskKind::SortingRegions: return heuristic_sorting_regions(q, t);
        case TaskKind::Relocating: return heuristic_relocating(q, t);
        case TaskKind::Grasping: return heuristic_grasping(q, t);
        case TaskKind::SortingFree: return heuristic_sorting_free(q, t);
    }
    return 0.0;
}

std::vector<Pose2> pregrasp_poses(const SystemState& q, const TaskSpec& t, const Scenario& s) {
    const ObjectState& target = q.objects[t.target_object];
    double standoff = s.object_shape(target).bounding_radius() + s.arm.ee_radius + 0.01;
    std::vector<Pose2> poses;
    poses.reserve(16);
    for (int k = 0; k < 16; ++k) {
        double a = 2.0 * M_PI * k / 16.0;
        Vec2 p = target.pose.position() + standoff * Vec2{std::cos(a), std::sin(a)};
        poses.push_back(Pose2{p.x, p.y, wrap_angle(a + M_PI)});  // facing the object
    }
    return poses;
}

int goal(const SystemState& q, const TaskSpec& t, const Scenario& s) {
    switch (t.kind) {
        case TaskKind::SortingRegions: {
            for (const auto& o : q.objects)
                if (!t.goal_regions[o.class_id].contains(o.pose.position())) return 0;
            return 1;
        }
        case TaskKind::Relocating:
            return t.relocate_region.contains(q.objects[t.target_object].pose.position()) ? 1 : 0;
        case TaskKind::Grasping: {
            Vec2 target = q.objects[t.target_object].pose.position();
            for (size_t i = 0; i < q.objects.size(); ++i) {
                if (static_cast<int>(i) == t.target_object) continue;
                if ((q.objects[i].pose.position() - target).norm() < t.clutter_radius) return 0;
            }
            // Clutter is clear; require a reachable contact-free pre-grasp pose.
            for (const Pose2& pose : pregrasp_poses(q, t, s)) {
                auto config = ik(pose, s.arm, q.arm);
                if (config && arm_config_valid(*config, s)) return 1;
            }
            return 0;
        }
        case TaskKind::SortingFree: {
            int num_classes = max_class_id(q) + 1;
            auto members = class_members(q, num_classes);
            for (const auto& idxs : members)
                for (size_t a = 0; a < idxs.size(); ++a)
                    for (size_t b = a + 1; b < idxs.size(); ++b)
                        if ((q.objects[idxs[a]].pose.position() -
                             q.objects[idxs[b]].pose.position())
                                .norm() > t.cluster_d_in)
                            return 0;
            for (int i = 0; i < num_classes; ++i) {
                if (members[i].empty()) continue;
                Vec2 ci = class_centroid(q, members[i]);
                for (int j = i + 1; j < num_classes; ++j) {
                    if (members[j].empty()) continue;
                    if ((ci - class_centroid(q, members[j])).norm() < t.separation_d_out) return 0;
                }
            }
            return 1;
        }
    }
    return 0;
}

Vec2 heuristic_gradient(const SystemState& q, const TaskSpec& t, int object_index) {
    const ObjectState& obj = q.objects[object_index];
    switch (t.kind) {
        case TaskKind::SortingRegions: {
            Vec2 c = t.goal_regions[obj.class_id].center();
            return {2.0 * (obj.pose.x - c.x), 2.0 * (obj.pose.y - c.y)};
        }
        case TaskKind::Relocating: {
            if (object_index != t.target_object) return {0.0, 0.0};
            Vec2 c = t.relocate_region.center();
            return {2.0 * (obj.pose.x - c.x), 2.0 * (obj.pose.y - c.y)};
        }
        case TaskKind::Grasping: {
            Vec2 target = q.objects[t.target_object].pose.position();
            if (object_index == t.target_object) {
                // Moving the target away from intruders also clears clutter.
                Vec2 g{};
                for (size_t i = 0; i < q.objects.size(); ++i) {
                    if (static_cast<int>(i) == t.target_object) continue;
                    Vec2 d = target - q.objects[i].pose.position();
                    double dist = d.norm();
                    double gap = std::max(0.0, t.clutter_radius - dist);
                    if (gap > 0.0 && dist > 1e-12) g += (-2.0 * gap / dist) * d;
                }
                return g;
            }
            Vec2 d = obj.pose.position() - target;
            double dist = d.norm();
            double gap = std::max(0.0, t.clutter_radius - dist);
            if (gap <= 0.0 || dist <= 1e-12) return {0.0, 0.0};
            return (-2.0 * gap / dist) * d;
        }
        case TaskKind::SortingFree: {
            // Central finite differences; the hinge terms make the analytic
            // form awkward and the planner only needs magnitudes.
            const double step = 1e-5;
            SystemState probe = q;
            auto eval = [&](double dx, double dy) {
                probe.objects[object_index].pose.x = obj.pose.x + dx;
                probe.objects[object_index].pose.y = obj.pose.y + dy;
                return heuristic(probe, t);
            };
            double gx = (eval(step, 0.0) - eval(-step, 0.0)) / (2.0 * step);
            double gy = (eval(0.0, step) - eval(0.0, -step)) / (2.0 * step);
            return {gx, gy};
        }
    }
    return {0.0, 0.0};
}

double effective_progress_threshold(const SystemState& q, const TaskSpec& t) {
    if (t.progress_threshold > 0.0) return t.progress_threshold;
    return t.progress_fraction * heuristic(q, t);
}

void sample_goal_biased_objects(SystemState& q, const TaskSpec& t, const Scenario& s,
                                RngStream& rng) {
    auto sample_in_rect = [&](const Rect& r) {
        return Vec2{rng.uniform(r.min.x, r.max.x), rng.uniform(r.min.y, r.max.y)};
    };
    switch (t.kind) {
        case TaskKind::SortingRegions:
            for (auto& o : q.objects) {
                Vec2 p = sample_in_rect(t.goal_regions[o.class_id]);
                o.pose = Pose2{p.x, p.y, rng.uniform(-M_PI, M_PI)};
            }
            break;
        case TaskKind::Relocating: {
            Vec2 p = sample_in_rect(t.relocate_region);
            q.objects[t.target_object].pose = Pose2{p.x, p.y, rng.uniform(-M_PI, M_PI)};
            break;
        }
        case TaskKind::Grasping: {
            // Clutter pushed outside the clearance radius around the target.
            Vec2 target = q.objects[t.target_object].pose.position();
            for (size_t i = 0; i < q.objects.size(); ++i) {
                if (static_cast<int>(i) == t.target_object) continue;
                double a = rng.uniform(-M_PI, M_PI);
                double d = t.clutter_radius * (1.1 + 0.5 * rng.uniform01());
                Vec2 p = target + d * Vec2{std::cos(a), std::sin(a)};
                p.x = std::clamp(p.x, s.workspace.min.x, s.workspace.max.x);
                p.y = std::clamp(p.y, s.workspace.min.y, s.workspace.max.y);
                q.objects[i].pose = Pose2{p.x, p.y, q.objects[i].pose.theta};
            }
            break;
        }
        case TaskKind::SortingFree: {
            // One tight anchor per class, spaced at least d_out apart.
            int num_classes = max_class_id(q) + 1;
            std::vector<Vec2> anchors;
            for (int c = 0; c < num_classes; ++c) {
                Vec2 a{};
                for (int tries = 0; tries < 32; ++tries) {
                    a = sample_in_rect(s.workspace);
                    bool ok = true;
                    for (const auto& prev : anchors)
                        if ((a - prev).norm() < t.separation_d_out) ok = false;
                    if (ok) break;
                }
                anchors.push_back(a);
            }
            for (auto& o : q.objects) {
                Vec2 anchor = anchors[o.class_id];
                double a = rng.uniform(-M_PI, M_PI);
                double d = 0.25 * t.cluster_d_in * rng.uniform01();
                Vec2 p = anchor + d * Vec2{std::cos(a), std::sin(a)};
                p.x = std::clamp(p.x, s.workspace.min.x, s.workspace.max.x);
                p.y = std::clamp(p.y, s.workspace.min.y, s.workspace.max.y);
                o.pose = Pose2{p.x, p.y, o.pose.theta};
            }
            break;
        }
    }
}

}  // namespace kdrrf
