#include "kdrrf/world.hpp"

#include <stdexcept>

namespace kdrrf {

ArmGeometry arm_geometry(const JointVec& q, const ArmSpec& spec) {
    auto p = joint_positions(q, spec);
    ArmGeometry g;
    for (int i = 0; i < 3; ++i) g.links[i] = Capsule{p[i], p[i + 1], 0.5 * spec.link_width};
    g.ee_center = p[3];
    g.ee_radius = spec.ee_radius;
    return g;
}

namespace {

bool arm_hits_shape(const ArmGeometry& g, const Shape& sh, const Pose2& pose) {
    for (const auto& link : g.links)
        if (segment_shape_distance(link.a, link.b, sh, pose) <= link.radius) return true;
    return collide(Shape::disc(g.ee_radius), Pose2{g.ee_center.x, g.ee_center.y, 0.0}, sh, pose);
}

}  // namespace

void Scenario::validate() const {
    for (const auto& sh : shapes) sh.validate();
    for (const auto& ob : obstacles)
        if (ob.shape_id < 0 || ob.shape_id >= static_cast<int>(shapes.size()))
            throw std::invalid_argument("obstacle shape_id out of range");
    for (const auto& o : initial_state.objects) {
        if (o.shape_id < 0 || o.shape_id >= static_cast<int>(shapes.size()))
            throw std::invalid_argument("object shape_id out of range");
        if (o.class_id < 0 || o.class_id >= num_classes)
            throw std::invalid_argument("object class_id out of range");
    }
    if (workspace.width() <= 0.0 || workspace.height() <= 0.0)
        throw std::invalid_argument("degenerate workspace");
    if (task.kind == TaskKind::SortingRegions &&
        static_cast<int>(task.goal_regions.size()) != num_classes)
        throw std::invalid_argument("sorting_regions needs one goal region per class");
    if ((task.kind == TaskKind::Grasping || task.kind == TaskKind::Relocating) &&
        (task.target_object < 0 || task.target_object >= num_objects()))
        throw std::invalid_argument("target_object out of range");
}

bool arm_config_valid(const JointVec& q, const Scenario& s) {
    if (!s.arm.within_limits(q)) return false;
    ArmGeometry g = arm_geometry(q, s.arm);

    // Self-collision: only the non-adjacent pair (link 1 vs link 3).
    if (segment_segment_distance(g.links[0].a, g.links[0].b, g.links[2].a, g.links[2].b) <=
        s.arm.link_width)
        return false;

    for (const auto& ob : s.obstacles)
        if (arm_hits_shape(g, s.shapes[ob.shape_id], ob.pose)) return false;
    return true;
}

bool arm_contact_free(const JointVec& q, const SystemState& frozen, const Scenario& s) {
    if (!arm_config_valid(q, s)) return false;
    ArmGeometry g = arm_geometry(q, s.arm);
    for (const auto& obj : frozen.objects)
        if (arm_hits_shape(g, s.object_shape(obj), obj.pose)) return false;
    return true;
}

bool is_state_valid(const SystemState& q, const Scenario& s) {
    if (static_cast<int>(q.objects.size()) != s.num_objects())
        throw std::invalid_argument("state has wrong object count for scenario");
    for (const auto& obj : q.objects)
        if (!s.workspace.contains(obj.pose.position())) return false;
    return arm_config_valid(q.arm, s);
}

}  // namespace kdrrf
