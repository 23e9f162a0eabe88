#include "kdrrf/physics.hpp"

#include <algorithm>
#include <cmath>

#include "kdrrf/world.hpp"

namespace kdrrf {

namespace {

// Polygon objects pick up a torque-proportional rotation when displaced by an
// off-center contact; discs never rotate. rotation_coupling scales the effect.
void apply_displacement(ObjectState& obj, const Shape& shape, Vec2 displacement, Vec2 normal,
                        const PhysicsParams& p) {
    if (shape.kind == Shape::Kind::Polygon && p.rotation_coupling > 0.0) {
        Vec2 witness = support_point(shape, obj.pose, -1.0 * normal);
        Vec2 r = witness - obj.pose.position();
        double r_sq = std::max(r.norm_sq(), 1e-6);
        double dtheta = p.rotation_coupling * cross(r, displacement) / r_sq;
        dtheta = std::clamp(dtheta, -0.3, 0.3);
        obj.pose.theta = wrap_angle(obj.pose.theta + dtheta);
    }
    obj.pose.x += displacement.x;
    obj.pose.y += displacement.y;
}

// Pushers for one substep: the end-effector disc at the twist-integrated
// reference pose plus the link capsules at the co-integrated configuration.
struct ToolSet {
    ArmGeometry geom;
    bool active = false;
};

double tool_penetration(const ToolSet& tool, const Shape& shape, const Pose2& pose,
                        Contact* contact) {
    const Shape ee = Shape::disc(tool.geom.ee_radius);
    Pose2 ee_pose{tool.geom.ee_center.x, tool.geom.ee_center.y, 0.0};
    Contact best = penetration(shape, pose, ee, ee_pose);
    for (const auto& link : tool.geom.links) {
        Contact c = capsule_shape_penetration(link, shape, pose);
        if (c.depth > best.depth) best = c;
    }
    if (contact) *contact = best;
    return best.depth;
}

double max_penetration(const SystemState& q, const ToolSet& tool, const Scenario& s) {
    double worst = 0.0;
    const int n = static_cast<int>(q.objects.size());
    for (int i = 0; i < n; ++i) {
        const Shape& shape_i = s.object_shape(q.objects[i]);
        if (tool.active)
            worst = std::max(worst, tool_penetration(tool, shape_i, q.objects[i].pose, nullptr));
        for (const auto& ob : s.obstacles)
            worst = std::max(
                worst, penetration(shape_i, q.objects[i].pose, s.shapes[ob.shape_id], ob.pose).depth);
        for (int j = i + 1; j < n; ++j)
            worst = std::max(worst, penetration(shape_i, q.objects[i].pose,
                                                s.object_shape(q.objects[j]), q.objects[j].pose)
                                        .depth);
    }
    return worst;
}

bool resolve_penetrations_impl(SystemState& q, const ToolSet& tool, const Scenario& s,
                               const PhysicsParams& p) {
    const double tol = p.contact_tolerance;
    // Robot-object contacts are separated slightly past touch so transit
    // checks start from positive clearance; object-object and
    // object-obstacle contacts may rest at touch.
    const double slack = tol;
    const int n = static_cast<int>(q.objects.size());

    for (int iter = 0; iter < p.max_resolve_iters; ++iter) {
        bool any = false;
        for (int i = 0; i < n; ++i) {
            ObjectState& obj = q.objects[i];
            const Shape& shape_i = s.object_shape(obj);

            if (tool.active) {
                Contact c;
                if (tool_penetration(tool, shape_i, obj.pose, &c) > tol) {
                    apply_displacement(obj, shape_i, (c.depth + slack) * c.normal, c.normal, p);
                    any = true;
                }
            }
            for (const auto& ob : s.obstacles) {
                Contact c = penetration(shape_i, obj.pose, s.shapes[ob.shape_id], ob.pose);
                if (c.depth > tol) {
                    apply_displacement(obj, shape_i, c.depth * c.normal, c.normal, p);
                    any = true;
                }
            }
            for (int j = i + 1; j < n; ++j) {
                ObjectState& other = q.objects[j];
                const Shape& shape_j = s.object_shape(other);
                Contact c = penetration(shape_i, obj.pose, shape_j, other.pose);
                if (c.depth > tol) {
                    // Movables yield to each other: split the correction.
                    apply_displacement(obj, shape_i, (0.5 * c.depth) * c.normal, c.normal, p);
                    apply_displacement(other, shape_j, (-0.5 * c.depth) * c.normal,
                                       -1.0 * c.normal, p);
                    any = true;
                }
            }
        }
        if (!any) return true;
    }
    return max_penetration(q, tool, s) <= 10.0 * tol;
}

ToolSet make_tool(const JointVec& arm_config, const Pose2& ee_reference, const Scenario& s) {
    ToolSet tool;
    tool.geom = arm_geometry(arm_config, s.arm);
    tool.geom.ee_center = ee_reference.position();
    tool.active = true;
    return tool;
}

}  // namespace

int substep_count(const Twist2& v, const PhysicsParams& p) {
    return std::max(1, static_cast<int>(std::llround(v.duration / p.substep_dt)));
}

bool resolve_penetrations(SystemState& q, const std::optional<Pose2>& tool_pose, const Scenario& s,
                          const PhysicsParams& p) {
    ToolSet tool;
    if (tool_pose) tool = make_tool(q.arm, *tool_pose, s);
    return resolve_penetrations_impl(q, tool, s, p);
}

std::optional<SystemState> transition(const SystemState& q, const Twist2& v, const Scenario& s,
                                      const PhysicsParams& p) {
    const int steps = substep_count(v, p);
    const double dt = v.duration / steps;
    const Pose2 ee_start = fk(q.arm, s.arm);

    SystemState state = q;
    for (int k = 1; k <= steps; ++k) {
        auto next_arm = project_substep(state.arm, v, dt, s.arm);
        if (!next_arm || !s.arm.within_limits(*next_arm)) return std::nullopt;
        state.arm = *next_arm;
        ToolSet tool = make_tool(state.arm, integrate_twist(ee_start, v, k * dt), s);
        if (!resolve_penetrations_impl(state, tool, s, p)) return std::nullopt;  // jammed
    }
    return state;
}

bool sweep_manifold_check(const SystemState& q_start, const Twist2& v, const Scenario& s,
                          const PhysicsParams& p) {
    if (!is_state_valid(q_start, s)) return false;

    // Mirrors transition() substep-for-substep so the checked trajectory is
    // the executed one; fails closed on infeasible controls.
    const int steps = substep_count(v, p);
    const double dt = v.duration / steps;
    const Pose2 ee_start = fk(q_start.arm, s.arm);

    SystemState state = q_start;
    for (int k = 1; k <= steps; ++k) {
        auto next_arm = project_substep(state.arm, v, dt, s.arm);
        if (!next_arm || !s.arm.within_limits(*next_arm)) return false;
        state.arm = *next_arm;
        ToolSet tool = make_tool(state.arm, integrate_twist(ee_start, v, k * dt), s);
        if (!resolve_penetrations_impl(state, tool, s, p)) return false;
        if (!is_state_valid(state, s)) return false;
    }
    return true;
}

}  // namespace kdrrf
