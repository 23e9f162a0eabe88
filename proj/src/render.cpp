#include "kdrrf/render.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "kdrrf/world.hpp"

namespace kdrrf {

namespace {

constexpr double kScale = 600.0;  // px per meter
constexpr double kMargin = 40.0;  // px

const char* kClassColors[] = {"#d9534f", "#5bc0de", "#f0ad4e", "#5cb85c", "#9b59b6", "#e91e63"};

struct Canvas {
    std::string body;
    double ox, oy, h;

    double px(double x) const { return kMargin + (x - ox) * kScale; }
    double py(double y) const { return kMargin + (h - (y - oy)) * kScale; }

    void add(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
        va_list args;
        va_start(args, fmt);
        char buf[1024];
        vsnprintf(buf, sizeof(buf), fmt, args);
        va_end(args);
        body += buf;
        body += '\n';
    }
};

const char* class_color(int class_id) {
    return kClassColors[class_id % (sizeof(kClassColors) / sizeof(kClassColors[0]))];
}

void draw_shape(Canvas& c, const Shape& sh, const Pose2& pose, const char* fill,
                const char* cls) {
    if (sh.kind == Shape::Kind::Disc) {
        c.add("<circle class=\"%s\" cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"%s\" stroke=\"#333\" stroke-width=\"1\"/>",
              cls, c.px(pose.x), c.py(pose.y), sh.radius * kScale, fill);
        return;
    }
    std::string pts;
    char buf[64];
    for (const auto& v : sh.vertices) {
        Vec2 w = pose.transform(v);
        snprintf(buf, sizeof(buf), "%.2f,%.2f ", c.px(w.x), c.py(w.y));
        pts += buf;
    }
    c.add("<polygon class=\"%s\" points=\"%s\" fill=\"%s\" stroke=\"#333\" stroke-width=\"1\"/>",
          cls, pts.c_str(), fill);
}

void draw_arm(Canvas& c, const JointVec& config, const Scenario& s) {
    ArmGeometry g = arm_geometry(config, s.arm);
    for (const auto& link : g.links)
        c.add("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#444\" "
              "stroke-width=\"%.2f\" stroke-linecap=\"round\"/>",
              c.px(link.a.x), c.py(link.a.y), c.px(link.b.x), c.py(link.b.y),
              2.0 * link.radius * kScale);
    c.add("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"#222\"/>", c.px(g.ee_center.x),
          c.py(g.ee_center.y), g.ee_radius * kScale);
}

Canvas make_canvas(const Scenario& s) {
    // Cover the workspace and the arm base.
    double ox = std::min(s.workspace.min.x, s.arm.base_pose.x) - 0.05;
    double oy = std::min(s.workspace.min.y, s.arm.base_pose.y) - 0.05;
    double mx = std::max(s.workspace.max.x, s.arm.base_pose.x) + 0.05;
    double my = std::max(s.workspace.max.y, s.arm.base_pose.y) + 0.05;
    return Canvas{"", ox, oy, my - oy};
}

std::string finish(const Canvas& c, double width_m) {
    char header[256];
    snprintf(header, sizeof(header),
             "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\">\n",
             2.0 * kMargin + width_m * kScale, 2.0 * kMargin + c.h * kScale);
    return std::string(header) + c.body + "</svg>\n";
}

void draw_scene(Canvas& c, const SystemState& q, const Scenario& s) {
    c.add("<rect class=\"workspace\" x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
          "fill=\"#fafafa\" stroke=\"#000\" stroke-width=\"2\"/>",
          c.px(s.workspace.min.x), c.py(s.workspace.max.y), s.workspace.width() * kScale,
          s.workspace.height() * kScale);
    for (size_t i = 0; i < s.task.goal_regions.size(); ++i) {
        const Rect& r = s.task.goal_regions[i];
        c.add("<rect class=\"goal\" x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
              "fill=\"none\" stroke=\"%s\" stroke-width=\"2\" stroke-dasharray=\"6,3\"/>",
              c.px(r.min.x), c.py(r.max.y), r.width() * kScale, r.height() * kScale,
              class_color(static_cast<int>(i)));
    }
    if (s.task.kind == TaskKind::Relocating) {
        const Rect& r = s.task.relocate_region;
        c.add("<rect class=\"goal\" x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
              "fill=\"none\" stroke=\"#5cb85c\" stroke-width=\"2\" stroke-dasharray=\"6,3\"/>",
              c.px(r.min.x), c.py(r.max.y), r.width() * kScale, r.height() * kScale);
    }
    for (const auto& ob : s.obstacles)
        draw_shape(c, s.shapes[ob.shape_id], ob.pose, "#8a8a8a", "obstacle");
    for (const auto& o : q.objects)
        draw_shape(c, s.object_shape(o), o.pose, class_color(o.class_id), "obj");
    draw_arm(c, q.arm, s);
}

}  // namespace

std::string render_scene_svg(const SystemState& q, const Scenario& s) {
    Canvas c = make_canvas(s);
    double width_m = std::max(s.workspace.max.x, s.arm.base_pose.x) + 0.05 - c.ox;
    draw_scene(c, q, s);
    return finish(c, width_m);
}

std::string render_trajectory_svg(const EpisodeResult& episode, const Scenario& s) {
    Canvas c = make_canvas(s);
    double width_m = std::max(s.workspace.max.x, s.arm.base_pose.x) + 0.05 - c.ox;
    draw_scene(c, episode.final_state, s);

    for (const auto& seg : episode.trajectory) {
        // Transit trace: dashed, between waypoint tips.
        if (seg.transit.waypoints.size() > 1) {
            std::string pts;
            char buf[64];
            for (const auto& w : seg.transit.waypoints) {
                Pose2 tip = fk(w, s.arm);
                snprintf(buf, sizeof(buf), "%.2f,%.2f ", c.px(tip.x), c.py(tip.y));
                pts += buf;
            }
            c.add("<polyline class=\"transit\" points=\"%s\" fill=\"none\" stroke=\"#2c7fb8\" "
                  "stroke-width=\"1.5\" stroke-dasharray=\"4,4\"/>",
                  pts.c_str());
        }
        // Rearranging strokes: solid, one line per executed control.
        for (const auto& ctl : seg.controls) {
            Pose2 from = fk(ctl.predicted.arm, s.arm);
            Pose2 start = integrate_twist(from, ctl.twist, -ctl.twist.duration);
            c.add("<line class=\"stroke\" x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                  "stroke=\"#d95f0e\" stroke-width=\"2\"/>",
                  c.px(start.x), c.py(start.y), c.px(from.x), c.py(from.y));
        }
    }
    return finish(c, width_m);
}

void save_svg(const std::string& svg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << svg;
}

}  // namespace kdrrf
