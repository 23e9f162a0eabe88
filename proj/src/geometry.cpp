#include "kdrrf/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace kdrrf {

double wrap_angle(double theta) {
    double r = std::fmod(theta, 2.0 * M_PI);
    if (r <= -M_PI) r += 2.0 * M_PI;
    else if (r > M_PI) r -= 2.0 * M_PI;
    return r;
}

Shape Shape::disc(double r) {
    Shape s;
    s.kind = Kind::Disc;
    s.radius = r;
    s.validate();
    return s;
}

Shape Shape::polygon(std::vector<Vec2> verts) {
    Shape s;
    s.kind = Kind::Polygon;
    s.vertices = std::move(verts);
    s.validate();
    return s;
}

Shape Shape::box(double half_w, double half_h) {
    return polygon({{-half_w, -half_h}, {half_w, -half_h}, {half_w, half_h}, {-half_w, half_h}});
}

double Shape::bounding_radius() const {
    if (kind == Kind::Disc) return radius;
    double r = 0.0;
    for (const auto& v : vertices) r = std::max(r, v.norm());
    return r;
}

void Shape::validate() const {
    if (kind == Kind::Disc) {
        if (!(radius > 0.0)) throw std::invalid_argument("disc radius must be > 0");
        return;
    }
    if (vertices.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
    const size_t n = vertices.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
        Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
        if (cross(e0, e1) <= 0.0)
            throw std::invalid_argument("polygon must be strictly convex with CCW winding");
    }
}

Vec2 support_point(const Shape& s, const Pose2& pose, Vec2 dir) {
    if (s.kind == Shape::Kind::Disc) {
        double n = dir.norm();
        if (n <= 0.0) return pose.position();
        return pose.position() + (s.radius / n) * dir;
    }
    double best = -std::numeric_limits<double>::infinity();
    Vec2 best_pt{};
    for (const auto& v : s.vertices) {
        Vec2 w = pose.transform(v);
        double d = dot(w, dir);
        if (d > best) {
            best = d;
            best_pt = w;
        }
    }
    return best_pt;
}

bool shape_contains(const Shape& s, const Pose2& pose, Vec2 p) {
    if (s.kind == Shape::Kind::Disc) {
        return (p - pose.position()).norm_sq() <= s.radius * s.radius;
    }
    const size_t n = s.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 a = pose.transform(s.vertices[i]);
        Vec2 b = pose.transform(s.vertices[(i + 1) % n]);
        if (cross(b - a, p - a) < 0.0) return false;
    }
    return true;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len_sq = ab.norm_sq();
    if (len_sq <= 0.0) return (p - a).norm();
    double t = std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

static bool segments_intersect(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return cross(q - p, r - p); };
    double d1 = orient(b0, b1, a0);
    double d2 = orient(b0, b1, a1);
    double d3 = orient(a0, a1, b0);
    double d4 = orient(a0, a1, b1);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on_seg = [](Vec2 p, Vec2 q, Vec2 r) {
        return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
               std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
    };
    if (d1 == 0 && on_seg(b0, a0, b1)) return true;
    if (d2 == 0 && on_seg(b0, a1, b1)) return true;
    if (d3 == 0 && on_seg(a0, b0, a1)) return true;
    if (d4 == 0 && on_seg(a0, b1, a1)) return true;
    return false;
}

double segment_segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    if (segments_intersect(a0, a1, b0, b1)) return 0.0;
    return std::min(std::min(point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1)),
                    std::min(point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)));
}

double segment_shape_distance(Vec2 a, Vec2 b, const Shape& s, const Pose2& pose) {
    if (s.kind == Shape::Kind::Disc) {
        return std::max(0.0, point_segment_distance(pose.position(), a, b) - s.radius);
    }
    if (shape_contains(s, pose, a) || shape_contains(s, pose, b)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    const size_t n = s.vertices.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 p0 = pose.transform(s.vertices[i]);
        Vec2 p1 = pose.transform(s.vertices[(i + 1) % n]);
        best = std::min(best, segment_segment_distance(a, b, p0, p1));
        if (best == 0.0) return 0.0;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Penetration queries. Convex-vs-convex SAT; the minimum-overlap axis gives
// the minimum translation vector exactly for convex pairs.
// ---------------------------------------------------------------------------

namespace {

struct Interval {
    double lo, hi;
};

Interval project(const Shape& s, const Pose2& pose, Vec2 axis) {
    if (s.kind == Shape::Kind::Disc) {
        double c = dot(pose.position(), axis);
        return {c - s.radius, c + s.radius};
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : s.vertices) {
        double d = dot(pose.transform(v), axis);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

void gather_axes(const Shape& s, const Pose2& pose, const Shape& other, const Pose2& other_pose,
                 std::vector<Vec2>& axes) {
    if (s.kind == Shape::Kind::Polygon) {
        const size_t n = s.vertices.size();
        for (size_t i = 0; i < n; ++i) {
            Vec2 a = pose.transform(s.vertices[i]);
            Vec2 b = pose.transform(s.vertices[(i + 1) % n]);
            Vec2 e = b - a;
            double len = e.norm();
            if (len > 0.0) axes.push_back({e.y / len, -e.x / len});  // outward for CCW
        }
    } else {
        // Disc: candidate axis through the closest feature of the other shape.
        Vec2 c = pose.position();
        if (other.kind == Shape::Kind::Disc) {
            Vec2 d = other_pose.position() - c;
            double len = d.norm();
            axes.push_back(len > 0.0 ? Vec2{d.x / len, d.y / len} : Vec2{1.0, 0.0});
        } else {
            // Axis from disc center to the closest point of the polygon.
            double best = std::numeric_limits<double>::infinity();
            Vec2 closest{};
            const size_t n = other.vertices.size();
            for (size_t i = 0; i < n; ++i) {
                Vec2 a = other_pose.transform(other.vertices[i]);
                Vec2 b = other_pose.transform(other.vertices[(i + 1) % n]);
                Vec2 ab = b - a;
                double t = ab.norm_sq() > 0.0 ? std::clamp(dot(c - a, ab) / ab.norm_sq(), 0.0, 1.0) : 0.0;
                Vec2 q = a + t * ab;
                double d = (c - q).norm_sq();
                if (d < best) {
                    best = d;
                    closest = q;
                }
            }
            Vec2 d = closest - c;
            double len = d.norm();
            axes.push_back(len > 0.0 ? Vec2{d.x / len, d.y / len} : Vec2{1.0, 0.0});
        }
    }
}

}  // namespace

Contact penetration(const Shape& a, const Pose2& pa, const Shape& b, const Pose2& pb) {
    if (a.kind == Shape::Kind::Disc && b.kind == Shape::Kind::Disc) {
        Vec2 d = pa.position() - pb.position();
        double dist = d.norm();
        double depth = a.radius + b.radius - dist;
        if (depth <= 0.0) return {0.0, {1.0, 0.0}};
        Vec2 n = dist > 0.0 ? (1.0 / dist) * d : Vec2{1.0, 0.0};
        return {depth, n};
    }

    std::vector<Vec2> axes;
    axes.reserve(10);
    gather_axes(a, pa, b, pb, axes);
    gather_axes(b, pb, a, pa, axes);

    double best_overlap = std::numeric_limits<double>::infinity();
    Vec2 best_axis{1.0, 0.0};
    for (Vec2 axis : axes) {
        Interval ia = project(a, pa, axis);
        Interval ib = project(b, pb, axis);
        double overlap = std::min(ia.hi, ib.hi) - std::max(ia.lo, ib.lo);
        if (overlap < 0.0) return {0.0, {1.0, 0.0}};  // separating axis
        if (overlap < best_overlap) {
            best_overlap = overlap;
            // Orient the axis from b toward a.
            double ca = 0.5 * (ia.lo + ia.hi);
            double cb = 0.5 * (ib.lo + ib.hi);
            best_axis = (ca >= cb) ? axis : -1.0 * axis;
        }
    }
    return {best_overlap, best_axis};
}

Contact capsule_shape_penetration(const Capsule& c, const Shape& s, const Pose2& pose) {
    if (s.kind == Shape::Kind::Disc) {
        Vec2 center = pose.position();
        Vec2 ab = c.b - c.a;
        double len_sq = ab.norm_sq();
        double t = len_sq > 0.0 ? std::clamp(dot(center - c.a, ab) / len_sq, 0.0, 1.0) : 0.0;
        Vec2 closest = c.a + t * ab;
        Vec2 d = center - closest;
        double dist = d.norm();
        double depth = c.radius + s.radius - dist;
        if (depth <= 0.0) return {0.0, {1.0, 0.0}};
        Vec2 nrm{1.0, 0.0};
        if (dist > 1e-12) {
            nrm = (1.0 / dist) * d;
        } else if (len_sq > 0.0) {
            nrm = (1.0 / std::sqrt(len_sq)) * perp(ab);  // center on the line: pick a side
        }
        return {depth, nrm};
    }

    // Polygon: closest segment-polygon feature pair when disjoint, SAT when
    // the centerline overlaps the polygon.
    const size_t n = s.vertices.size();
    bool overlapping = shape_contains(s, pose, c.a) || shape_contains(s, pose, c.b);
    double best = std::numeric_limits<double>::infinity();
    Vec2 seg_pt{}, poly_pt{};
    if (!overlapping) {
        for (size_t i = 0; i < n && !overlapping; ++i) {
            Vec2 p0 = pose.transform(s.vertices[i]);
            Vec2 p1 = pose.transform(s.vertices[(i + 1) % n]);
            // Track the witness pair among endpoint-to-edge candidates.
            Vec2 e = p1 - p0;
            double e_sq = e.norm_sq();
            auto consider = [&](Vec2 sp, Vec2 pp) {
                double d = (sp - pp).norm();
                if (d < best) {
                    best = d;
                    seg_pt = sp;
                    poly_pt = pp;
                }
            };
            // capsule endpoints vs edge
            for (Vec2 sp : {c.a, c.b}) {
                double t = e_sq > 0.0 ? std::clamp(dot(sp - p0, e) / e_sq, 0.0, 1.0) : 0.0;
                consider(sp, p0 + t * e);
            }
            // edge endpoints vs capsule segment
            Vec2 ab = c.b - c.a;
            double ab_sq = ab.norm_sq();
            for (Vec2 pp : {p0, p1}) {
                double t = ab_sq > 0.0 ? std::clamp(dot(pp - c.a, ab) / ab_sq, 0.0, 1.0) : 0.0;
                consider(c.a + t * ab, pp);
            }
            if (segment_segment_distance(c.a, c.b, p0, p1) == 0.0) overlapping = true;
        }
    }
    if (!overlapping) {
        double depth = c.radius - best;
        if (depth <= 0.0) return {0.0, {1.0, 0.0}};
        Vec2 d = poly_pt - seg_pt;
        double dist = d.norm();
        Vec2 nrm = dist > 1e-12 ? (1.0 / dist) * d : Vec2{1.0, 0.0};
        return {depth, nrm};
    }

    // Deep overlap: SAT between the centerline and the polygon; the MTV axis
    // is an edge normal of either (the segment contributes one axis).
    std::vector<Vec2> axes;
    axes.reserve(n + 1);
    for (size_t i = 0; i < n; ++i) {
        Vec2 p0 = pose.transform(s.vertices[i]);
        Vec2 p1 = pose.transform(s.vertices[(i + 1) % n]);
        Vec2 e = p1 - p0;
        double len = e.norm();
        if (len > 0.0) axes.push_back({e.y / len, -e.x / len});
    }
    Vec2 seg_dir = c.b - c.a;
    double seg_len = seg_dir.norm();
    if (seg_len > 0.0) axes.push_back({-seg_dir.y / seg_len, seg_dir.x / seg_len});

    double best_overlap = std::numeric_limits<double>::infinity();
    Vec2 best_axis{1.0, 0.0};
    for (Vec2 axis : axes) {
        double s_lo = std::min(dot(c.a, axis), dot(c.b, axis));
        double s_hi = std::max(dot(c.a, axis), dot(c.b, axis));
        double p_lo = std::numeric_limits<double>::infinity();
        double p_hi = -p_lo;
        for (const auto& v : s.vertices) {
            double d = dot(pose.transform(v), axis);
            p_lo = std::min(p_lo, d);
            p_hi = std::max(p_hi, d);
        }
        double overlap = std::min(s_hi, p_hi) - std::max(s_lo, p_lo);
        if (overlap < best_overlap) {
            best_overlap = overlap;
            double sc = 0.5 * (s_lo + s_hi);
            double pc = 0.5 * (p_lo + p_hi);
            best_axis = (pc >= sc) ? axis : -1.0 * axis;
        }
    }
    return {std::max(best_overlap, 0.0) + c.radius, best_axis};
}

bool collide(const Shape& a, const Pose2& pa, const Shape& b, const Pose2& pb) {
    if (a.kind == Shape::Kind::Disc && b.kind == Shape::Kind::Disc) {
        double rsum = a.radius + b.radius;
        return (pa.position() - pb.position()).norm_sq() <= rsum * rsum;
    }
    std::vector<Vec2> axes;
    axes.reserve(10);
    gather_axes(a, pa, b, pb, axes);
    gather_axes(b, pb, a, pa, axes);
    for (Vec2 axis : axes) {
        Interval ia = project(a, pa, axis);
        Interval ib = project(b, pb, axis);
        if (std::min(ia.hi, ib.hi) - std::max(ia.lo, ib.lo) < 0.0) return false;
    }
    return true;
}

}  // namespace kdrrf
