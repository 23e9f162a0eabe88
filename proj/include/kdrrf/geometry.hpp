#pragma once

#include <cmath>
#include <vector>

namespace kdrrf {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
    friend Vec2 operator*(Vec2 v, double s) { return {s * v.x, s * v.y}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    friend bool operator==(const Vec2&, const Vec2&) = default;

    [[nodiscard]] double norm() const { return std::hypot(x, y); }
    [[nodiscard]] double norm_sq() const { return x * x + y * y; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

/// Wrap an angle into (-pi, pi].
double wrap_angle(double theta);

/// Planar pose (x, y, theta), theta kept in (-pi, pi] by normalize().
struct Pose2 {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;

    [[nodiscard]] Vec2 position() const { return {x, y}; }
    [[nodiscard]] Pose2 normalized() const { return {x, y, wrap_angle(theta)}; }
    /// Transform a point from this pose's local frame to the world frame.
    [[nodiscard]] Vec2 transform(Vec2 local) const {
        double c = std::cos(theta), s = std::sin(theta);
        return {x + c * local.x - s * local.y, y + s * local.x + c * local.y};
    }
    friend bool operator==(const Pose2&, const Pose2&) = default;
};

struct Rect {
    Vec2 min{};
    Vec2 max{};

    [[nodiscard]] bool contains(Vec2 p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
    }
    [[nodiscard]] Vec2 center() const { return {0.5 * (min.x + max.x), 0.5 * (min.y + max.y)}; }
    [[nodiscard]] double width() const { return max.x - min.x; }
    [[nodiscard]] double height() const { return max.y - min.y; }
    friend bool operator==(const Rect&, const Rect&) = default;
};

/// Rigid planar shape: a disc or a strictly convex CCW polygon in local frame.
struct Shape {
    enum class Kind { Disc, Polygon };

    Kind kind = Kind::Disc;
    double radius = 0.0;              // disc only
    std::vector<Vec2> vertices;       // polygon only, CCW

    static Shape disc(double r);
    static Shape polygon(std::vector<Vec2> verts);
    static Shape box(double half_w, double half_h);

    /// Radius of the smallest origin-centered disc containing the shape.
    [[nodiscard]] double bounding_radius() const;

    /// Throws std::invalid_argument when the shape invariants are violated.
    void validate() const;

    friend bool operator==(const Shape&, const Shape&) = default;
};

/// Penetration query result. Normal is unit length and points from shape b
/// toward shape a; translating a by depth * normal separates the pair.
struct Contact {
    double depth = 0.0;
    Vec2 normal{1.0, 0.0};
};

/// Closed-region intersection test: touching counts as colliding.
bool collide(const Shape& a, const Pose2& pa, const Shape& b, const Pose2& pb);

/// Penetration depth and separating normal (from b to a). depth == 0 when the
/// interiors do not overlap.
Contact penetration(const Shape& a, const Pose2& pa, const Shape& b, const Pose2& pb);

/// Farthest point of the shape in world direction `dir`.
Vec2 support_point(const Shape& s, const Pose2& pose, Vec2 dir);

/// True when the point lies inside or on the shape.
bool shape_contains(const Shape& s, const Pose2& pose, Vec2 p);

/// Minimum distance from a segment [a, b] to a shape surface, 0 if touching
/// or overlapping.
double segment_shape_distance(Vec2 a, Vec2 b, const Shape& s, const Pose2& pose);

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);
double segment_segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);

/// Capsule: segment [a, b] inflated by radius.
struct Capsule {
    Vec2 a{};
    Vec2 b{};
    double radius = 0.0;
};

/// Penetration of a shape into a capsule; the normal points from the capsule
/// toward the shape (the direction that pushes the shape out).
Contact capsule_shape_penetration(const Capsule& c, const Shape& s, const Pose2& pose);

}  // namespace kdrrf
