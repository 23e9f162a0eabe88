#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "kdrrf/geometry.hpp"

namespace kdrrf {

using JointVec = std::array<double, 3>;

/// End-effector velocity in se(2), world frame, held for `duration` seconds.
struct Twist2 {
    double vx = 0.0;      // m/s
    double vy = 0.0;      // m/s
    double omega = 0.0;   // rad/s
    double duration = 0.5;

    friend bool operator==(const Twist2&, const Twist2&) = default;
};

/// Pose of the end-effector after integrating a world-frame twist for time t.
inline Pose2 integrate_twist(const Pose2& start, const Twist2& v, double t) {
    return Pose2{start.x + v.vx * t, start.y + v.vy * t, wrap_angle(start.theta + v.omega * t)};
}

/// 3-link planar arm. Links are capsules of width link_width; the pushing
/// tool is a disc of ee_radius at the tip.
struct ArmSpec {
    std::array<double, 3> link_lengths{0.5, 0.4, 0.3};
    std::array<std::pair<double, double>, 3> joint_limits{
        std::pair{-2.9, 2.9}, std::pair{-2.9, 2.9}, std::pair{-2.9, 2.9}};
    double link_width = 0.04;
    Pose2 base_pose{};
    double ee_radius = 0.05;
    JointVec home{0.0, 0.0, 0.0};

    [[nodiscard]] bool within_limits(const JointVec& q) const {
        for (int i = 0; i < 3; ++i)
            if (q[i] < joint_limits[i].first || q[i] > joint_limits[i].second) return false;
        return true;
    }
    [[nodiscard]] double reach() const {
        return link_lengths[0] + link_lengths[1] + link_lengths[2];
    }
    friend bool operator==(const ArmSpec&, const ArmSpec&) = default;
};

/// Joint-rate profile realizing one end-effector twist; entries are
/// (joint rates rad/s, dt seconds) and the dts sum to the twist duration.
struct JointControl {
    std::vector<std::pair<JointVec, double>> profile;

    friend bool operator==(const JointControl&, const JointControl&) = default;
};

struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    double& operator()(int r, int c) { return m[r][c]; }
    double operator()(int r, int c) const { return m[r][c]; }
    [[nodiscard]] std::array<double, 3> mul(const std::array<double, 3>& v) const;
};

/// End-effector pose for a joint configuration.
Pose2 fk(const JointVec& q, const ArmSpec& spec);

/// Joint positions along the chain: base, joint2, joint3, tip.
std::array<Vec2, 4> joint_positions(const JointVec& q, const ArmSpec& spec);

/// Analytic Jacobian of fk: rows map joint rates to (vx, vy, omega).
Mat3 jacobian(const JointVec& q, const ArmSpec& spec);

/// u = pinv(J) * v with singular directions truncated; residual = |J u - v|.
struct PinvSolve {
    JointVec u{};
    double residual = 0.0;
};
PinvSolve pinv_solve(const Mat3& j, const std::array<double, 3>& v);

/// Damped-least-squares IK from seed_config plus deterministic random
/// restarts. Returns a config whose fk matches target within 1e-6 m / 1e-6
/// rad, or nullopt when no in-limit solution is found.
std::optional<JointVec> ik(const Pose2& target, const ArmSpec& spec, const JointVec& seed_config);

/// Validity hook for configurations visited during a projected sweep.
using ConfigPredicate = std::function<bool(const JointVec&)>;

/// Project an end-effector twist to a joint-rate profile by iterated
/// pseudo-inverse, integrating the configuration forward per substep.
/// Fails (nullopt) on joint-limit violation, singular projection
/// (residual > 1e-3, speed-normalized), rejected configuration, or final
/// tracking error above 1e-3 m / 1e-3 rad.
std::optional<JointControl> jacobian_projection(const Twist2& v, const JointVec& start_config,
                                                const ArmSpec& spec, double substep_dt,
                                                const ConfigPredicate& config_valid = {});

/// Configuration after one projected substep, nullopt on projection failure.
/// transition() and jacobian_projection() share this path so their joint
/// trajectories agree bit-for-bit.
std::optional<JointVec> project_substep(const JointVec& q, const Twist2& v, double dt,
                                        const ArmSpec& spec);

}  // namespace kdrrf
