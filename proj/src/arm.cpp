#include "kdrrf/arm.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "kdrrf/rng.hpp"

namespace kdrrf {

std::array<double, 3> Mat3::mul(const std::array<double, 3>& v) const {
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

std::array<Vec2, 4> joint_positions(const JointVec& q, const ArmSpec& spec) {
    std::array<Vec2, 4> p;
    p[0] = spec.base_pose.position();
    double angle = spec.base_pose.theta;
    for (int i = 0; i < 3; ++i) {
        angle += q[i];
        p[i + 1] = p[i] + Vec2{spec.link_lengths[i] * std::cos(angle),
                               spec.link_lengths[i] * std::sin(angle)};
    }
    return p;
}

Pose2 fk(const JointVec& q, const ArmSpec& spec) {
    auto p = joint_positions(q, spec);
    double theta = spec.base_pose.theta + q[0] + q[1] + q[2];
    return Pose2{p[3].x, p[3].y, wrap_angle(theta)};
}

Mat3 jacobian(const JointVec& q, const ArmSpec& spec) {
    // Column j: cross(z, p_ee - p_joint_j) for the linear part, 1 for omega.
    auto p = joint_positions(q, spec);
    Mat3 j;
    for (int c = 0; c < 3; ++c) {
        Vec2 r = p[3] - p[c];
        j(0, c) = -r.y;
        j(1, c) = r.x;
        j(2, c) = 1.0;
    }
    return j;
}

namespace {

// Eigendecomposition of a symmetric 3x3 via cyclic Jacobi rotations.
void jacobi_eigen(Mat3 a, std::array<double, 3>& eigvals, Mat3& eigvecs) {
    Mat3 v;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v(i, j) = (i == j) ? 1.0 : 0.0;

    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(a(0, 1)) + std::abs(a(0, 2)) + std::abs(a(1, 2));
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p) {
            for (int qi = p + 1; qi < 3; ++qi) {
                double apq = a(p, qi);
                if (std::abs(apq) < 1e-300) continue;
                double theta = (a(qi, qi) - a(p, p)) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    double akp = a(k, p), akq = a(k, qi);
                    a(k, p) = c * akp - s * akq;
                    a(k, qi) = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    double apk = a(p, k), aqk = a(qi, k);
                    a(p, k) = c * apk - s * aqk;
                    a(qi, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    double vkp = v(k, p), vkq = v(k, qi);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, qi) = s * vkp + c * vkq;
                }
            }
        }
    }
    for (int i = 0; i < 3; ++i) eigvals[i] = a(i, i);
    eigvecs = v;
}

// Solve a 3x3 system by Gaussian elimination with partial pivoting.
std::array<double, 3> solve3(Mat3 a, std::array<double, 3> b) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (piv != col) {
            std::swap(a.m[piv], a.m[col]);
            std::swap(b[piv], b[col]);
        }
        double d = a(col, col);
        if (d == 0.0) continue;
        for (int r = col + 1; r < 3; ++r) {
            double f = a(r, col) / d;
            for (int c = col; c < 3; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    std::array<double, 3> x{};
    for (int r = 2; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < 3; ++c) s -= a(r, c) * x[c];
        x[r] = a(r, r) != 0.0 ? s / a(r, r) : 0.0;
    }
    return x;
}

uint64_t pose_hash(const Pose2& p) {
    auto h = std::bit_cast<uint64_t>(p.x);
    h ^= std::bit_cast<uint64_t>(p.y) * 0x9E3779B97F4A7C15ULL;
    h ^= std::bit_cast<uint64_t>(p.theta) * 0xC2B2AE3D27D4EB4FULL;
    return h;
}

}  // namespace

PinvSolve pinv_solve(const Mat3& j, const std::array<double, 3>& v) {
    // pinv via eigendecomposition of J^T J; truncates singular directions.
    Mat3 jtj;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k) s += j(k, r) * j(k, c);
            jtj(r, c) = s;
        }
    std::array<double, 3> eig;
    Mat3 vec;
    jacobi_eigen(jtj, eig, vec);
    double max_eig = std::max({eig[0], eig[1], eig[2], 0.0});
    double cutoff = max_eig * 1e-12;

    std::array<double, 3> jtv{};
    for (int r = 0; r < 3; ++r) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += j(k, r) * v[k];
        jtv[r] = s;
    }
    // u = V diag(1/eig) V^T J^T v over the retained spectrum
    std::array<double, 3> coeff{};
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += vec(k, i) * jtv[k];
        coeff[i] = (eig[i] > cutoff && eig[i] > 0.0) ? s / eig[i] : 0.0;
    }
    PinvSolve out;
    for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) s += vec(k, i) * coeff[i];
        out.u[k] = s;
    }
    auto jv = j.mul(out.u);
    double res = 0.0;
    for (int k = 0; k < 3; ++k) res += (jv[k] - v[k]) * (jv[k] - v[k]);
    out.residual = std::sqrt(res);
    return out;
}

std::optional<JointVec> ik(const Pose2& target, const ArmSpec& spec, const JointVec& seed_config) {
    constexpr int kRestarts = 8;
    constexpr int kMaxIters = 150;
    constexpr double kLambdaSq = 2.5e-3;

    auto clamp_limits = [&](JointVec q) {
        for (int i = 0; i < 3; ++i)
            q[i] = std::clamp(q[i], spec.joint_limits[i].first, spec.joint_limits[i].second);
        return q;
    };

    RngStream restarts = RngStream::derive(pose_hash(target), "ik-restart");
    for (int attempt = 0; attempt <= kRestarts; ++attempt) {
        JointVec q;
        if (attempt == 0) {
            q = clamp_limits(seed_config);
        } else {
            for (int i = 0; i < 3; ++i)
                q[i] = restarts.uniform(spec.joint_limits[i].first, spec.joint_limits[i].second);
        }
        for (int iter = 0; iter < kMaxIters; ++iter) {
            Pose2 cur = fk(q, spec);
            std::array<double, 3> e = {target.x - cur.x, target.y - cur.y,
                                       wrap_angle(target.theta - cur.theta)};
            double pos_err = std::hypot(e[0], e[1]);
            if (pos_err < 1e-10 && std::abs(e[2]) < 1e-10) return q;

            Mat3 j = jacobian(q, spec);
            Mat3 jjt;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) {
                    double s = 0.0;
                    for (int k = 0; k < 3; ++k) s += j(r, k) * j(c, k);
                    jjt(r, c) = s + (r == c ? kLambdaSq : 0.0);
                }
            auto y = solve3(jjt, e);
            JointVec dq;
            for (int r = 0; r < 3; ++r) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += j(k, r) * y[k];
                dq[r] = s;
            }
            double step = std::sqrt(dq[0] * dq[0] + dq[1] * dq[1] + dq[2] * dq[2]);
            if (step > 0.5)
                for (auto& d : dq) d *= 0.5 / step;
            q = clamp_limits({q[0] + dq[0], q[1] + dq[1], q[2] + dq[2]});
        }
    }
    return std::nullopt;
}

std::optional<JointVec> project_substep(const JointVec& q, const Twist2& v, double dt,
                                        const ArmSpec& spec) {
    const std::array<double, 3> vel = {v.vx, v.vy, v.omega};
    const double speed = std::sqrt(vel[0] * vel[0] + vel[1] * vel[1] + vel[2] * vel[2]);
    const double res_limit = 1e-3 * std::max(speed, 1e-9);

    // RK4 on qdot = pinv(J(q)) * v; the twist is constant in the world frame.
    auto rate = [&](const JointVec& at) -> std::optional<JointVec> {
        auto sol = pinv_solve(jacobian(at, spec), vel);
        if (sol.residual > res_limit) return std::nullopt;
        return sol.u;
    };
    auto advance = [](const JointVec& a, const JointVec& k, double h) {
        return JointVec{a[0] + h * k[0], a[1] + h * k[1], a[2] + h * k[2]};
    };

    auto k1 = rate(q);
    if (!k1) return std::nullopt;
    auto k2 = rate(advance(q, *k1, dt / 2.0));
    if (!k2) return std::nullopt;
    auto k3 = rate(advance(q, *k2, dt / 2.0));
    if (!k3) return std::nullopt;
    auto k4 = rate(advance(q, *k3, dt));
    if (!k4) return std::nullopt;

    JointVec next;
    for (int i = 0; i < 3; ++i)
        next[i] = q[i] + dt / 6.0 * ((*k1)[i] + 2.0 * (*k2)[i] + 2.0 * (*k3)[i] + (*k4)[i]);
    return next;
}

std::optional<JointControl> jacobian_projection(const Twist2& v, const JointVec& start_config,
                                                const ArmSpec& spec, double substep_dt,
                                                const ConfigPredicate& config_valid) {
    if (!spec.within_limits(start_config)) return std::nullopt;
    if (config_valid && !config_valid(start_config)) return std::nullopt;

    const int steps = std::max(1, static_cast<int>(std::llround(v.duration / substep_dt)));
    const double dt = v.duration / steps;

    JointControl control;
    control.profile.reserve(steps);
    JointVec q = start_config;
    for (int k = 0; k < steps; ++k) {
        auto next = project_substep(q, v, dt, spec);
        if (!next) return std::nullopt;
        if (!spec.within_limits(*next)) return std::nullopt;
        if (config_valid && !config_valid(*next)) return std::nullopt;
        JointVec rates;
        for (int i = 0; i < 3; ++i) rates[i] = ((*next)[i] - q[i]) / dt;
        control.profile.emplace_back(rates, dt);
        q = *next;
    }

    // Tracking gate: the integrated arm must realize the twist endpoint.
    Pose2 want = integrate_twist(fk(start_config, spec), v, v.duration);
    Pose2 got = fk(q, spec);
    if (std::hypot(want.x - got.x, want.y - got.y) > 1e-3 ||
        std::abs(wrap_angle(want.theta - got.theta)) > 1e-3)
        return std::nullopt;
    return control;
}

}  // namespace kdrrf
