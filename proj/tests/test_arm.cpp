#include <doctest.h>

#include <cmath>

#include "kdrrf/arm.hpp"
#include "kdrrf/rng.hpp"

using namespace kdrrf;

namespace {

ArmSpec unit_arm() {
    ArmSpec spec;
    spec.link_lengths = {1.0, 1.0, 1.0};
    spec.joint_limits = {std::pair{-M_PI, M_PI}, std::pair{-M_PI, M_PI}, std::pair{-M_PI, M_PI}};
    return spec;
}

JointVec random_config(const ArmSpec& spec, RngStream& rng) {
    JointVec q;
    for (int i = 0; i < 3; ++i)
        q[i] = rng.uniform(spec.joint_limits[i].first, spec.joint_limits[i].second);
    return q;
}

// Central finite differences of fk.
Mat3 jacobian_fd(const JointVec& q, const ArmSpec& spec, double h = 1e-6) {
    Mat3 j;
    for (int c = 0; c < 3; ++c) {
        JointVec lo = q, hi = q;
        lo[c] -= h;
        hi[c] += h;
        Pose2 plo = fk(lo, spec), phi = fk(hi, spec);
        j(0, c) = (phi.x - plo.x) / (2.0 * h);
        j(1, c) = (phi.y - plo.y) / (2.0 * h);
        j(2, c) = wrap_angle(phi.theta - plo.theta) / (2.0 * h);
    }
    return j;
}

double mat_max_abs_diff(const Mat3& a, const Mat3& b) {
    double m = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
    return m;
}

}  // namespace

TEST_CASE("fk fixtures") {
    ArmSpec spec = unit_arm();
    SUBCASE("straight arm") {
        Pose2 p = fk({0, 0, 0}, spec);
        CHECK(p.x == doctest::Approx(3.0));
        CHECK(p.y == doctest::Approx(0.0));
        CHECK(p.theta == doctest::Approx(0.0));
    }
    SUBCASE("rotated at the base") {
        Pose2 p = fk({M_PI / 2, 0, 0}, spec);
        CHECK(p.x == doctest::Approx(0.0));
        CHECK(p.y == doctest::Approx(3.0));
        CHECK(p.theta == doctest::Approx(M_PI / 2));
    }
    SUBCASE("elbow bend") {
        // Hand evaluation: links (1,1,1), angles (pi/2, -pi/2, 0) -> (2, 1, 0)
        Pose2 p = fk({M_PI / 2, -M_PI / 2, 0}, spec);
        CHECK(p.x == doctest::Approx(2.0));
        CHECK(p.y == doctest::Approx(1.0));
        CHECK(p.theta == doctest::Approx(0.0));
    }
    SUBCASE("base pose offset") {
        ArmSpec off = spec;
        off.base_pose = Pose2{1.0, 2.0, M_PI / 2};
        Pose2 p = fk({0, 0, 0}, off);
        CHECK(p.x == doctest::Approx(1.0));
        CHECK(p.y == doctest::Approx(5.0));
        CHECK(p.theta == doctest::Approx(M_PI / 2));
    }
}

TEST_CASE("jacobian matches finite differences") {
    ArmSpec spec = unit_arm();
    SUBCASE("straight-arm fixture") {
        Mat3 j = jacobian({0, 0, 0}, spec);
        CHECK(j(0, 0) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(j(0, 1) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(j(0, 2) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(j(1, 0) == doctest::Approx(3.0));
        CHECK(j(1, 1) == doctest::Approx(2.0));
        CHECK(j(1, 2) == doctest::Approx(1.0));
        CHECK(j(2, 0) == doctest::Approx(1.0));
        CHECK(j(2, 1) == doctest::Approx(1.0));
        CHECK(j(2, 2) == doctest::Approx(1.0));
    }
    SUBCASE("100 random configurations, tol 1e-6") {
        RngStream rng(101);
        for (int i = 0; i < 100; ++i) {
            JointVec q = random_config(spec, rng);
            CHECK(mat_max_abs_diff(jacobian(q, spec), jacobian_fd(q, spec)) < 1e-6);
        }
    }
    SUBCASE("near-singular fold") {
        JointVec folded{0.0, M_PI - 1e-9, 0.0};
        CHECK(mat_max_abs_diff(jacobian(folded, spec), jacobian_fd(folded, spec)) < 1e-6);
    }
}

TEST_CASE("ik") {
    ArmSpec spec = unit_arm();
    SUBCASE("reachable fixture") {
        auto q = ik({3.0, 0.0, 0.0}, spec, {0.1, 0.1, 0.1});
        REQUIRE(q.has_value());
        Pose2 p = fk(*q, spec);
        CHECK(std::hypot(p.x - 3.0, p.y) < 1e-6);
        CHECK(std::abs(wrap_angle(p.theta)) < 1e-6);
    }
    SUBCASE("unreachable target") {
        CHECK_FALSE(ik({4.0, 0.0, 0.0}, spec, {0, 0, 0}).has_value());
    }
    SUBCASE("interior target") {
        auto q = ik({2.0, 1.0, 0.0}, spec, {0.3, -0.2, 0.1});
        REQUIRE(q.has_value());
        Pose2 p = fk(*q, spec);
        CHECK(std::hypot(p.x - 2.0, p.y - 1.0) < 1e-6);
        CHECK(std::abs(wrap_angle(p.theta)) < 1e-6);
    }
    SUBCASE("fk round-trip on 100 random configurations") {
        RngStream rng(113);
        int solved = 0;
        for (int i = 0; i < 100; ++i) {
            JointVec q = random_config(spec, rng);
            Pose2 target = fk(q, spec);
            auto sol = ik(target, spec, random_config(spec, rng));
            REQUIRE(sol.has_value());  // target is reachable by construction
            Pose2 p = fk(*sol, spec);
            CHECK(std::hypot(p.x - target.x, p.y - target.y) < 1e-6);
            CHECK(std::abs(wrap_angle(p.theta - target.theta)) < 1e-6);
            ++solved;
        }
        CHECK(solved == 100);
    }
}

TEST_CASE("jacobian projection") {
    ArmSpec spec;  // default desk arm
    SUBCASE("zero twist keeps the configuration") {
        JointVec q{0.4, 0.5, -0.3};
        auto ctl = jacobian_projection(Twist2{0, 0, 0, 0.5}, q, spec, 0.05);
        REQUIRE(ctl.has_value());
        CHECK(ctl->profile.size() == 10);
        for (const auto& [rates, dt] : ctl->profile) {
            CHECK(rates[0] == 0.0);
            CHECK(rates[1] == 0.0);
            CHECK(rates[2] == 0.0);
            CHECK(dt == doctest::Approx(0.05));
        }
    }
    SUBCASE("radial push at full extension is singular") {
        JointVec extended{0.0, 0.0, 0.0};  // arm along +x, reach 1.2
        auto ctl = jacobian_projection(Twist2{0.1, 0.0, 0.0, 0.5}, extended, spec, 0.05);
        CHECK_FALSE(ctl.has_value());
    }
    SUBCASE("tracks the twist integral on random feasible twists") {
        RngStream rng(127);
        int accepted = 0;
        for (int i = 0; i < 300 && accepted < 100; ++i) {
            JointVec q{rng.uniform(-1.0, 1.0), rng.uniform(0.3, 1.5), rng.uniform(-1.2, 1.2)};
            Twist2 v{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-1.0, 1.0), 0.5};
            auto ctl = jacobian_projection(v, q, spec, 0.05);
            if (!ctl) continue;
            ++accepted;
            // Integrate the recorded profile and compare with the reference.
            JointVec cur = q;
            double total = 0.0;
            for (const auto& [rates, dt] : ctl->profile) {
                for (int k = 0; k < 3; ++k) cur[k] += rates[k] * dt;
                total += dt;
            }
            CHECK(total == doctest::Approx(v.duration));
            Pose2 want = integrate_twist(fk(q, spec), v, v.duration);
            Pose2 got = fk(cur, spec);
            CHECK(std::hypot(want.x - got.x, want.y - got.y) < 2e-3);
            CHECK(std::abs(wrap_angle(want.theta - got.theta)) < 2e-3);
        }
        CHECK(accepted == 100);
    }
    SUBCASE("joint limit violations are rejected") {
        ArmSpec tight;
        tight.joint_limits = {std::pair{-0.01, 0.01}, std::pair{0.29, 0.31}, std::pair{-2.9, 2.9}};
        JointVec q{0.0, 0.3, 0.0};
        // A sideways sweep must drive joint 1 or 2 outside the tiny limits.
        auto ctl = jacobian_projection(Twist2{0.0, 0.2, 0.0, 1.0}, q, tight, 0.05);
        CHECK_FALSE(ctl.has_value());
    }
}

TEST_CASE("pinv solve residual flags singular directions") {
    ArmSpec spec = unit_arm();
    Mat3 j = jacobian({0, 0, 0}, spec);  // row 0 is all zeros
    auto sol = pinv_solve(j, {1.0, 0.0, 0.0});
    CHECK(sol.residual == doctest::Approx(1.0));  // vx unreachable
    auto ok = pinv_solve(j, {0.0, 1.0, 0.5});
    CHECK(ok.residual < 1e-9);
}
