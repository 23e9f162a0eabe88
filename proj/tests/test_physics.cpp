#include <doctest.h>

#include <cmath>

#include "kdrrf/physics.hpp"
#include "kdrrf/world.hpp"
#include "test_helpers.hpp"

using namespace kdrrf;
using namespace kdrrf::testutil;

namespace {

// Scenario with the end-effector parked at (0.5, 0), pointing +x.
Scenario pusher_scenario() {
    Scenario s = table_scenario();
    auto config = ik(Pose2{0.5, 0.0, 0.0}, s.arm, {0.3, 0.5, -0.5});
    REQUIRE(config.has_value());
    REQUIRE(arm_config_valid(*config, s));
    s.initial_state.arm = *config;
    s.arm.home = *config;
    return s;
}

}  // namespace

TEST_CASE("zero control is the identity") {
    Scenario s = pusher_scenario();
    add_object(s, 0.8, 0.2, 0);
    add_object(s, 0.4, -0.3, 1);
    auto out = transition(s.initial_state, Twist2{0, 0, 0, 0.5}, s);
    REQUIRE(out.has_value());
    CHECK(*out == s.initial_state);
}

TEST_CASE("head-on disc push follows the overlap travel") {
    Scenario s = pusher_scenario();
    add_object(s, 0.65, 0.0, 0);  // gap = 0.15 - (0.05 + 0.025) = 0.075

    const double travel = 0.1;
    auto out = transition(s.initial_state, Twist2{0.1, 0.0, 0.0, 1.0}, s);
    REQUIRE(out.has_value());

    const double gap = 0.075;
    const double expected_x = 0.65 + (travel - gap);
    CHECK(out->objects[0].pose.x == doctest::Approx(expected_x).epsilon(0.02));
    CHECK(std::abs(out->objects[0].pose.x - expected_x) < 5e-4);
    CHECK(std::abs(out->objects[0].pose.y) < 1e-9);
    CHECK(out->objects[0].pose.theta == 0.0);  // discs do not rotate

    // Final tool-object penetration within tolerance.
    Pose2 tool = fk(out->arm, s.arm);
    Contact c = penetration(s.object_shape(out->objects[0]), out->objects[0].pose,
                            Shape::disc(s.arm.ee_radius), tool);
    CHECK(c.depth <= s.physics.contact_tolerance);
}

TEST_CASE("push against a wall comes to rest without penetration") {
    Scenario s = pusher_scenario();
    add_wall(s, 0.9, 0.0);        // inner face at x = 0.88
    add_object(s, 0.8, 0.0, 0);   // slack: 0.025 (to tool) + 0.055 (to wall) = 0.08

    auto out = transition(s.initial_state, Twist2{0.1, 0.0, 0.0, 0.78}, s);
    REQUIRE(out.has_value());
    const Shape& obj_shape = s.object_shape(out->objects[0]);
    Contact wall = penetration(obj_shape, out->objects[0].pose, s.shapes[1], s.obstacles[0].pose);
    CHECK(wall.depth <= s.physics.contact_tolerance);
    Pose2 tool = fk(out->arm, s.arm);
    Contact te = penetration(obj_shape, out->objects[0].pose, Shape::disc(s.arm.ee_radius), tool);
    CHECK(te.depth <= s.physics.contact_tolerance);
    // The object was actually driven to the wall.
    CHECK(out->objects[0].pose.x > 0.84);
}

TEST_CASE("jamming an object into a wall is infeasible") {
    Scenario s = pusher_scenario();
    add_wall(s, 0.9, 0.0);
    add_object(s, 0.8, 0.0, 0);
    // Travel 0.12 exceeds the 0.08 slack by far more than 10x tolerance.
    auto out = transition(s.initial_state, Twist2{0.1, 0.0, 0.0, 1.2}, s);
    CHECK_FALSE(out.has_value());
}

TEST_CASE("transition is deterministic") {
    Scenario s = pusher_scenario();
    add_object(s, 0.62, 0.01, 0);
    add_object(s, 0.7, -0.02, 1);
    Twist2 v{0.15, 0.03, 0.2, 0.5};
    auto first = transition(s.initial_state, v, s);
    REQUIRE(first.has_value());
    for (int i = 0; i < 100; ++i) {
        auto again = transition(s.initial_state, v, s);
        REQUIRE(again.has_value());
        CHECK(*again == *first);
    }
}

TEST_CASE("quasi-static rest: zero twist after a push changes nothing") {
    Scenario s = pusher_scenario();
    add_object(s, 0.62, 0.0, 0);
    add_object(s, 0.72, 0.01, 1);
    auto pushed = transition(s.initial_state, Twist2{0.12, 0.0, 0.0, 0.8}, s);
    REQUIRE(pushed.has_value());
    auto rest = transition(*pushed, Twist2{0, 0, 0, 0.5}, s);
    REQUIRE(rest.has_value());
    CHECK(*rest == *pushed);
}

TEST_CASE("locality: distant objects are untouched bit-for-bit") {
    Scenario s = pusher_scenario();
    add_object(s, 0.63, 0.0, 0);     // pushed
    add_object(s, 0.95, 0.35, 1);    // far away
    add_object(s, 0.25, -0.35, 2);   // far away, other side
    auto out = transition(s.initial_state, Twist2{0.1, 0.0, 0.0, 0.5}, s);
    REQUIRE(out.has_value());
    CHECK(out->objects[1].pose == s.initial_state.objects[1].pose);
    CHECK(out->objects[2].pose == s.initial_state.objects[2].pose);
    CHECK(out->objects[0].pose.x > 0.63);
}

TEST_CASE("no teleportation per substep") {
    Scenario s = pusher_scenario();
    add_object(s, 0.62, 0.0, 0);
    add_object(s, 0.685, 0.0, 1);  // chained push

    SystemState state = s.initial_state;
    const double dt = s.physics.substep_dt;
    const Twist2 v{0.2, 0.0, 0.0, dt};  // one substep per call
    for (int step = 0; step < 20; ++step) {
        auto next = transition(state, v, s);
        if (!next) break;
        double travel = 0.2 * dt;
        for (size_t i = 0; i < state.objects.size(); ++i) {
            double moved =
                (next->objects[i].pose.position() - state.objects[i].pose.position()).norm();
            CHECK(moved <= travel + 10.0 * s.physics.contact_tolerance);
        }
        state = *next;
    }
}

TEST_CASE("sweep manifold check") {
    SUBCASE("zero twist from a valid state") {
        Scenario s = pusher_scenario();
        add_object(s, 0.8, 0.2, 0);
        CHECK(sweep_manifold_check(s.initial_state, Twist2{0, 0, 0, 0.5}, s));
    }
    SUBCASE("sweeping the tool into a wall fails") {
        Scenario s = pusher_scenario();
        add_wall(s, 0.7, 0.0);
        add_object(s, 0.4, -0.3, 0);
        CHECK_FALSE(sweep_manifold_check(s.initial_state, Twist2{0.2, 0.0, 0.0, 1.0}, s));
    }
    SUBCASE("pushing an object out of the workspace fails") {
        Scenario s = pusher_scenario();
        add_object(s, 1.0, 0.0, 0);  // near the +x bound at 1.05
        auto cfg = ik(Pose2{0.9, 0.0, 0.0}, s.arm, s.initial_state.arm);
        REQUIRE(cfg.has_value());
        s.initial_state.arm = *cfg;
        CHECK_FALSE(sweep_manifold_check(s.initial_state, Twist2{0.2, 0.0, 0.0, 1.0}, s));
    }
    SUBCASE("agrees with the finer-resolution oracle on random sweeps") {
        Scenario coarse = pusher_scenario();
        add_object(coarse, 0.62, 0.05, 0);
        add_object(coarse, 0.75, -0.1, 1);
        Scenario fine = coarse;
        fine.physics.substep_dt = coarse.physics.substep_dt / 10.0;

        RngStream rng(211);
        int agreements = 0;
        for (int i = 0; i < 40; ++i) {
            Twist2 v{rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-1.0, 1.0), 0.5};
            bool got = sweep_manifold_check(coarse.initial_state, v, coarse);
            bool oracle = sweep_manifold_check(fine.initial_state, v, fine);
            if (got == oracle) ++agreements;
        }
        CHECK(agreements >= 38);  // discretization may flip marginal sweeps
    }
}

TEST_CASE("polygon objects rotate under off-center pushes, discs never") {
    Scenario s = pusher_scenario();
    s.shapes.push_back(Shape::box(0.03, 0.03));
    s.initial_state.objects.push_back({Pose2{0.63, 0.03, 0.0}, 2, 0});  // off-center square
    auto out = transition(s.initial_state, Twist2{0.1, 0.0, 0.0, 0.6}, s);
    REQUIRE(out.has_value());
    CHECK(std::abs(out->objects[0].pose.theta) > 1e-6);

    Scenario frozen = s;
    frozen.physics.rotation_coupling = 0.0;
    auto out2 = transition(frozen.initial_state, Twist2{0.1, 0.0, 0.0, 0.6}, frozen);
    REQUIRE(out2.has_value());
    CHECK(out2->objects[0].pose.theta == 0.0);
}
