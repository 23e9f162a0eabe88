#include <doctest.h>

#include "kdrrf/world.hpp"
#include "test_helpers.hpp"

using namespace kdrrf;
using namespace kdrrf::testutil;

TEST_CASE("valid state: arm parked, objects spread") {
    Scenario s = table_scenario();
    add_object(s, 0.5, 0.0, 0);
    add_object(s, 0.9, 0.2, 1);
    add_object(s, 0.3, -0.1, 2);
    s.validate();
    CHECK(is_state_valid(s.initial_state, s));
}

TEST_CASE("arm overlapping a static obstacle invalidates the state") {
    Scenario s = table_scenario();
    add_object(s, 0.9, 0.3, 0);
    // Wall crossing the home arm's reach.
    ArmGeometry g = arm_geometry(s.arm.home, s.arm);
    add_wall(s, g.ee_center.x, g.ee_center.y);
    CHECK_FALSE(is_state_valid(s.initial_state, s));
}

TEST_CASE("mutually overlapping objects stay valid") {
    Scenario s = table_scenario();
    add_object(s, 0.5, 0.0, 0);
    add_object(s, 0.51, 0.0, 1);  // overlapping pair
    CHECK(is_state_valid(s.initial_state, s));
}

TEST_CASE("object outside the workspace invalidates the state") {
    Scenario s = table_scenario();
    add_object(s, 1.2, 0.0, 0);  // beyond max x
    CHECK_FALSE(is_state_valid(s.initial_state, s));
}

TEST_CASE("object count mismatch is a contract violation") {
    Scenario s = table_scenario();
    add_object(s, 0.5, 0.0, 0);
    SystemState wrong = s.initial_state;
    wrong.objects.clear();
    CHECK_THROWS(is_state_valid(wrong, s));
}

TEST_CASE("joint limits gate validity") {
    Scenario s = table_scenario();
    add_object(s, 0.5, 0.0, 0);
    SystemState q = s.initial_state;
    q.arm = {3.5, 0.0, 0.0};  // beyond +-2.9
    CHECK_FALSE(is_state_valid(q, s));
}

TEST_CASE("self-collision between link 1 and link 3") {
    Scenario s = table_scenario();
    add_object(s, 0.9, 0.3, 0);
    // Fold the arm back onto itself.
    SystemState q = s.initial_state;
    q.arm = {0.0, 2.9, 2.9};
    ArmGeometry g = arm_geometry(q.arm, s.arm);
    double d = segment_segment_distance(g.links[0].a, g.links[0].b, g.links[2].a, g.links[2].b);
    if (d <= s.arm.link_width) {
        CHECK_FALSE(is_state_valid(q, s));
    }
}

TEST_CASE("is_state_valid is pure") {
    Scenario s = table_scenario();
    add_object(s, 0.5, 0.0, 0);
    bool first = is_state_valid(s.initial_state, s);
    for (int i = 0; i < 10; ++i) CHECK(is_state_valid(s.initial_state, s) == first);
}

TEST_CASE("arm_contact_free also excludes movable objects") {
    Scenario s = table_scenario();
    ArmGeometry g = arm_geometry(s.arm.home, s.arm);
    add_object(s, g.ee_center.x, g.ee_center.y, 0);  // object under the tool
    CHECK(is_state_valid(s.initial_state, s));       // robot-object contact allowed
    CHECK_FALSE(arm_contact_free(s.arm.home, s.initial_state, s));
}
