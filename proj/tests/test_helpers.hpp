#pragma once

#include <vector>

#include "kdrrf/scenario.hpp"

namespace kdrrf::testutil {

/// Small tabletop scenario: default arm at the origin, disc objects.
/// Objects and obstacles are appended by the caller.
inline Scenario table_scenario() {
    Scenario s;
    s.workspace = Rect{{0.15, -0.45}, {1.05, 0.45}};
    s.arm = ArmSpec{};
    s.arm.home = {0.35, 0.8, -0.5};
    s.initial_state.arm = s.arm.home;
    s.shapes.push_back(Shape::disc(0.025));      // shape 0: object disc
    s.shapes.push_back(Shape::box(0.02, 0.15));  // shape 1: wall segment
    s.num_classes = 3;
    s.task.kind = TaskKind::SortingRegions;
    s.task.goal_regions = {Rect{{0.26, -0.37}, {0.44, -0.19}}, Rect{{0.26, 0.19}, {0.44, 0.37}},
                           Rect{{0.63, -0.09}, {0.81, 0.09}}};
    return s;
}

inline void add_object(Scenario& s, double x, double y, int class_id = 0, double theta = 0.0,
                       int shape_id = 0) {
    s.initial_state.objects.push_back({Pose2{x, y, theta}, shape_id, class_id});
}

inline void add_wall(Scenario& s, double x, double y, double theta = 0.0) {
    s.obstacles.push_back({1, Pose2{x, y, theta}});
}

}  // namespace kdrrf::testutil
