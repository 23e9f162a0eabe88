#include "kdrrf/scenario_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace kdrrf {

using nlohmann::json;

namespace {

json pose_to_json(const Pose2& p) { return json::array({p.x, p.y, p.theta}); }

Pose2 pose_from_json(const json& j) { return Pose2{j.at(0), j.at(1), j.at(2)}; }

json rect_to_json(const Rect& r) {
    return json{{"min", {r.min.x, r.min.y}}, {"max", {r.max.x, r.max.y}}};
}

Rect rect_from_json(const json& j) {
    return Rect{{j.at("min").at(0), j.at("min").at(1)}, {j.at("max").at(0), j.at("max").at(1)}};
}

json shape_to_json(const Shape& s) {
    if (s.kind == Shape::Kind::Disc) return json{{"type", "disc"}, {"radius", s.radius}};
    json verts = json::array();
    for (const auto& v : s.vertices) verts.push_back({v.x, v.y});
    return json{{"type", "polygon"}, {"vertices", verts}};
}

Shape shape_from_json(const json& j) {
    std::string type = j.at("type");
    if (type == "disc") return Shape::disc(j.at("radius"));
    if (type == "polygon") {
        std::vector<Vec2> verts;
        for (const auto& v : j.at("vertices")) verts.push_back({v.at(0), v.at(1)});
        return Shape::polygon(std::move(verts));
    }
    throw std::invalid_argument("unknown shape type: " + type);
}

json state_to_json(const SystemState& q) {
    json objects = json::array();
    for (const auto& o : q.objects)
        objects.push_back({{"pose", pose_to_json(o.pose)}, {"shape", o.shape_id}, {"class", o.class_id}});
    return json{{"arm", q.arm}, {"objects", objects}};
}

SystemState state_from_json(const json& j) {
    SystemState q;
    auto arm = j.at("arm");
    q.arm = {arm.at(0), arm.at(1), arm.at(2)};
    for (const auto& o : j.at("objects"))
        q.objects.push_back({pose_from_json(o.at("pose")), o.at("shape"), o.at("class")});
    return q;
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["workspace"] = rect_to_json(s.workspace);

    json shapes = json::array();
    for (const auto& sh : s.shapes) shapes.push_back(shape_to_json(sh));
    j["shapes"] = shapes;

    json obstacles = json::array();
    for (const auto& ob : s.obstacles)
        obstacles.push_back({{"shape", ob.shape_id}, {"pose", pose_to_json(ob.pose)}});
    j["obstacles"] = obstacles;

    json objects = json::array();
    for (const auto& o : s.initial_state.objects)
        objects.push_back({{"pose", pose_to_json(o.pose)}, {"shape", o.shape_id}, {"class", o.class_id}});
    j["objects"] = objects;

    json regions = json::array();
    for (const auto& r : s.task.goal_regions) regions.push_back(rect_to_json(r));
    j["goal_regions"] = regions;

    j["task"] = {{"kind", to_string(s.task.kind)},
                 {"target_object", s.task.target_object},
                 {"relocate_region", rect_to_json(s.task.relocate_region)},
                 {"clutter_radius", s.task.clutter_radius},
                 {"cluster_d_in", s.task.cluster_d_in},
                 {"separation_d_out", s.task.separation_d_out},
                 {"progress_threshold", s.task.progress_threshold},
                 {"progress_fraction", s.task.progress_fraction}};

    const PlannerParams& pp = s.planner;
    j["params"] = {
        {"planner",
         {{"planner", to_string(pp.planner)},
          {"n_tree", pp.n_tree},
          {"candidate_controls", pp.candidate_controls},
          {"forest_size_limit", pp.forest_size_limit},
          {"root_sampling", pp.root_sampling == RootSampling::Uniform ? "uniform" : "task_oriented"},
          {"stretch", pp.stretch == StretchKind::Exp ? "exp" : "power"},
          {"stretch_power", pp.stretch_power},
          {"goal_bias", pp.goal_bias},
          {"distance_weights", {pp.w_robot, pp.w_obj, pp.w_theta}},
          {"root_offset_range", {pp.root_offset_min, pp.root_offset_max}},
          {"root_attempts", pp.root_attempts},
          {"twist_duration", pp.twist_duration},
          {"v_lin_max", pp.v_lin_max},
          {"v_ang_max", pp.v_ang_max}}},
        {"physics",
         {{"substep_dt", s.physics.substep_dt},
          {"max_resolve_iters", s.physics.max_resolve_iters},
          {"contact_tolerance", s.physics.contact_tolerance},
          {"rotation_coupling", s.physics.rotation_coupling}}},
        {"arm",
         {{"link_lengths", s.arm.link_lengths},
          {"joint_limits",
           {{s.arm.joint_limits[0].first, s.arm.joint_limits[0].second},
            {s.arm.joint_limits[1].first, s.arm.joint_limits[1].second},
            {s.arm.joint_limits[2].first, s.arm.joint_limits[2].second}}},
          {"link_width", s.arm.link_width},
          {"base_pose", pose_to_json(s.arm.base_pose)},
          {"ee_radius", s.arm.ee_radius},
          {"home", s.arm.home}}},
        {"transit",
         {{"extend_step", s.transit.extend_step},
          {"resolution", s.transit.resolution},
          {"path_budget", s.transit.path_budget},
          {"exists_budget", s.transit.exists_budget},
          {"shortcut_attempts", s.transit.shortcut_attempts}}},
        {"execution",
         {{"time_budget", s.execution.time_budget},
          {"sigma_theta", s.execution.sigma_theta},
          {"cost_per_substep", s.execution.cost_per_substep},
          {"cost_per_transit_node", s.execution.cost_per_transit_node},
          {"cost_per_ik", s.execution.cost_per_ik},
          {"transit_joint_speed", s.execution.transit_joint_speed}}}};

    j["initial_arm"] = s.initial_state.arm;
    j["num_classes"] = s.num_classes;
    j["noise_sigma"] = s.noise_sigma;
    j["seed"] = s.seed;
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    json j = json::parse(text);
    Scenario s;
    s.workspace = rect_from_json(j.at("workspace"));
    for (const auto& sh : j.at("shapes")) s.shapes.push_back(shape_from_json(sh));
    for (const auto& ob : j.at("obstacles"))
        s.obstacles.push_back({ob.at("shape"), pose_from_json(ob.at("pose"))});
    for (const auto& o : j.at("objects"))
        s.initial_state.objects.push_back({pose_from_json(o.at("pose")), o.at("shape"), o.at("class")});
    for (const auto& r : j.at("goal_regions")) s.task.goal_regions.push_back(rect_from_json(r));

    const json& t = j.at("task");
    s.task.kind = task_kind_from_string(t.at("kind"));
    read_if(t, "target_object", s.task.target_object);
    if (t.contains("relocate_region")) s.task.relocate_region = rect_from_json(t.at("relocate_region"));
    read_if(t, "clutter_radius", s.task.clutter_radius);
    read_if(t, "cluster_d_in", s.task.cluster_d_in);
    read_if(t, "separation_d_out", s.task.separation_d_out);
    read_if(t, "progress_threshold", s.task.progress_threshold);
    read_if(t, "progress_fraction", s.task.progress_fraction);

    const json& params = j.at("params");
    if (params.contains("planner")) {
        const json& p = params.at("planner");
        if (p.contains("planner"))
            s.planner.planner =
                p.at("planner") == "dhrrt" ? PlannerKind::Dhrrt : PlannerKind::Kdrrf;
        read_if(p, "n_tree", s.planner.n_tree);
        read_if(p, "candidate_controls", s.planner.candidate_controls);
        read_if(p, "forest_size_limit", s.planner.forest_size_limit);
        if (p.contains("root_sampling"))
            s.planner.root_sampling = p.at("root_sampling") == "uniform" ? RootSampling::Uniform
                                                                         : RootSampling::TaskOriented;
        if (p.contains("stretch"))
            s.planner.stretch = p.at("stretch") == "power" ? StretchKind::Power : StretchKind::Exp;
        read_if(p, "stretch_power", s.planner.stretch_power);
        read_if(p, "goal_bias", s.planner.goal_bias);
        if (p.contains("distance_weights")) {
            s.planner.w_robot = p.at("distance_weights").at(0);
            s.planner.w_obj = p.at("distance_weights").at(1);
            s.planner.w_theta = p.at("distance_weights").at(2);
        }
        if (p.contains("root_offset_range")) {
            s.planner.root_offset_min = p.at("root_offset_range").at(0);
            s.planner.root_offset_max = p.at("root_offset_range").at(1);
        }
        read_if(p, "root_attempts", s.planner.root_attempts);
        read_if(p, "twist_duration", s.planner.twist_duration);
        read_if(p, "v_lin_max", s.planner.v_lin_max);
        read_if(p, "v_ang_max", s.planner.v_ang_max);
    }
    if (params.contains("physics")) {
        const json& p = params.at("physics");
        read_if(p, "substep_dt", s.physics.substep_dt);
        read_if(p, "max_resolve_iters", s.physics.max_resolve_iters);
        read_if(p, "contact_tolerance", s.physics.contact_tolerance);
        read_if(p, "rotation_coupling", s.physics.rotation_coupling);
    }
    if (params.contains("arm")) {
        const json& p = params.at("arm");
        if (p.contains("link_lengths")) {
            s.arm.link_lengths = {p.at("link_lengths").at(0), p.at("link_lengths").at(1),
                                  p.at("link_lengths").at(2)};
        }
        if (p.contains("joint_limits"))
            for (int i = 0; i < 3; ++i)
                s.arm.joint_limits[i] = {p.at("joint_limits").at(i).at(0),
                                         p.at("joint_limits").at(i).at(1)};
        read_if(p, "link_width", s.arm.link_width);
        if (p.contains("base_pose")) s.arm.base_pose = pose_from_json(p.at("base_pose"));
        read_if(p, "ee_radius", s.arm.ee_radius);
        if (p.contains("home")) s.arm.home = {p.at("home").at(0), p.at("home").at(1), p.at("home").at(2)};
    }
    if (params.contains("transit")) {
        const json& p = params.at("transit");
        read_if(p, "extend_step", s.transit.extend_step);
        read_if(p, "resolution", s.transit.resolution);
        read_if(p, "path_budget", s.transit.path_budget);
        read_if(p, "exists_budget", s.transit.exists_budget);
        read_if(p, "shortcut_attempts", s.transit.shortcut_attempts);
    }
    if (params.contains("execution")) {
        const json& p = params.at("execution");
        read_if(p, "time_budget", s.execution.time_budget);
        read_if(p, "sigma_theta", s.execution.sigma_theta);
        read_if(p, "cost_per_substep", s.execution.cost_per_substep);
        read_if(p, "cost_per_transit_node", s.execution.cost_per_transit_node);
        read_if(p, "cost_per_ik", s.execution.cost_per_ik);
        read_if(p, "transit_joint_speed", s.execution.transit_joint_speed);
    }

    if (j.contains("initial_arm"))
        s.initial_state.arm = {j.at("initial_arm").at(0), j.at("initial_arm").at(1),
                               j.at("initial_arm").at(2)};
    read_if(j, "num_classes", s.num_classes);
    read_if(j, "noise_sigma", s.noise_sigma);
    read_if(j, "seed", s.seed);
    s.validate();
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << scenario_to_json(s) << '\n';
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return scenario_from_json(text);
}

std::string trajectory_to_jsonl(const EpisodeResult& episode) {
    std::string out;
    double t = 0.0;
    int action = 0;
    for (size_t m = 0; m < episode.trajectory.size(); ++m) {
        const auto& seg = episode.trajectory[m];
        json transit = {{"record", "transit"},
                        {"segment", m},
                        {"timestamp", t},
                        {"waypoints", json::array()}};
        for (const auto& w : seg.transit.waypoints) transit["waypoints"].push_back(w);
        out += transit.dump() + '\n';
        for (const auto& ctl : seg.controls) {
            json rec = {{"record", "control"},
                        {"segment", m},
                        {"action", action++},
                        {"timestamp", t},
                        {"twist", {ctl.twist.vx, ctl.twist.vy, ctl.twist.omega, ctl.twist.duration}},
                        {"predicted", state_to_json(ctl.predicted)},
                        {"observed", state_to_json(ctl.observed)}};
            t += ctl.twist.duration;
            out += rec.dump() + '\n';
        }
    }
    json summary = {{"record", "summary"},
                    {"success", episode.success},
                    {"wall_time", episode.wall_time},
                    {"planning_time", episode.planning_time},
                    {"execution_time", episode.execution_time},
                    {"num_rearranging_actions", episode.num_rearranging_actions},
                    {"num_segments", episode.num_segments},
                    {"num_transits", episode.num_transits},
                    {"num_fallback_extractions", episode.num_fallback_extractions},
                    {"seed", episode.seed},
                    {"failure_reason", episode.failure_reason}};
    out += summary.dump() + '\n';
    return out;
}

void save_trajectory(const EpisodeResult& episode, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << trajectory_to_jsonl(episode);
}

}  // namespace kdrrf
