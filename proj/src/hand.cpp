#include "graspsynth/hand.hpp"

#include <algorithm>
#include <cmath>

#include "graspsynth/error.hpp"

namespace graspsynth {

using nlohmann::json;

double CollisionPrimitive::signed_distance(const Eigen::Vector3d& local) const {
    if (kind == Kind::Box) {
        const Eigen::Vector3d q = (local - center).cwiseAbs() - half_extents;
        return q.cwiseMax(0.0).norm() + std::min(q.maxCoeff(), 0.0);
    }
    const Eigen::Vector3d ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((local - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (local - (a + t * ab)).norm() - radius;
}

double CollisionPrimitive::bounding_radius() const {
    if (kind == Kind::Box) {
        return center.norm() + half_extents.norm();
    }
    return std::max(a.norm(), b.norm()) + radius;
}

int GripperModel::link_index(const std::string& id) const {
    if (id == "wrist") {
        return -1;
    }
    for (std::size_t i = 0; i < links.size(); ++i) {
        if (links[i].id == id) {
            return static_cast<int>(i);
        }
    }
    fail(ErrorKind::InvalidArgument, "gripper '" + name + "' has no link '" + id + "'");
}

void GripperModel::validate() const {
    for (const auto& j : joints) {
        if (!(j.lower <= j.upper) || !std::isfinite(j.lower) || !std::isfinite(j.upper)) {
            fail(ErrorKind::InvalidArgument, "joint '" + j.name + "': limits must satisfy lower <= upper");
        }
    }
    for (std::size_t i = 0; i < links.size(); ++i) {
        const auto& l = links[i];
        if (l.id.empty() || l.id == "wrist") {
            fail(ErrorKind::InvalidArgument, "link " + std::to_string(i) + ": invalid id '" + l.id + "'");
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (links[k].id == l.id) {
                fail(ErrorKind::InvalidArgument, "duplicate link id '" + l.id + "'");
            }
        }
        // Parents must precede children, which also rules out cycles.
        if (l.parent >= static_cast<int>(i) || l.parent < -1) {
            fail(ErrorKind::InvalidArgument, "link '" + l.id + "': parent must be listed before the link");
        }
        if (l.joint >= static_cast<int>(joints.size()) || l.joint < -1) {
            fail(ErrorKind::InvalidArgument, "link '" + l.id + "': joint index out of range");
        }
        if (l.joint >= 0 && !(l.axis.norm() > 0.0)) {
            fail(ErrorKind::InvalidArgument, "link '" + l.id + "': zero joint axis");
        }
    }
    if (!(approach_axis.norm() > 0.0)) {
        fail(ErrorKind::InvalidArgument, "gripper '" + name + "': zero approach axis");
    }
    if (parallel_jaw) {
        const auto& pj = *parallel_jaw;
        const int n = static_cast<int>(links.size());
        if (pj.left < 0 || pj.left >= n || pj.right < 0 || pj.right >= n || pj.left == pj.right) {
            fail(ErrorKind::InvalidArgument, "gripper '" + name + "': parallel_jaw needs two distinct finger links");
        }
    }
}

HandConfig GripperModel::clamp(const HandConfig& h_c) const {
    HandConfig out = h_c;
    for (Eigen::Index i = 0; i < out.size() && i < static_cast<Eigen::Index>(joints.size()); ++i) {
        const auto& j = joints[static_cast<std::size_t>(i)];
        out[i] = std::clamp(out[i], j.lower, j.upper);
    }
    return out;
}

bool GripperModel::within_limits(const HandConfig& h_c) const {
    if (static_cast<std::size_t>(h_c.size()) != joints.size()) {
        return false;
    }
    for (std::size_t i = 0; i < joints.size(); ++i) {
        const double x = h_c[static_cast<Eigen::Index>(i)];
        if (!(x >= joints[i].lower && x <= joints[i].upper)) {
            return false;
        }
    }
    return true;
}

namespace {

void check_dof(const GripperModel& g, const HandConfig& h_c) {
    if (static_cast<std::size_t>(h_c.size()) != g.dof()) {
        fail(ErrorKind::InvalidArgument, "hand configuration has " + std::to_string(h_c.size()) +
                                             " values, gripper '" + g.name + "' has " + std::to_string(g.dof()) +
                                             " joints");
    }
}

Pose joint_motion(const GripperModel& g, const LinkSpec& l, const HandConfig& h_c) {
    if (l.joint < 0) {
        return Pose::identity();
    }
    const double value = l.scale * h_c[l.joint];
    const Eigen::Vector3d axis = l.axis.normalized();
    if (g.joints[static_cast<std::size_t>(l.joint)].type == JointType::Prismatic) {
        return Pose::translation(value * axis);
    }
    return {Eigen::Vector3d::Zero(), Quat::from_axis_angle(axis, value)};
}

// Link poses relative to the wrist.
std::vector<Pose> local_chain(const GripperModel& g, const HandConfig& h_c) {
    check_dof(g, h_c);
    std::vector<Pose> out(g.links.size());
    for (std::size_t i = 0; i < g.links.size(); ++i) {
        const auto& l = g.links[i];
        const Pose base = l.parent < 0 ? Pose::identity() : out[static_cast<std::size_t>(l.parent)];
        out[i] = base * l.offset * joint_motion(g, l, h_c);
    }
    return out;
}

}  // namespace

std::vector<Pose> fk(const GripperModel& g, const Grasp& h) {
    auto chain = local_chain(g, h.h_c);
    for (auto& s : chain) {
        s = h.h_w * s;
    }
    return chain;
}

Pose link_chain(const GripperModel& g, int link, const HandConfig& h_c) {
    if (link < 0) {
        check_dof(g, h_c);
        return Pose::identity();
    }
    if (link >= static_cast<int>(g.links.size())) {
        fail(ErrorKind::InvalidArgument, "link index out of range");
    }
    // Walk the parent chain only.
    check_dof(g, h_c);
    Pose acc = Pose::identity();
    for (int i = link; i >= 0; i = g.links[static_cast<std::size_t>(i)].parent) {
        const auto& l = g.links[static_cast<std::size_t>(i)];
        acc = l.offset * joint_motion(g, l, h_c) * acc;
    }
    return acc;
}

Pose wrist_from_link(const GripperModel& g, int link, const Pose& s, const HandConfig& h_c) {
    return s * pose_inverse(link_chain(g, link, h_c));
}

// ---------------------------------------------------------------------------
// JSON helpers

json vector_to_json(const Eigen::VectorXd& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Eigen::VectorXd vector_from_json(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json pose_to_json(const Pose& p) {
    const auto a = pose_to_array(p);
    return json(std::vector<double>(a.begin(), a.end()));
}

Pose pose_from_json(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return pose_from_array(values);
}

namespace {

Eigen::Vector3d vec3(const json& j, const char* what) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 3) {
        fail(ErrorKind::InvalidArgument, std::string(what) + ": expected 3 numbers");
    }
    return {v[0], v[1], v[2]};
}

json vec3_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

CollisionPrimitive primitive_from_json(const json& j) {
    CollisionPrimitive p;
    const auto type = j.at("type").get<std::string>();
    if (type == "box") {
        p.kind = CollisionPrimitive::Kind::Box;
        p.center = vec3(j.at("center"), "box center");
        p.half_extents = vec3(j.at("half_extents"), "box half_extents");
        if (!(p.half_extents.minCoeff() > 0.0)) {
            fail(ErrorKind::InvalidArgument, "box half_extents must be positive");
        }
    } else if (type == "capsule") {
        p.kind = CollisionPrimitive::Kind::Capsule;
        p.a = vec3(j.at("a"), "capsule a");
        p.b = vec3(j.at("b"), "capsule b");
        p.radius = j.at("radius").get<double>();
        if (!(p.radius > 0.0)) {
            fail(ErrorKind::InvalidArgument, "capsule radius must be positive");
        }
    } else {
        fail(ErrorKind::InvalidArgument, "unknown collision primitive '" + type + "'");
    }
    return p;
}

json primitive_to_json(const CollisionPrimitive& p) {
    if (p.kind == CollisionPrimitive::Kind::Box) {
        return {{"type", "box"}, {"center", vec3_json(p.center)}, {"half_extents", vec3_json(p.half_extents)}};
    }
    return {{"type", "capsule"}, {"a", vec3_json(p.a)}, {"b", vec3_json(p.b)}, {"radius", p.radius}};
}

}  // namespace

GripperModel gripper_from_json(const json& j) {
    try {
        GripperModel g;
        g.name = j.at("name").get<std::string>();
        for (const auto& jj : j.at("joints")) {
            JointSpec s;
            s.name = jj.at("name").get<std::string>();
            const auto type = jj.at("type").get<std::string>();
            if (type == "prismatic") {
                s.type = JointType::Prismatic;
            } else if (type == "revolute") {
                s.type = JointType::Revolute;
            } else {
                fail(ErrorKind::InvalidArgument, "joint '" + s.name + "': unknown type '" + type + "'");
            }
            s.unit = jj.value("unit", s.type == JointType::Prismatic ? "m" : "rad");
            s.lower = jj.at("lower").get<double>();
            s.upper = jj.at("upper").get<double>();
            g.joints.push_back(s);
        }
        auto joint_index = [&](const std::string& name) {
            for (std::size_t i = 0; i < g.joints.size(); ++i) {
                if (g.joints[i].name == name) return static_cast<int>(i);
            }
            fail(ErrorKind::InvalidArgument, "unknown joint '" + name + "'");
        };
        for (const auto& jl : j.at("links")) {
            LinkSpec l;
            l.id = jl.at("id").get<std::string>();
            if (jl.contains("parent") && !jl.at("parent").is_null()) {
                l.parent = g.link_index(jl.at("parent").get<std::string>());
            }
            if (jl.contains("offset")) {
                l.offset = pose_from_json(jl.at("offset"));
            }
            if (jl.contains("joint") && !jl.at("joint").is_null()) {
                l.joint = joint_index(jl.at("joint").get<std::string>());
                l.axis = vec3(jl.at("axis"), "joint axis");
                l.scale = jl.value("scale", 1.0);
            }
            if (jl.contains("geometry") && !jl.at("geometry").is_null()) {
                l.geometry = primitive_from_json(jl.at("geometry"));
            }
            g.links.push_back(l);
        }
        if (j.contains("approach_axis")) {
            g.approach_axis = vec3(j.at("approach_axis"), "approach_axis");
        }
        if (j.contains("parallel_jaw")) {
            const auto& pj = j.at("parallel_jaw");
            ParallelJaw p;
            p.left = g.link_index(pj.at("left").get<std::string>());
            p.right = g.link_index(pj.at("right").get<std::string>());
            const auto half = pj.at("pad_half").get<std::vector<double>>();
            if (half.size() != 2 || !(half[0] > 0.0) || !(half[1] > 0.0)) {
                fail(ErrorKind::InvalidArgument, "parallel_jaw.pad_half must hold two positive numbers");
            }
            p.pad_half = {half[0], half[1]};
            g.parallel_jaw = p;
        }
        g.validate();
        return g;
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("gripper config: ") + e.what());
    }
}

json gripper_to_json(const GripperModel& g) {
    json j;
    j["name"] = g.name;
    j["joints"] = json::array();
    for (const auto& s : g.joints) {
        j["joints"].push_back({{"name", s.name},
                               {"type", s.type == JointType::Prismatic ? "prismatic" : "revolute"},
                               {"unit", s.unit},
                               {"lower", s.lower},
                               {"upper", s.upper}});
    }
    j["links"] = json::array();
    for (const auto& l : g.links) {
        json jl;
        jl["id"] = l.id;
        jl["parent"] = l.parent < 0 ? json(nullptr) : json(g.links[static_cast<std::size_t>(l.parent)].id);
        jl["offset"] = pose_to_json(l.offset);
        if (l.joint >= 0) {
            jl["joint"] = g.joints[static_cast<std::size_t>(l.joint)].name;
            jl["axis"] = vec3_json(l.axis);
            jl["scale"] = l.scale;
        }
        if (l.geometry) {
            jl["geometry"] = primitive_to_json(*l.geometry);
        }
        j["links"].push_back(jl);
    }
    j["approach_axis"] = vec3_json(g.approach_axis);
    if (g.parallel_jaw) {
        const auto& p = *g.parallel_jaw;
        j["parallel_jaw"] = {{"left", g.links[static_cast<std::size_t>(p.left)].id},
                             {"right", g.links[static_cast<std::size_t>(p.right)].id},
                             {"pad_half", {p.pad_half.x(), p.pad_half.y()}}};
    }
    return j;
}

GripperModel default_gripper() {
    GripperModel g;
    g.name = "wsg50";
    g.joints.push_back({"width", JointType::Prismatic, "m", 0.0, 0.11});
    g.approach_axis = Eigen::Vector3d::UnitZ();

    CollisionPrimitive palm;
    palm.center = {0.0, 0.0, -0.015};
    palm.half_extents = {0.06, 0.02, 0.015};
    g.links.push_back({"palm", -1, Pose::identity(), -1, Eigen::Vector3d::UnitZ(), 1.0, palm});

    // Finger frames sit at the pad center with local z pointing away from
    // the closing gap and local x along the wrist approach axis.
    CollisionPrimitive finger;
    finger.center = {-0.015, 0.0, 0.005};
    finger.half_extents = {0.035, 0.01, 0.005};
    Eigen::Matrix3d r1;
    r1 << 0, 0, -1,
          0, 1, 0,
          1, 0, 0;
    Eigen::Matrix3d r2;
    r2 << 0, 0, 1,
          0, -1, 0,
          1, 0, 0;
    const Eigen::Vector3d pad_center(0.0, 0.0, 0.05);
    g.links.push_back({"L1", 0, {pad_center, Quat::from_matrix(r1)}, 0, Eigen::Vector3d::UnitZ(), 0.5, finger});
    g.links.push_back({"L2", 0, {pad_center, Quat::from_matrix(r2)}, 0, Eigen::Vector3d::UnitZ(), 0.5, finger});
    g.parallel_jaw = ParallelJaw{1, 2, Eigen::Vector2d(0.02, 0.01)};
    g.validate();
    return g;
}

// ---------------------------------------------------------------------------
// Hand configuration model

Eigen::VectorXd default_hand_sigma(const GripperModel& g) {
    Eigen::VectorXd s(static_cast<Eigen::Index>(g.dof()));
    for (std::size_t i = 0; i < g.dof(); ++i) {
        const double range = g.joints[i].range();
        s[static_cast<Eigen::Index>(i)] = range > 0.0 ? 0.02 * range : 1e-3;
    }
    return s;
}

HandConfigModel learn_hand_config_model(const HandConfig& h_g, const HandConfig& h_e, double beta, double alpha,
                                        const Eigen::VectorXd& sigma, int n_samples) {
    if (h_g.size() == 0 || h_g.size() != h_e.size()) {
        fail(ErrorKind::InvalidArgument, "hand config model: h_g and h_e must be nonempty and equally sized");
    }
    if (sigma.size() != h_g.size()) {
        fail(ErrorKind::InvalidArgument, "hand config model: sigma has the wrong dimension");
    }
    if (!(beta > 0.0) || !(alpha >= 0.0) || !(sigma.minCoeff() > 0.0) || n_samples < 2) {
        fail(ErrorKind::InvalidArgument,
             "hand config model: need beta > 0, alpha >= 0, sigma > 0 and at least 2 samples");
    }
    if (!h_g.allFinite() || !h_e.allFinite()) {
        fail(ErrorKind::InvalidArgument, "hand config model: non-finite configuration");
    }
    DataMatrix centers(h_g.size(), n_samples);
    std::vector<double> log_w(static_cast<std::size_t>(n_samples));
    for (int k = 0; k < n_samples; ++k) {
        const double gamma = -beta + 2.0 * beta * k / (n_samples - 1);
        centers.col(k) = (1.0 - gamma) * h_g + gamma * h_e;
        log_w[static_cast<std::size_t>(k)] = -alpha * (centers.col(k) - h_g).norm();
    }
    const double mx = *std::max_element(log_w.begin(), log_w.end());
    std::vector<double> w;
    for (double lw : log_w) w.push_back(std::exp(lw - mx));
    return {h_g, h_e, alpha, beta, sigma, KernelDensity(std::move(centers), std::move(w), sigma)};
}

double hand_config_logpdf(const HandConfigModel& c, const HandConfig& h_c) { return c.kde.log_likelihood(h_c); }

HandConfig hand_config_sample(const HandConfigModel& c, Rng& rng) { return c.kde.sample(rng); }

json hand_model_to_json(const HandConfigModel& c) {
    return {{"h_g", vector_to_json(c.h_g)},
            {"h_e", vector_to_json(c.h_e)},
            {"alpha", c.alpha},
            {"beta", c.beta},
            {"sigma", vector_to_json(c.sigma)},
            {"kde", kde_to_json(c.kde)}};
}

HandConfigModel hand_model_from_json(const json& j) {
    try {
        return {vector_from_json(j.at("h_g")), vector_from_json(j.at("h_e")), j.at("alpha").get<double>(),
                j.at("beta").get<double>(), vector_from_json(j.at("sigma")), kde_from_json(j.at("kde"))};
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("hand model: ") + e.what());
    }
}

json snapshot_to_json(const HandSnapshot& s) {
    return {{"gripper", s.gripper}, {"h_w", pose_to_json(s.h_w)}, {"h_g", vector_to_json(s.h_g)},
            {"h_e", vector_to_json(s.h_e)}};
}

HandSnapshot snapshot_from_json(const json& j) {
    try {
        return {j.value("gripper", ""), pose_from_json(j.at("h_w")), vector_from_json(j.at("h_g")),
                vector_from_json(j.at("h_e"))};
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("hand snapshot: ") + e.what());
    }
}

}  // namespace graspsynth
