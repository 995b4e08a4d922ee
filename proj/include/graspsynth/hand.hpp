#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "graspsynth/mixture.hpp"
#include "graspsynth/se3.hpp"

namespace graspsynth {

/// Collision solid in link coordinates: an oriented box (center,
/// half_extents) or a capsule (segment a-b, radius).
struct CollisionPrimitive {
    enum class Kind { Box, Capsule };
    Kind kind = Kind::Box;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    Eigen::Vector3d half_extents = Eigen::Vector3d::Zero();
    Eigen::Vector3d a = Eigen::Vector3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    double radius = 0.0;

    // Negative inside the solid.
    double signed_distance(const Eigen::Vector3d& local) const;
    // max(0, -signed_distance), without the square root outside the solid.
    double penetration(const Eigen::Vector3d& local) const {
        if (kind == Kind::Box) {
            const double m = ((local - center).cwiseAbs() - half_extents).maxCoeff();
            return m < 0.0 ? -m : 0.0;
        }
        const Eigen::Vector3d ab = b - a;
        const double len2 = ab.squaredNorm();
        const double t = len2 > 0.0 ? std::clamp((local - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        const double d2 = (local - (a + t * ab)).squaredNorm();
        return d2 < radius * radius ? radius - std::sqrt(d2) : 0.0;
    }
    // Radius of a sphere around the link origin that contains the solid.
    double bounding_radius() const;
};

enum class JointType { Prismatic, Revolute };

struct JointSpec {
    std::string name;
    JointType type = JointType::Prismatic;
    std::string unit;  // "m" or "rad"
    double lower = 0.0;
    double upper = 0.0;

    double range() const { return upper - lower; }
};

/// Link frame = parent frame ∘ offset ∘ motion(scale * h_c[joint] about
/// `axis`). parent = -1 attaches to the wrist; joint = -1 makes it rigid.
struct LinkSpec {
    std::string id;
    int parent = -1;
    Pose offset;
    int joint = -1;
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
    double scale = 1.0;
    std::optional<CollisionPrimitive> geometry;
};

/// Two opposing finger links with flat pads on their local z = 0 plane,
/// pad normal along local -z; `pad_half` is the pad footprint in local x, y.
struct ParallelJaw {
    int left = -1;
    int right = -1;
    Eigen::Vector2d pad_half = Eigen::Vector2d::Zero();
};

using HandConfig = Eigen::VectorXd;

struct GripperModel {
    std::string name;
    std::vector<JointSpec> joints;
    std::vector<LinkSpec> links;
    Eigen::Vector3d approach_axis = Eigen::Vector3d::UnitZ();  // wrist frame
    std::optional<ParallelJaw> parallel_jaw;

    std::size_t dof() const { return joints.size(); }
    // Index of `id`, or -1 for the pseudo-link "wrist". Throws on unknown ids.
    int link_index(const std::string& id) const;
    void validate() const;
    HandConfig clamp(const HandConfig& h_c) const;
    bool within_limits(const HandConfig& h_c) const;
};

GripperModel gripper_from_json(const nlohmann::json& j);
nlohmann::json gripper_to_json(const GripperModel& g);
// Built-in WSG-50-like parallel jaw (palm, L1, L2; one width joint).
GripperModel default_gripper();

struct Grasp {
    Pose h_w;
    HandConfig h_c;
};

/// World pose of every link.
std::vector<Pose> fk(const GripperModel& g, const Grasp& h);
/// Pose of link `link` relative to the wrist (identity for link -1).
Pose link_chain(const GripperModel& g, int link, const HandConfig& h_c);
/// Wrist pose that places `link` at `s`.
Pose wrist_from_link(const GripperModel& g, int link, const Pose& s, const HandConfig& h_c);

/// Density over joint configurations along the demonstrated pre-grasp to
/// grasp segment: kernels at (1-γ) h_g + γ h_e on a uniform γ grid over
/// [-β, β], weighted by exp(-α ||h(γ) - h_g||).
struct HandConfigModel {
    HandConfig h_g;
    HandConfig h_e;
    double alpha = 10.0;
    double beta = 0.5;
    Eigen::VectorXd sigma;
    KernelDensity kde;

    std::size_t dim() const { return static_cast<std::size_t>(h_g.size()); }
};

struct HandConfigOptions {
    double beta = 0.5;
    double alpha = 10.0;
    // Per-joint bandwidth; empty means 0.02 of each joint range.
    Eigen::VectorXd sigma;
    int n_samples = 21;
};

Eigen::VectorXd default_hand_sigma(const GripperModel& g);
HandConfigModel learn_hand_config_model(const HandConfig& h_g, const HandConfig& h_e, double beta, double alpha,
                                        const Eigen::VectorXd& sigma, int n_samples);
double hand_config_logpdf(const HandConfigModel& c, const HandConfig& h_c);
HandConfig hand_config_sample(const HandConfigModel& c, Rng& rng);

nlohmann::json hand_model_to_json(const HandConfigModel& c);
HandConfigModel hand_model_from_json(const nlohmann::json& j);

/// Demonstrated grasp: wrist pose at contact plus grasp and pre-grasp
/// joint configurations.
struct HandSnapshot {
    std::string gripper;
    Pose h_w;
    HandConfig h_g;
    HandConfig h_e;
};

nlohmann::json snapshot_to_json(const HandSnapshot& s);
HandSnapshot snapshot_from_json(const nlohmann::json& j);

nlohmann::json pose_to_json(const Pose& p);
Pose pose_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& j);

}  // namespace graspsynth
