#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "graspsynth/cloud.hpp"
#include "graspsynth/hand.hpp"
#include "graspsynth/mixture.hpp"

namespace graspsynth {

inline constexpr double kDefaultContactDelta = 0.015;
inline constexpr std::size_t kDefaultContactComponents = 2;

/// Link pose `u` expressed in a surface feature frame, with the feature.
struct ContactSample {
    Pose u;
    Eigen::Vector2d r = Eigen::Vector2d::Zero();
};

/// Every augmented point within `delta` of the link solid (points inside
/// count as distance 0) yields u = v^-1 ∘ s. Throws EmptyDemonstration
/// naming `link_id` when nothing is close enough.
std::vector<ContactSample> collect_contacts(const AugmentedCloud& o, const Pose& link_pose,
                                            const CollisionPrimitive& geometry, double delta,
                                            const std::string& link_id = "link");

/// Joint density over [p, log q, k1, k2] for one finger link.
class ContactModel {
public:
    ContactModel(std::string link_id, GaussianMixture joint, double delta = kDefaultContactDelta);

    const std::string& link_id() const { return link_id_; }
    const GaussianMixture& joint() const { return joint_; }
    const GaussianMixture& feature_marginal() const { return marginal_; }
    std::size_t components() const { return joint_.components(); }
    double delta() const { return delta_; }

    GaussianMixture condition(const Eigen::Vector2d& r) const;
    double feature_log_likelihood(const Eigen::Vector2d& r) const;
    // Relative link pose drawn from the conditional given r.
    Pose sample_pose(const Eigen::Vector2d& r, Rng& rng) const;
    // r clamped per dimension to the union of the components' 3-sigma
    // feature intervals. The conditional mean is linear in r, so features
    // far outside the demonstration would place links arbitrarily far away.
    Eigen::Vector2d project_feature(const Eigen::Vector2d& r) const;

    static const BlockSpec& block_spec();

private:
    std::string link_id_;
    GaussianMixture joint_;
    double delta_;
    GaussianConditioner conditioner_;
    GaussianMixture marginal_;
    Eigen::Vector2d feature_lo_;
    Eigen::Vector2d feature_hi_;
};

ContactModel learn_contact_model(const std::vector<ContactSample>& samples, std::size_t components,
                                 std::uint64_t seed, const std::string& link_id = "link",
                                 double delta = kDefaultContactDelta);
GaussianMixture contact_condition(const ContactModel& m, const Eigen::Vector2d& r);
double contact_feature_likelihood(const ContactModel& m, const Eigen::Vector2d& r);

/// Everything learned from one demonstrated grasp.
struct ModelBundle {
    std::string gripper;
    std::uint64_t seed = 0;
    std::vector<ContactModel> contacts;
    HandConfigModel hand;
};

nlohmann::json bundle_to_json(const ModelBundle& b);
ModelBundle bundle_from_json(const nlohmann::json& j);
// FNV-1a of the compact JSON serialization, as 16 hex digits.
std::string bundle_hash(const ModelBundle& b);

struct LearnOptions {
    double delta = kDefaultContactDelta;
    std::size_t components = kDefaultContactComponents;
    std::uint64_t seed = 0;
    HandConfigOptions hand;
};

struct LearnResult {
    ModelBundle bundle;
    std::vector<std::string> warnings;
};

/// One contact model per link that touches the demonstration cloud; links
/// without contacts are reported in `warnings` and skipped.
LearnResult learn_from_demonstration(const AugmentedCloud& o, const HandSnapshot& snapshot, const GripperModel& g,
                                     const LearnOptions& options = {});

}  // namespace graspsynth
