#include "graspsynth/contact.hpp"

#include <cstdio>
#include <limits>

#include "graspsynth/error.hpp"

namespace graspsynth {

using nlohmann::json;

namespace {

constexpr std::size_t kFeatureDims = 2;
const PoseFeatureCodec kCodec{kFeatureDims};

const GaussianMixture& checked_dim(const GaussianMixture& m) {
    if (m.dim() != kCodec.dim()) {
        fail(ErrorKind::InvalidArgument, "contact model must be " + std::to_string(kCodec.dim()) +
                                             "-dimensional, got " + std::to_string(m.dim()));
    }
    return m;
}

}  // namespace

std::vector<ContactSample> collect_contacts(const AugmentedCloud& o, const Pose& link_pose,
                                            const CollisionPrimitive& geometry, double delta,
                                            const std::string& link_id) {
    if (!(delta > 0.0)) {
        fail(ErrorKind::InvalidArgument, "collect_contacts: delta must be positive");
    }
    const Pose to_link = pose_inverse(link_pose);
    std::vector<ContactSample> out;
    for (const auto& pt : o.items) {
        if (geometry.signed_distance(to_link.transform(pt.position())) <= delta) {
            out.push_back({pose_inverse(pt.v) * link_pose, pt.r});
        }
    }
    if (out.empty()) {
        fail(ErrorKind::EmptyDemonstration,
             "link '" + link_id + "' has no demonstration points within " + std::to_string(delta) + " m");
    }
    return out;
}

const BlockSpec& ContactModel::block_spec() {
    static const BlockSpec spec{{0, 1, 2, 3, 4, 5}, {6, 7}};
    return spec;
}

ContactModel::ContactModel(std::string link_id, GaussianMixture joint, double delta)
    : link_id_(std::move(link_id)),
      joint_(std::move(joint)),
      delta_(delta),
      conditioner_(checked_dim(joint_), block_spec()),
      marginal_(gmm_marginalize(joint_, block_spec().r_dims)) {
    constexpr double kSupportSigmas = 3.0;
    feature_lo_.setConstant(std::numeric_limits<double>::infinity());
    feature_hi_.setConstant(-std::numeric_limits<double>::infinity());
    for (std::size_t j = 0; j < marginal_.components(); ++j) {
        const Eigen::Vector2d sd = marginal_.covariance(j).diagonal().cwiseSqrt();
        feature_lo_ = feature_lo_.cwiseMin(marginal_.mean(j) - kSupportSigmas * sd);
        feature_hi_ = feature_hi_.cwiseMax(marginal_.mean(j) + kSupportSigmas * sd);
    }
}

Eigen::Vector2d ContactModel::project_feature(const Eigen::Vector2d& r) const {
    return r.cwiseMax(feature_lo_).cwiseMin(feature_hi_);
}

GaussianMixture ContactModel::condition(const Eigen::Vector2d& r) const { return conditioner_.condition(r); }

double ContactModel::feature_log_likelihood(const Eigen::Vector2d& r) const { return marginal_.log_likelihood(r); }

Pose ContactModel::sample_pose(const Eigen::Vector2d& r, Rng& rng) const {
    return decode_pose(conditioner_.sample(r, rng));
}

ContactModel learn_contact_model(const std::vector<ContactSample>& samples, std::size_t components,
                                 std::uint64_t seed, const std::string& link_id, double delta) {
    if (samples.size() < components) {
        fail(ErrorKind::InvalidArgument, "learn_contact_model: link '" + link_id + "' has " +
                                             std::to_string(samples.size()) + " samples, fewer than K = " +
                                             std::to_string(components));
    }
    DataMatrix data(static_cast<Eigen::Index>(kCodec.dim()), static_cast<Eigen::Index>(samples.size()));
    for (std::size_t i = 0; i < samples.size(); ++i) {
        data.col(static_cast<Eigen::Index>(i)) = kCodec.encode(samples[i].u, samples[i].r);
    }
    EmOptions opts;
    opts.seed = seed;
    return ContactModel(link_id, em_fit(data, {}, components, opts), delta);
}

GaussianMixture contact_condition(const ContactModel& m, const Eigen::Vector2d& r) { return m.condition(r); }

double contact_feature_likelihood(const ContactModel& m, const Eigen::Vector2d& r) {
    return m.feature_log_likelihood(r);
}

json bundle_to_json(const ModelBundle& b) {
    json contacts = json::array();
    for (const auto& c : b.contacts) {
        contacts.push_back({{"link_id", c.link_id()},
                            {"delta", c.delta()},
                            {"pose_dims", ContactModel::block_spec().u_dims},
                            {"feature_dims", ContactModel::block_spec().r_dims},
                            {"joint", mixture_to_json(c.joint())}});
    }
    return {{"format", "graspsynth-bundle"},
            {"version", 1},
            {"gripper", b.gripper},
            {"seed", b.seed},
            {"contacts", contacts},
            {"hand", hand_model_to_json(b.hand)}};
}

ModelBundle bundle_from_json(const json& j) {
    try {
        if (j.value("format", "") != "graspsynth-bundle") {
            fail(ErrorKind::InvalidArgument, "not a model bundle (missing format tag)");
        }
        ModelBundle b{j.at("gripper").get<std::string>(), j.at("seed").get<std::uint64_t>(), {},
                      hand_model_from_json(j.at("hand"))};
        for (const auto& c : j.at("contacts")) {
            b.contacts.emplace_back(c.at("link_id").get<std::string>(), mixture_from_json(c.at("joint")),
                                    c.at("delta").get<double>());
        }
        return b;
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("model bundle: ") + e.what());
    }
}

std::string bundle_hash(const ModelBundle& b) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bundle_to_json(b).dump())));
    return buf;
}

LearnResult learn_from_demonstration(const AugmentedCloud& o, const HandSnapshot& snapshot, const GripperModel& g,
                                     const LearnOptions& options) {
    if (static_cast<std::size_t>(snapshot.h_g.size()) != g.dof() ||
        static_cast<std::size_t>(snapshot.h_e.size()) != g.dof()) {
        fail(ErrorKind::InvalidArgument, "hand snapshot does not match the joint count of gripper '" + g.name + "'");
    }
    const auto links = fk(g, {snapshot.h_w, snapshot.h_g});
    std::vector<ContactModel> contacts;
    std::vector<std::string> warnings;
    for (std::size_t i = 0; i < g.links.size(); ++i) {
        const auto& l = g.links[i];
        if (!l.geometry) {
            continue;
        }
        try {
            const auto samples = collect_contacts(o, links[i], *l.geometry, options.delta, l.id);
            contacts.push_back(learn_contact_model(samples, options.components,
                                                   derive_seed(options.seed, "contact-em", i), l.id, options.delta));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::EmptyDemonstration && e.kind() != ErrorKind::InvalidArgument) {
                throw;
            }
            warnings.push_back(std::string(e.what()) + "; link omitted");
        }
    }
    if (contacts.empty()) {
        fail(ErrorKind::EmptyDemonstration, "no gripper link touches the demonstration cloud");
    }
    const Eigen::VectorXd sigma = options.hand.sigma.size() > 0 ? options.hand.sigma : default_hand_sigma(g);
    if (snapshot.h_g == snapshot.h_e) {
        warnings.push_back("grasp and pre-grasp configurations coincide; hand model is a point mass");
    }
    auto hand = learn_hand_config_model(snapshot.h_g, snapshot.h_e, options.hand.beta, options.hand.alpha, sigma,
                                        options.hand.n_samples);
    return {ModelBundle{g.name, options.seed, std::move(contacts), std::move(hand)}, std::move(warnings)};
}

}  // namespace graspsynth
