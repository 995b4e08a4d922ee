#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "graspsynth/cloud.hpp"
#include "graspsynth/contact.hpp"
#include "graspsynth/hand.hpp"
#include "graspsynth/mixture.hpp"
#include "graspsynth/spatial_grid.hpp"

namespace graspsynth {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

enum class QueryMethod { Gmm, Kde };

QueryMethod parse_method(std::string_view tag);
std::string_view to_string(QueryMethod method);

struct QueryOptions {
    QueryMethod method = QueryMethod::Gmm;
    std::size_t n_samples = 500;  // N_Q
    std::size_t components = 5;   // K_Q
    // Kernel widths for the KDE arm: meters, then rotation-vector units.
    double kde_position_bandwidth = 0.01;
    double kde_rotation_bandwidth = 0.1;
    int em_max_iter = 200;
    double em_tol = 1e-6;
    double em_cov_floor = 1e-8;
};

/// Density over world poses of one link, on the encoded [p, log q] space.
class QueryDensity {
public:
    QueryDensity(int link, std::string link_id, GaussianMixture model, std::size_t n_samples);
    QueryDensity(int link, std::string link_id, KernelDensity model, std::size_t n_samples);

    int link() const { return link_; }
    const std::string& link_id() const { return link_id_; }
    QueryMethod method() const { return std::holds_alternative<GaussianMixture>(model_) ? QueryMethod::Gmm : QueryMethod::Kde; }
    std::size_t n_samples_used() const { return n_samples_; }
    const GaussianMixture* gmm() const { return std::get_if<GaussianMixture>(&model_); }
    const KernelDensity* kde() const { return std::get_if<KernelDensity>(&model_); }

    double log_likelihood(const Pose& s) const;
    double log_likelihood_encoded(const VectorRef& x) const;
    Pose sample(Rng& rng) const;

private:
    int link_;
    std::string link_id_;
    std::variant<GaussianMixture, KernelDensity> model_;
    std::size_t n_samples_;
};

/// Pushes N_Q surface samples through the contact model (s = v ∘ u, weight
/// = feature likelihood of r) and fits a weighted GMM with K_Q components,
/// or places one kernel per sample for the KDE arm. Weights are normalized
/// in the log domain; NoAffinity is thrown when no sample has a finite
/// log weight.
QueryDensity build_query_density(const AugmentedCloud& o, const ContactModel& m, int link_index,
                                 const QueryOptions& options, std::uint64_t seed);

struct GraspCandidate {
    Pose h_w;
    HandConfig h_c;
    std::vector<std::pair<std::string, double>> scores;  // log scores
    double total = 0.0;
    int sampled_link = -1;
    std::size_t index = 0;  // position in the sampling order

    Grasp grasp() const { return {h_w, h_c}; }
    std::optional<double> score(std::string_view name) const;
};

enum class ExpertKind { Hard, Soft };

class Expert {
public:
    virtual ~Expert() = default;
    virtual std::string name() const = 0;
    virtual ExpertKind kind() const = 0;
    // log of the expert value: soft experts give (-inf, 0], hard ones 0 or -inf.
    virtual double log_score(const Grasp& h, const std::vector<Pose>& links) const = 0;
    // As log_score, but may stop early and return any value below `floor`
    // once the score is known to be below it.
    virtual double log_score_above(const Grasp& h, const std::vector<Pose>& links, double floor) const {
        (void)floor;
        return log_score(h, links);
    }
    double value(const Grasp& h, const std::vector<Pose>& links) const { return std::exp(log_score(h, links)); }
};

using ExpertPtr = std::shared_ptr<const Expert>;

/// log W = -lambda * sum over links and points of the penetration depth.
class CollisionExpert final : public Expert {
public:
    CollisionExpert(const AugmentedCloud& o, const GripperModel& g, double lambda);
    std::string name() const override { return "collision"; }
    ExpertKind kind() const override { return ExpertKind::Soft; }
    double log_score(const Grasp& h, const std::vector<Pose>& links) const override;
    double log_score_above(const Grasp& h, const std::vector<Pose>& links, double floor) const override;
    // Sum of penetration depths (meters) over links and points; stops once
    // the sum exceeds `cap`.
    double penetration(const std::vector<Pose>& links,
                       double cap = std::numeric_limits<double>::infinity()) const;
    double max_penetration(const std::vector<Pose>& links) const;

private:
    std::vector<std::pair<std::size_t, CollisionPrimitive>> solids_;
    DenseGrid grid_;
    double lambda_;
};

struct Workspace {
    Eigen::Vector3d lo = Eigen::Vector3d::Constant(-1.0);
    Eigen::Vector3d hi = Eigen::Vector3d::Constant(1.0);
    // Optional cone on the approach axis: angle to `cone_axis` <= cone_angle.
    std::optional<Eigen::Vector3d> cone_axis;
    double cone_angle = 0.0;
};

class KinematicExpert final : public Expert {
public:
    KinematicExpert(const GripperModel& g, Workspace w);
    std::string name() const override { return "kinematic"; }
    ExpertKind kind() const override { return ExpertKind::Hard; }
    double log_score(const Grasp& h, const std::vector<Pose>& links) const override;

private:
    GripperModel gripper_;
    Workspace w_;
};

/// log E = -kappa (1 - cos θ), θ between the approach axis and `axis`.
class AxisAlignExpert final : public Expert {
public:
    AxisAlignExpert(const GripperModel& g, const Eigen::Vector3d& axis, double kappa);
    std::string name() const override { return "axis"; }
    ExpertKind kind() const override { return ExpertKind::Soft; }
    double log_score(const Grasp& h, const std::vector<Pose>& links) const override;

private:
    Eigen::Vector3d approach_;
    Eigen::Vector3d axis_;
    double kappa_;
};

/// Declarative expert description, as read from configs and flags:
/// `collision[:lambda]`, `kinematic[:lx,ly,lz,hx,hy,hz]`, `axis:x,y,z:kappa`.
struct ExpertSpec {
    enum class Type { Collision, Kinematic, Axis };
    Type type = Type::Collision;
    double lambda = 100.0;
    Workspace workspace;
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
    double kappa = 1.0;
};

ExpertSpec parse_expert(std::string_view text);
std::string to_string(const ExpertSpec& spec);
std::vector<ExpertPtr> make_experts(const std::vector<ExpertSpec>& specs, const AugmentedCloud& o,
                                    const GripperModel& g);
std::vector<ExpertSpec> default_experts();

/// Log-domain product of experts:
/// log C(h_c) + sum_i log Q_i(fk_i(h)) + sum_k log E_k(h).
class GraspObjective {
public:
    GraspObjective(const GripperModel& g, const HandConfigModel& c, std::vector<QueryDensity> queries,
                   std::vector<ExpertPtr> experts);

    const GripperModel& gripper() const { return *gripper_; }
    const HandConfigModel& hand_model() const { return *hand_; }
    const std::vector<QueryDensity>& queries() const { return queries_; }
    const std::vector<ExpertPtr>& experts() const { return experts_; }

    // Fills candidate scores and total; hard experts are evaluated first and
    // a rejection stops evaluation with total = -inf.
    double evaluate(GraspCandidate& h) const;
    // As evaluate, but returns nullopt (scores incomplete) as soon as the
    // total is known to be below `floor`. Soft experts are at most 0, so the
    // running sum bounds the total from above.
    std::optional<double> evaluate_above(GraspCandidate& h, double floor) const;
    bool rejected_by_hard_expert(const GraspCandidate& h) const;

private:
    const GripperModel* gripper_;
    const HandConfigModel* hand_;
    std::vector<QueryDensity> queries_;
    std::vector<ExpertPtr> experts_;
};

/// Link chosen uniformly from `qset`, s ~ Q_i, h_c ~ C (clamped to the
/// joint limits), h_w from the link pose. Scores are left empty.
GraspCandidate sample_grasp(const std::vector<QueryDensity>& qset, const HandConfigModel& c, const GripperModel& g,
                            Rng& rng);

/// Stable descending sort by total; -inf (and NaN) last.
std::vector<GraspCandidate> rank(std::vector<GraspCandidate> candidates);

struct AnnealOptions {
    int iters = 100;
    double t0 = 1.0;
    double step_position = 0.005;        // meters at T = 1
    double step_rotation = 0.05;         // radians at T = 1
    double step_joint_fraction = 0.02;   // of each joint range at T = 1
};

// Generic Metropolis annealing with a linear schedule T = t0 (1 - t/iters).
// `propose(x, T, rng)` returns a new state and `f(x, floor)` its log
// objective; f may cache results inside the state, and may return any value
// below `floor` once it knows the objective is below it (such a proposal is
// rejected either way). Returns the best state ever visited and its value.
template <class State, class F, class Propose>
std::pair<State, double> anneal_generic(State x, double fx, F&& f, Propose&& propose, int iters, double t0,
                                        Rng& rng) {
    State best = x;
    double best_f = fx;
    for (int t = 0; t < iters; ++t) {
        const double temperature = t0 * (1.0 - static_cast<double>(t) / iters);
        State y = propose(x, temperature, rng);
        // Accept iff fy >= fx or T log u < fy - fx.
        const double log_u = std::log(rng.uniform());
        const double floor = temperature > 0.0 ? fx + temperature * log_u : fx;
        const double fy = f(y, floor);
        const bool accept = fy >= fx || (temperature > 0.0 && std::isfinite(fy) && temperature * log_u < fy - fx);
        if (accept) {
            x = std::move(y);
            fx = fy;
            if (fx > best_f) {
                best = x;
                best_f = fx;
            }
        }
    }
    return {std::move(best), best_f};
}

/// Refines h0 over (h_w, h_c). Throws InvalidStart if h0 scores -inf.
GraspCandidate anneal(const GraspCandidate& h0, const GraspObjective& objective, const AnnealOptions& options,
                      std::uint64_t seed);

struct SynthesisOptions {
    QueryOptions query;
    std::size_t n_candidates = 200;
    std::size_t top_m = 10;
    bool optimize = true;
    AnnealOptions anneal;
    int max_resample = 20;  // redraws when a hard expert rejects a sample
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct SynthesisTimings {
    double query_fit = 0.0;
    double sampling_ranking = 0.0;
    double optimization = 0.0;

    double total() const { return query_fit + sampling_ranking + optimization; }
};

struct SynthesisResult {
    std::vector<QueryDensity> queries;
    std::vector<GraspCandidate> ranked_initial;  // before refinement
    std::vector<GraspCandidate> ranked;          // after refining the top M
    SynthesisTimings timings;
};

SynthesisResult synthesize(const ModelBundle& bundle, const GripperModel& g, const AugmentedCloud& o,
                           const std::vector<ExpertSpec>& experts, const SynthesisOptions& options);

/// Ranked-grasp document. Contains no timings, so equal inputs give equal bytes.
nlohmann::json grasps_to_json(const std::vector<GraspCandidate>& ranked, const nlohmann::json& provenance);

}  // namespace graspsynth
