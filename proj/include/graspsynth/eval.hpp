#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "graspsynth/cloud.hpp"
#include "graspsynth/contact.hpp"
#include "graspsynth/hand.hpp"
#include "graspsynth/synth.hpp"

namespace graspsynth {

// ---------------------------------------------------------------------------
// Antipodal proxy

struct ProxyTolerance {
    double contact_dist = 0.005;   // meters from the pad plane
    double angle_deg = 30.0;       // normal opposition
    double max_penetration = 0.005;
};

struct ProxyReport {
    bool success = false;
    std::size_t left_contacts = 0;
    std::size_t right_contacts = 0;
    double opposition_deg = 180.0;
    std::string reason;
};

/// Parallel-jaw check: each pad has object points within contact_dist of
/// its plane inside the footprint, the mean contact normals oppose within
/// angle_deg, both normals face away from the other contact (object between
/// the pads), and no point sits deeper than max_penetration inside a link.
ProxyReport antipodal_check(const Grasp& h, const GripperModel& g, const AugmentedCloud& o,
                            const ProxyTolerance& tol = {});
bool antipodal_proxy(const GraspCandidate& h, const GripperModel& g, const AugmentedCloud& o,
                     const ProxyTolerance& tol = {});

// ---------------------------------------------------------------------------
// Statistics

struct TTestResult {
    double t = 0.0;
    int df = 0;
    double p_two_tailed = 1.0;
    double mean_diff = 0.0;
};

/// Regularized incomplete beta I_x(a, b), continued fraction (Lentz).
double incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Objects, demonstration, acquisition

struct ObjectSpec {
    std::string id;
    std::vector<PrimitiveSpec> parts;
};

nlohmann::json objects_to_json(const std::vector<ObjectSpec>& objects);
std::vector<ObjectSpec> objects_from_json(const nlohmann::json& j);

/// Primitive corpus: boxes, cylinders, spheres and two-part unions, each
/// with a dimension the default gripper can span (3 to 6.5 cm).
std::vector<ObjectSpec> generate_corpus(std::size_t count, std::uint64_t seed);

inline constexpr double kRenderDensity = 4e5;  // points per m^2 before rendering

PointCloud object_surface(const ObjectSpec& obj, std::uint64_t seed, double density = kRenderDensity);

/// Tetrahedral 4-camera acquisition, optional depth noise, frame estimation.
AugmentedCloud acquire_object(const ObjectSpec& obj, bool noise, std::uint64_t seed,
                              double radius = kDefaultCurvatureRadius, double sigma_p = 1.0, double sigma_d = 0.001);

struct Demonstration {
    ObjectSpec object;
    AugmentedCloud cloud;
    HandSnapshot snapshot;
};

/// 5 x 6 x 10 cm box grasped across its 5 cm faces by the default gripper.
Demonstration make_box_demo();

// ---------------------------------------------------------------------------
// Trials

enum class Condition { A, B, C, D };

// A: no noise + refinement, B: noise + refinement, C: no noise,
// D: noise; C and D skip refinement.
Condition parse_condition(std::string_view tag);
std::string_view to_string(Condition c);
bool condition_noise(Condition c);
bool condition_optimize(Condition c);

struct TrialRecord {
    std::string object_id;
    QueryMethod method = QueryMethod::Gmm;
    Condition condition = Condition::A;
    int repeat = 0;
    std::uint64_t seed = 0;
    bool success = false;
    double best_total = kNegInf;
    SynthesisTimings timings;
};

struct BenchmarkOptions {
    SynthesisOptions synthesis;  // method is overridden per arm
    std::vector<ExpertSpec> experts = default_experts();
    std::size_t probe_evaluations = 20000;
};

struct BenchmarkResult {
    TrialRecord kde;
    TrialRecord gmm;
    // Time for probe_evaluations KDE query likelihoods with N and 2N kernels.
    double kde_eval_n = 0.0;
    double kde_eval_2n = 0.0;

    double speedup() const { return kde.timings.total() / gmm.timings.total(); }
    double kde_scaling() const { return kde_eval_2n / kde_eval_n; }
};

BenchmarkResult run_benchmark(const AugmentedCloud& o, const ModelBundle& bundle, const GripperModel& g,
                              const BenchmarkOptions& options, const std::string& object_id = "object");

std::string benchmark_csv(const std::vector<BenchmarkResult>& results);

struct CampaignOptions {
    std::vector<Condition> conditions = {Condition::A, Condition::B, Condition::C, Condition::D};
    std::vector<QueryMethod> methods = {QueryMethod::Gmm, QueryMethod::Kde};
    int repeats = 10;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    SynthesisOptions synthesis;
    std::vector<ExpertSpec> experts = default_experts();
    ProxyTolerance proxy;
    double curvature_radius = kDefaultCurvatureRadius;
    double sigma_p = 1.0;
    double sigma_d = 0.001;
};

struct ConditionSummary {
    Condition condition = Condition::A;
    // Per method (in CampaignOptions::methods order): success rate per repeat.
    std::vector<std::vector<double>> per_repeat;
    std::vector<double> mean;
    std::optional<TTestResult> t_test;  // first method minus second, paired by repeat
    std::string t_test_note;
};

struct CampaignReport {
    std::vector<TrialRecord> records;  // ordered by (object, condition, method, repeat)
    std::vector<ConditionSummary> summaries;
    std::vector<QueryMethod> methods;
    std::size_t object_count = 0;
    int repeats = 0;
};

CampaignReport run_campaign(const std::vector<ObjectSpec>& objects, const ModelBundle& bundle,
                            const GripperModel& g, const CampaignOptions& options);

std::string campaign_csv(const CampaignReport& r);
nlohmann::json campaign_summary_json(const CampaignReport& r);
std::string campaign_text(const CampaignReport& r);

}  // namespace graspsynth
