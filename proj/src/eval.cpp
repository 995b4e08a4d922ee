#include "graspsynth/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include "graspsynth/error.hpp"
#include "graspsynth/io.hpp"
#include "graspsynth/parallel.hpp"

namespace graspsynth {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Antipodal proxy

ProxyReport antipodal_check(const Grasp& h, const GripperModel& g, const AugmentedCloud& o,
                            const ProxyTolerance& tol) {
    if (!g.parallel_jaw) {
        fail(ErrorKind::UnsupportedGripper, "antipodal proxy needs a parallel-jaw gripper; '" + g.name + "' is not one");
    }
    const ParallelJaw& pj = *g.parallel_jaw;
    const auto links = fk(g, h);
    ProxyReport rep;
    const int fingers[2] = {pj.left, pj.right};
    Eigen::Vector3d normal_sum[2] = {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
    Eigen::Vector3d point_sum[2] = {Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
    std::size_t counts[2] = {0, 0};
    double deepest = 0.0;
    std::vector<std::pair<Pose, const CollisionPrimitive*>> solids;
    for (std::size_t i = 0; i < g.links.size(); ++i) {
        if (g.links[i].geometry) solids.emplace_back(pose_inverse(links[i]), &*g.links[i].geometry);
    }
    const Pose to_finger[2] = {pose_inverse(links[static_cast<std::size_t>(fingers[0])]),
                               pose_inverse(links[static_cast<std::size_t>(fingers[1])])};
    for (const auto& pt : o.items) {
        for (int f = 0; f < 2; ++f) {
            const Eigen::Vector3d local = to_finger[f].transform(pt.position());
            if (std::abs(local.z()) <= tol.contact_dist && std::abs(local.x()) <= pj.pad_half.x() &&
                std::abs(local.y()) <= pj.pad_half.y()) {
                normal_sum[f] += pt.normal();
                point_sum[f] += pt.position();
                ++counts[f];
            }
        }
        for (const auto& [inv, solid] : solids) {
            deepest = std::max(deepest, -solid->signed_distance(inv.transform(pt.position())));
        }
    }
    rep.left_contacts = counts[0];
    rep.right_contacts = counts[1];
    if (counts[0] == 0 || counts[1] == 0) {
        rep.reason = "pad without contact";
        return rep;
    }
    if (deepest > tol.max_penetration) {
        rep.reason = "link penetrates the object";
        return rep;
    }
    if (normal_sum[0].norm() < 1e-12 || normal_sum[1].norm() < 1e-12) {
        rep.reason = "contact normals cancel";
        return rep;
    }
    const Eigen::Vector3d n0 = normal_sum[0].normalized(), n1 = normal_sum[1].normalized();
    const Eigen::Vector3d c0 = point_sum[0] / static_cast<double>(counts[0]);
    const Eigen::Vector3d c1 = point_sum[1] / static_cast<double>(counts[1]);
    rep.opposition_deg = std::acos(std::clamp(-n0.dot(n1), -1.0, 1.0)) * 180.0 / std::numbers::pi;
    if (rep.opposition_deg > tol.angle_deg) {
        rep.reason = "contact normals do not oppose";
        return rep;
    }
    if (!(n0.dot(c0 - c1) > 0.0 && n1.dot(c1 - c0) > 0.0)) {
        rep.reason = "closing line does not pass between the contacts";
        return rep;
    }
    rep.success = true;
    return rep;
}

bool antipodal_proxy(const GraspCandidate& h, const GripperModel& g, const AugmentedCloud& o,
                     const ProxyTolerance& tol) {
    return antipodal_check(h.grasp(), g, o, tol).success;
}

// ---------------------------------------------------------------------------
// Statistics

namespace {

double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-12;
    constexpr double kTiny = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) {
            return h;
        }
    }
    fail(ErrorKind::InvalidState, "incomplete beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        fail(ErrorKind::InvalidArgument, "incomplete beta: a and b must be positive");
    }
    if (!(x >= 0.0 && x <= 1.0)) {
        fail(ErrorKind::InvalidArgument, "incomplete beta: x must lie in [0, 1]");
    }
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (!(df > 0.0)) {
        fail(ErrorKind::InvalidArgument, "t distribution: df must be positive");
    }
    if (std::isinf(t)) {
        return t > 0.0 ? 1.0 : 0.0;
    }
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
    return t > 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        fail(ErrorKind::InvalidArgument, "paired t-test: samples differ in length");
    }
    if (a.size() < 2) {
        fail(ErrorKind::InvalidArgument, "paired t-test: need at least two pairs");
    }
    const auto n = static_cast<double>(a.size());
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    TTestResult r;
    r.df = static_cast<int>(a.size()) - 1;
    r.mean_diff = mean;
    if (sd == 0.0) {
        if (mean == 0.0) {
            r.t = 0.0;
            r.p_two_tailed = 1.0;
            return r;
        }
        fail(ErrorKind::DegenerateVariance, "paired t-test: differences are constant and nonzero");
    }
    r.t = mean / (sd / std::sqrt(n));
    r.p_two_tailed = std::clamp(incomplete_beta(0.5 * r.df, 0.5, r.df / (r.df + r.t * r.t)), 0.0, 1.0);
    return r;
}

// ---------------------------------------------------------------------------
// Objects

json objects_to_json(const std::vector<ObjectSpec>& objects) {
    json list = json::array();
    for (const auto& o : objects) {
        json parts = json::array();
        for (const auto& p : o.parts) {
            parts.push_back({{"shape", std::string(to_string(p.shape))},
                             {"extents", {p.extents.x(), p.extents.y(), p.extents.z()}},
                             {"pose", pose_to_json(p.pose)},
                             {"density", p.density}});
        }
        list.push_back({{"id", o.id}, {"parts", parts}});
    }
    return {{"format", "graspsynth-objects"}, {"objects", list}};
}

std::vector<ObjectSpec> objects_from_json(const json& j) {
    try {
        std::vector<ObjectSpec> out;
        for (const auto& jo : j.at("objects")) {
            ObjectSpec o;
            o.id = jo.at("id").get<std::string>();
            for (const auto& jp : jo.at("parts")) {
                PrimitiveSpec p;
                p.shape = parse_shape(jp.at("shape").get<std::string>());
                auto e = jp.at("extents").get<std::vector<double>>();
                e.resize(3, 0.0);
                p.extents = {e[0], e[1], e[2]};
                if (jp.contains("pose")) p.pose = pose_from_json(jp.at("pose"));
                p.density = jp.value("density", kRenderDensity);
                o.parts.push_back(p);
            }
            if (o.parts.empty()) {
                fail(ErrorKind::InvalidArgument, "object '" + o.id + "' has no parts");
            }
            out.push_back(std::move(o));
        }
        if (out.empty()) {
            fail(ErrorKind::InvalidArgument, "object manifest lists no objects");
        }
        return out;
    } catch (const json::exception& e) {
        fail(ErrorKind::InvalidArgument, std::string("object manifest: ") + e.what());
    }
}

std::vector<ObjectSpec> generate_corpus(std::size_t count, std::uint64_t seed) {
    Rng rng(derive_seed(seed, "corpus"));
    auto between = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    std::vector<ObjectSpec> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double yaw = between(0.0, 2.0 * std::numbers::pi);
        const double tilt = between(-0.3, 0.3);
        const Quat orientation = Quat::from_axis_angle(Eigen::Vector3d::UnitZ(), yaw) *
                                 Quat::from_axis_angle(Eigen::Vector3d::UnitX(), tilt);
        const Pose place{Eigen::Vector3d::Zero(), orientation};
        ObjectSpec obj;
        PrimitiveSpec p;
        p.density = kRenderDensity;
        p.pose = place;
        switch (i % 5) {
            case 0:
            case 3:
                p.shape = Shape::Box;
                p.extents = {between(0.03, 0.06), between(0.04, 0.08), between(0.06, 0.13)};
                obj.id = "box";
                obj.parts.push_back(p);
                break;
            case 1:
                p.shape = Shape::Cylinder;
                p.extents = {between(0.016, 0.03), between(0.07, 0.14), 0.0};
                obj.id = "cylinder";
                obj.parts.push_back(p);
                break;
            case 2:
                p.shape = Shape::Sphere;
                p.extents = {between(0.02, 0.03), 0.0, 0.0};
                obj.id = "sphere";
                obj.parts.push_back(p);
                break;
            default: {
                // Bottle: box base with a coaxial cylinder on top.
                const double base_h = between(0.04, 0.06);
                const double neck_h = between(0.05, 0.08);
                p.shape = Shape::Box;
                p.extents = {between(0.04, 0.06), between(0.04, 0.06), base_h};
                p.pose = place * Pose::translation({0.0, 0.0, -0.5 * neck_h});
                obj.parts.push_back(p);
                PrimitiveSpec neck = p;
                neck.shape = Shape::Cylinder;
                neck.extents = {between(0.015, 0.02), neck_h + 0.01, 0.0};
                neck.pose = place * Pose::translation({0.0, 0.0, 0.5 * base_h - 0.005});
                obj.parts.push_back(neck);
                obj.id = "bottle";
                break;
            }
        }
        obj.id = (i < 10 ? "0" : "") + std::to_string(i) + "_" + obj.id;
        out.push_back(std::move(obj));
    }
    return out;
}

PointCloud object_surface(const ObjectSpec& obj, std::uint64_t seed, double density) {
    std::vector<PrimitiveSpec> parts = obj.parts;
    for (auto& p : parts) p.density = density;
    Rng rng(seed);
    return make_object(parts, rng);
}

AugmentedCloud acquire_object(const ObjectSpec& obj, bool noise, std::uint64_t seed, double radius, double sigma_p,
                              double sigma_d) {
    AcquisitionOptions opts;
    opts.noise = noise;
    opts.seed = seed;
    opts.sigma_p = sigma_p;
    opts.sigma_d = sigma_d;
    return estimate_frames(acquire(std::span<const PrimitiveSpec>(obj.parts), opts), radius);
}

Demonstration make_box_demo() {
    ObjectSpec box;
    box.id = "demo_box";
    PrimitiveSpec p;
    p.shape = Shape::Box;
    p.extents = {0.05, 0.06, 0.10};
    p.density = kRenderDensity;
    box.parts.push_back(p);
    AugmentedCloud cloud = acquire_object(box, false, 0);
    // Approach along +y with the jaws closing along x; pads touch the
    // x = +-2.5 cm faces at width 5 cm.
    Eigen::Matrix3d r;
    r.col(0) = Eigen::Vector3d::UnitX();
    r.col(1) = -Eigen::Vector3d::UnitZ();
    r.col(2) = Eigen::Vector3d::UnitY();
    HandSnapshot snap;
    snap.gripper = "wsg50";
    snap.h_w = {Eigen::Vector3d(0.0, -0.05, 0.0), Quat::from_matrix(r)};
    snap.h_g = Eigen::VectorXd::Constant(1, 0.05);
    snap.h_e = Eigen::VectorXd::Constant(1, 0.09);
    return {box, std::move(cloud), snap};
}

// ---------------------------------------------------------------------------
// Trials

Condition parse_condition(std::string_view tag) {
    if (tag == "A") return Condition::A;
    if (tag == "B") return Condition::B;
    if (tag == "C") return Condition::C;
    if (tag == "D") return Condition::D;
    fail(ErrorKind::InvalidArgument, "unknown condition '" + std::string(tag) + "' (expected A, B, C or D)");
}

std::string_view to_string(Condition c) {
    switch (c) {
        case Condition::A: return "A";
        case Condition::B: return "B";
        case Condition::C: return "C";
        case Condition::D: return "D";
    }
    return "?";
}

bool condition_noise(Condition c) { return c == Condition::B || c == Condition::D; }
bool condition_optimize(Condition c) { return c == Condition::A || c == Condition::B; }

namespace {

double top_total(const std::vector<GraspCandidate>& ranked) { return ranked.empty() ? kNegInf : ranked.front().total; }

bool top_success(const std::vector<GraspCandidate>& ranked, const GripperModel& g, const AugmentedCloud& reference,
                 const ProxyTolerance& tol) {
    if (ranked.empty() || ranked.front().total == kNegInf) {
        return false;
    }
    return antipodal_proxy(ranked.front(), g, reference, tol);
}

double time_probe(const QueryDensity& q, const std::vector<Eigen::Matrix<double, 6, 1>>& probes) {
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 3; ++rep) {
        volatile double sink = 0.0;
        const auto t0 = std::chrono::steady_clock::now();
        for (const auto& x : probes) sink = sink + q.log_likelihood_encoded(x);
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

}  // namespace

BenchmarkResult run_benchmark(const AugmentedCloud& o, const ModelBundle& bundle, const GripperModel& g,
                              const BenchmarkOptions& options, const std::string& object_id) {
    BenchmarkResult result;
    for (QueryMethod method : {QueryMethod::Kde, QueryMethod::Gmm}) {
        SynthesisOptions so = options.synthesis;
        so.query.method = method;
        const SynthesisResult sr = synthesize(bundle, g, o, options.experts, so);
        TrialRecord& rec = method == QueryMethod::Kde ? result.kde : result.gmm;
        rec.object_id = object_id;
        rec.method = method;
        rec.condition = so.optimize ? Condition::A : Condition::C;
        rec.seed = so.seed;
        rec.best_total = top_total(sr.ranked);
        rec.success = top_success(sr.ranked, g, o, ProxyTolerance{});
        rec.timings = sr.timings;
    }
    // O(N) check on the KDE likelihood alone.
    QueryOptions qo = options.synthesis.query;
    qo.method = QueryMethod::Kde;
    const auto& m = bundle.contacts.front();
    const int link = g.link_index(m.link_id());
    const QueryDensity small = build_query_density(o, m, link, qo, derive_seed(options.synthesis.seed, "probe"));
    qo.n_samples *= 2;
    const QueryDensity large = build_query_density(o, m, link, qo, derive_seed(options.synthesis.seed, "probe"));
    Rng rng(derive_seed(options.synthesis.seed, "probe-points"));
    std::vector<Eigen::Matrix<double, 6, 1>> probes;
    for (std::size_t i = 0; i < options.probe_evaluations; ++i) probes.push_back(encode_pose(small.sample(rng)));
    result.kde_eval_n = time_probe(small, probes);
    result.kde_eval_2n = time_probe(large, probes);
    return result;
}

std::string benchmark_csv(const std::vector<BenchmarkResult>& results) {
    std::ostringstream ss;
    ss.precision(9);
    ss << "object,method,seed,success,best_total,query_fit_s,sampling_ranking_s,optimization_s,total_s\n";
    for (const auto& r : results) {
        for (const TrialRecord* t : {&r.kde, &r.gmm}) {
            ss << t->object_id << ',' << to_string(t->method) << ',' << t->seed << ',' << (t->success ? 1 : 0) << ','
               << (std::isfinite(t->best_total) ? format_double(t->best_total) : std::string("-inf")) << ','
               << t->timings.query_fit << ',' << t->timings.sampling_ranking << ',' << t->timings.optimization << ','
               << t->timings.total() << '\n';
        }
    }
    return ss.str();
}

CampaignReport run_campaign(const std::vector<ObjectSpec>& objects, const ModelBundle& bundle,
                            const GripperModel& g, const CampaignOptions& options) {
    if (objects.empty()) {
        fail(ErrorKind::InvalidArgument, "run_campaign: empty object set");
    }
    if (options.repeats < 1 || options.conditions.empty() || options.methods.empty()) {
        fail(ErrorKind::InvalidArgument, "run_campaign: need at least one repeat, condition and method");
    }
    const auto& conds = options.conditions;
    const auto& methods = options.methods;
    const std::size_t per_object = conds.size() * methods.size() * static_cast<std::size_t>(options.repeats);
    std::vector<TrialRecord> records(objects.size() * per_object);
    auto slot = [&](std::size_t obj, std::size_t c, std::size_t m, int r) {
        return obj * per_object + (c * methods.size() + m) * static_cast<std::size_t>(options.repeats) +
               static_cast<std::size_t>(r);
    };

    parallel_for(objects.size(), options.jobs, [&](std::size_t oi) {
        const ObjectSpec& obj = objects[oi];
        const AugmentedCloud clean = acquire_object(obj, false, 0, options.curvature_radius);
        for (int r = 0; r < options.repeats; ++r) {
            const std::uint64_t rs = derive_seed(options.seed, "repeat", static_cast<std::uint64_t>(r));
            for (bool noisy : {false, true}) {
                std::vector<std::size_t> active;
                bool need_opt = false;
                for (std::size_t c = 0; c < conds.size(); ++c) {
                    if (condition_noise(conds[c]) == noisy) {
                        active.push_back(c);
                        need_opt = need_opt || condition_optimize(conds[c]);
                    }
                }
                if (active.empty()) continue;
                const AugmentedCloud cloud =
                    noisy ? acquire_object(obj, true, derive_seed(rs, "noise", oi), options.curvature_radius,
                                           options.sigma_p, options.sigma_d)
                          : clean;
                for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                    SynthesisOptions so = options.synthesis;
                    so.query.method = methods[mi];
                    so.optimize = need_opt;
                    so.seed = derive_seed(rs, "synth", oi);
                    so.jobs = 1;
                    const SynthesisResult sr = synthesize(bundle, g, cloud, options.experts, so);
                    for (std::size_t c : active) {
                        const bool opt = condition_optimize(conds[c]);
                        const auto& ranked = opt ? sr.ranked : sr.ranked_initial;
                        TrialRecord& rec = records[slot(oi, c, mi, r)];
                        rec.object_id = obj.id;
                        rec.method = methods[mi];
                        rec.condition = conds[c];
                        rec.repeat = r;
                        rec.seed = so.seed;
                        rec.best_total = top_total(ranked);
                        rec.success = top_success(ranked, g, clean, options.proxy);
                        rec.timings = sr.timings;
                        if (!opt) rec.timings.optimization = 0.0;
                    }
                }
            }
        }
    });

    CampaignReport rep;
    rep.records = std::move(records);
    rep.methods = methods;
    rep.object_count = objects.size();
    rep.repeats = options.repeats;
    for (std::size_t c = 0; c < conds.size(); ++c) {
        ConditionSummary s;
        s.condition = conds[c];
        for (std::size_t m = 0; m < methods.size(); ++m) {
            std::vector<double> rates(static_cast<std::size_t>(options.repeats), 0.0);
            for (int r = 0; r < options.repeats; ++r) {
                double hits = 0.0;
                for (std::size_t oi = 0; oi < objects.size(); ++oi) hits += rep.records[slot(oi, c, m, r)].success ? 1.0 : 0.0;
                rates[static_cast<std::size_t>(r)] = hits / static_cast<double>(objects.size());
            }
            double mean = 0.0;
            for (double x : rates) mean += x;
            s.mean.push_back(mean / options.repeats);
            s.per_repeat.push_back(std::move(rates));
        }
        if (methods.size() < 2) {
            s.t_test_note = "single method";
        } else if (options.repeats < 2) {
            s.t_test_note = "fewer than two repeats";
        } else {
            try {
                s.t_test = paired_t_test(s.per_repeat[0], s.per_repeat[1]);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::DegenerateVariance) throw;
                s.t_test_note = "degenerate-variance";
            }
        }
        rep.summaries.push_back(std::move(s));
    }
    return rep;
}

std::string campaign_csv(const CampaignReport& r) {
    std::ostringstream ss;
    ss.precision(9);
    ss << "object,condition,method,repeat,seed,success,best_total,query_fit_s,sampling_ranking_s,optimization_s\n";
    for (const auto& t : r.records) {
        ss << t.object_id << ',' << to_string(t.condition) << ',' << to_string(t.method) << ',' << t.repeat << ','
           << t.seed << ',' << (t.success ? 1 : 0) << ','
           << (std::isfinite(t.best_total) ? format_double(t.best_total) : std::string("-inf")) << ','
           << t.timings.query_fit << ',' << t.timings.sampling_ranking << ',' << t.timings.optimization << '\n';
    }
    return ss.str();
}

json campaign_summary_json(const CampaignReport& r) {
    json conditions = json::array();
    for (const auto& s : r.summaries) {
        json methods = json::object();
        for (std::size_t m = 0; m < r.methods.size(); ++m) {
            methods[std::string(to_string(r.methods[m]))] = {{"success_rate", s.mean[m]},
                                                             {"per_repeat", s.per_repeat[m]},
                                                             {"denominator", r.object_count}};
        }
        json t = nullptr;
        if (s.t_test) {
            t = {{"t", s.t_test->t},
                 {"df", s.t_test->df},
                 {"p_two_tailed", s.t_test->p_two_tailed},
                 {"mean_diff", s.t_test->mean_diff}};
        }
        json entry = {{"condition", std::string(to_string(s.condition))},
                      {"noise", condition_noise(s.condition)},
                      {"optimization", condition_optimize(s.condition)},
                      {"methods", methods},
                      {"t_test", t}};
        if (r.methods.size() >= 2) {
            entry["t_test_pair"] = {std::string(to_string(r.methods[0])), std::string(to_string(r.methods[1]))};
        }
        if (!s.t_test_note.empty()) entry["t_test_note"] = s.t_test_note;
        conditions.push_back(entry);
    }
    return {{"format", "graspsynth-campaign"},
            {"objects", r.object_count},
            {"repeats", r.repeats},
            {"conditions", conditions}};
}

std::string campaign_text(const CampaignReport& r) {
    std::ostringstream ss;
    ss << "objects: " << r.object_count << ", repeats: " << r.repeats << '\n';
    char line[256];
    for (const auto& s : r.summaries) {
        ss << "condition " << to_string(s.condition) << " (noise " << (condition_noise(s.condition) ? "on" : "off")
           << ", refinement " << (condition_optimize(s.condition) ? "on" : "off") << ")\n";
        for (std::size_t m = 0; m < r.methods.size(); ++m) {
            std::snprintf(line, sizeof(line), "  %-4s success %.3f\n", std::string(to_string(r.methods[m])).c_str(),
                          s.mean[m]);
            ss << line;
        }
        if (s.t_test) {
            std::snprintf(line, sizeof(line), "  paired t (%s - %s): t = %.4f, df = %d, p = %.4f\n",
                          std::string(to_string(r.methods[0])).c_str(), std::string(to_string(r.methods[1])).c_str(),
                          s.t_test->t, s.t_test->df, s.t_test->p_two_tailed);
            ss << line;
        } else {
            ss << "  paired t: n/a (" << s.t_test_note << ")\n";
        }
    }
    return ss.str();
}

}  // namespace graspsynth
