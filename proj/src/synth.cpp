#include "graspsynth/synth.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "graspsynth/error.hpp"
#include "graspsynth/parallel.hpp"

namespace graspsynth {

using nlohmann::json;

QueryMethod parse_method(std::string_view tag) {
    if (tag == "gmm") return QueryMethod::Gmm;
    if (tag == "kde") return QueryMethod::Kde;
    fail(ErrorKind::InvalidArgument, "unknown query-density method '" + std::string(tag) + "' (expected gmm or kde)");
}

std::string_view to_string(QueryMethod method) { return method == QueryMethod::Gmm ? "gmm" : "kde"; }

// ---------------------------------------------------------------------------
// Query density

QueryDensity::QueryDensity(int link, std::string link_id, GaussianMixture model, std::size_t n_samples)
    : link_(link), link_id_(std::move(link_id)), model_(std::move(model)), n_samples_(n_samples) {}

QueryDensity::QueryDensity(int link, std::string link_id, KernelDensity model, std::size_t n_samples)
    : link_(link), link_id_(std::move(link_id)), model_(std::move(model)), n_samples_(n_samples) {}

double QueryDensity::log_likelihood_encoded(const VectorRef& x) const {
    return std::visit([&](const auto& m) { return m.log_likelihood(x); }, model_);
}

double QueryDensity::log_likelihood(const Pose& s) const {
    const Eigen::Matrix<double, 6, 1> x = encode_pose(s);
    return log_likelihood_encoded(x);
}

Pose QueryDensity::sample(Rng& rng) const {
    return decode_pose(std::visit([&](const auto& m) { return m.sample(rng); }, model_));
}

QueryDensity build_query_density(const AugmentedCloud& o, const ContactModel& m, int link_index,
                                 const QueryOptions& options, std::uint64_t seed) {
    if (o.empty()) {
        fail(ErrorKind::InvalidArgument, "build_query_density: empty object cloud");
    }
    if (options.n_samples < 1 ||
        (options.method == QueryMethod::Gmm && options.n_samples < options.components)) {
        fail(ErrorKind::InvalidArgument, "build_query_density: N_Q must be at least K_Q");
    }
    Rng rng(derive_seed(seed, "query-samples"));
    const auto n = static_cast<Eigen::Index>(options.n_samples);
    DataMatrix data(6, n);
    std::vector<double> log_w(options.n_samples);
    for (Eigen::Index i = 0; i < n; ++i) {
        const AugmentedPoint& pt = sample_surface(o, rng);
        const Eigen::Vector2d r = m.project_feature(pt.r);
        const double lw = m.feature_log_likelihood(r);
        if (std::isnan(lw)) {
            // Zero-weight placeholder for a point with undefined features.
            data.col(i) = encode_pose(pt.v);
            log_w[static_cast<std::size_t>(i)] = kNegInf;
            continue;
        }
        data.col(i) = encode_pose(pt.v * m.sample_pose(r, rng));
        log_w[static_cast<std::size_t>(i)] = lw;
    }
    const double mx = *std::max_element(log_w.begin(), log_w.end());
    if (!std::isfinite(mx)) {
        fail(ErrorKind::NoAffinity, "link '" + m.link_id() + "': no surface feature of the object has affinity");
    }
    std::vector<double> w(log_w.size());
    std::transform(log_w.begin(), log_w.end(), w.begin(), [mx](double lw) { return std::exp(lw - mx); });

    if (options.method == QueryMethod::Kde) {
        Eigen::VectorXd bw(6);
        bw << Eigen::Vector3d::Constant(options.kde_position_bandwidth), Eigen::Vector3d::Constant(options.kde_rotation_bandwidth);
        return {link_index, m.link_id(), KernelDensity(std::move(data), std::move(w), bw), options.n_samples};
    }
    EmOptions em;
    em.seed = derive_seed(seed, "query-em");
    em.max_iter = options.em_max_iter;
    em.tol = options.em_tol;
    em.cov_floor = options.em_cov_floor;
    return {link_index, m.link_id(), em_fit(data, w, options.components, em), options.n_samples};
}

std::optional<double> GraspCandidate::score(std::string_view name) const {
    for (const auto& [k, v] : scores) {
        if (k == name) return v;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Experts

namespace {

std::vector<Eigen::Vector3d> positions(const AugmentedCloud& o) {
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(o.size());
    for (const auto& it : o.items) pts.push_back(it.position());
    return pts;
}

constexpr double kCollisionCell = 0.005;

}  // namespace

CollisionExpert::CollisionExpert(const AugmentedCloud& o, const GripperModel& g, double lambda)
    : grid_(positions(o), kCollisionCell), lambda_(lambda) {
    if (!(lambda > 0.0)) {
        fail(ErrorKind::InvalidArgument, "collision expert: lambda must be positive");
    }
    for (std::size_t i = 0; i < g.links.size(); ++i) {
        if (g.links[i].geometry) solids_.emplace_back(i, *g.links[i].geometry);
    }
}

namespace {

// f(depth) for every point strictly inside the solid placed at `pose`.
// Only cells whose center is within a half-diagonal of the solid are read;
// farther cells cannot hold such points (the distance is 1-Lipschitz).
template <class F>
void for_each_penetration(const DenseGrid& grid, const Pose& pose, const CollisionPrimitive& solid, F&& f) {
    const Eigen::Matrix3d r = pose.q.matrix();
    const Eigen::Matrix3d rt = r.transpose();
    const double reach = 0.5 * std::sqrt(3.0) * grid.cell_size();
    if (solid.kind == CollisionPrimitive::Kind::Box) {
        // Box-centered local frame; the traversal box is already the solid
        // grown by the reach, so no per-cell test is needed.
        const Eigen::Vector3d center_w = pose.transform(solid.center);
        const Eigen::Vector3d offset = rt * center_w;
        const Eigen::Vector3d& h = solid.half_extents;
        // Rows of R^T, i.e. the columns of R.
        const double ax = r(0, 0), ay = r(1, 0), az = r(2, 0);
        const double bx = r(0, 1), by = r(1, 1), bz = r(2, 1);
        const double cx = r(0, 2), cy = r(1, 2), cz = r(2, 2);
        grid.for_each_cell_in_oriented_box(
            center_w, r, h + Eigen::Vector3d::Constant(reach), [](const Eigen::Vector3d&) { return true; },
            [&](std::span<const Eigen::Vector3d> points) {
                for (const Eigen::Vector3d& p : points) {
                    const double x = p.x(), y = p.y(), z = p.z();
                    const double dx = h.x() - std::abs(ax * x + ay * y + az * z - offset.x());
                    if (!(dx > 0.0)) continue;
                    const double dy = h.y() - std::abs(bx * x + by * y + bz * z - offset.y());
                    if (!(dy > 0.0)) continue;
                    const double dz = h.z() - std::abs(cx * x + cy * y + cz * z - offset.z());
                    if (!(dz > 0.0)) continue;
                    f(std::min({dx, dy, dz}));
                }
            });
        return;
    }
    // Capsule: traverse the box around it, aligned with its segment.
    const Eigen::Vector3d a = pose.transform(solid.a), b = pose.transform(solid.b);
    const Eigen::Vector3d d = b - a;
    const double len = d.norm();
    Eigen::Matrix3d axes = Eigen::Matrix3d::Identity();
    if (len > 0.0) {
        const Eigen::Vector3d z = d / len;
        const Eigen::Vector3d x = z.unitOrthogonal();
        axes << x, z.cross(x), z;
    }
    const Eigen::Vector3d half = Eigen::Vector3d(solid.radius, solid.radius, 0.5 * len + solid.radius).array() + reach;
    const Eigen::Vector3d offset = rt * pose.p;
    grid.for_each_cell_in_oriented_box(
        0.5 * (a + b), axes, half,
        [&](const Eigen::Vector3d& c) { return solid.signed_distance(rt * c - offset) < reach; },
        [&](std::span<const Eigen::Vector3d> points) {
            for (const Eigen::Vector3d& p : points) {
                const double depth = solid.penetration(rt * p - offset);
                if (depth > 0.0) f(depth);
            }
        });
}

}  // namespace

double CollisionExpert::penetration(const std::vector<Pose>& links, double cap) const {
    double total = 0.0;
    for (const auto& [i, solid] : solids_) {
        if (total > cap) break;
        for_each_penetration(grid_, links[i], solid, [&](double d) { total += d; });
    }
    return total;
}

double CollisionExpert::max_penetration(const std::vector<Pose>& links) const {
    double worst = 0.0;
    for (const auto& [i, solid] : solids_) {
        for_each_penetration(grid_, links[i], solid, [&](double d) { worst = std::max(worst, d); });
    }
    return worst;
}

double CollisionExpert::log_score(const Grasp&, const std::vector<Pose>& links) const {
    return -lambda_ * penetration(links);
}

double CollisionExpert::log_score_above(const Grasp&, const std::vector<Pose>& links, double floor) const {
    return -lambda_ * penetration(links, -floor / lambda_);
}

KinematicExpert::KinematicExpert(const GripperModel& g, Workspace w) : gripper_(g), w_(std::move(w)) {
    if ((w_.lo.array() > w_.hi.array()).any()) {
        fail(ErrorKind::InvalidArgument, "kinematic expert: workspace lower bound exceeds upper bound");
    }
    if (w_.cone_axis) {
        if (!(w_.cone_axis->norm() > 0.0)) {
            fail(ErrorKind::InvalidArgument, "kinematic expert: zero cone axis");
        }
        w_.cone_axis = w_.cone_axis->normalized();
    }
}

double KinematicExpert::log_score(const Grasp& h, const std::vector<Pose>&) const {
    const Eigen::Vector3d& p = h.h_w.p;
    if ((p.array() < w_.lo.array()).any() || (p.array() > w_.hi.array()).any()) {
        return kNegInf;
    }
    if (w_.cone_axis) {
        const Eigen::Vector3d approach = h.h_w.q.rotate(gripper_.approach_axis.normalized());
        if (std::acos(std::clamp(approach.dot(*w_.cone_axis), -1.0, 1.0)) > w_.cone_angle) {
            return kNegInf;
        }
    }
    return gripper_.within_limits(h.h_c) ? 0.0 : kNegInf;
}

AxisAlignExpert::AxisAlignExpert(const GripperModel& g, const Eigen::Vector3d& axis, double kappa)
    : approach_(g.approach_axis.normalized()), kappa_(kappa) {
    if (!(axis.norm() > 0.0) || !axis.allFinite()) {
        fail(ErrorKind::InvalidArgument, "axis expert: axis must be a nonzero vector");
    }
    if (!(kappa > 0.0)) {
        fail(ErrorKind::InvalidArgument, "axis expert: kappa must be positive");
    }
    axis_ = axis.normalized();
}

double AxisAlignExpert::log_score(const Grasp& h, const std::vector<Pose>&) const {
    const double c = std::clamp(h.h_w.q.rotate(approach_).dot(axis_), -1.0, 1.0);
    return -kappa_ * (1.0 - c);
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_number(const std::string& s, std::string_view context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        fail(ErrorKind::InvalidArgument, "expert '" + std::string(context) + "': '" + s + "' is not a number");
    }
}

std::vector<double> parse_numbers(const std::string& s, std::size_t expected, std::string_view context) {
    const auto parts = split(s, ',');
    if (parts.size() != expected) {
        fail(ErrorKind::InvalidArgument, "expert '" + std::string(context) + "': expected " +
                                             std::to_string(expected) + " comma-separated numbers");
    }
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_number(p, context));
    return out;
}

}  // namespace

ExpertSpec parse_expert(std::string_view text) {
    const auto parts = split(text, ':');
    ExpertSpec spec;
    if (parts[0] == "collision") {
        spec.type = ExpertSpec::Type::Collision;
        if (parts.size() > 2) fail(ErrorKind::InvalidArgument, "expert '" + std::string(text) + "': too many fields");
        if (parts.size() == 2) spec.lambda = parse_number(parts[1], text);
        if (!(spec.lambda > 0.0)) fail(ErrorKind::InvalidArgument, "collision lambda must be positive");
    } else if (parts[0] == "kinematic") {
        spec.type = ExpertSpec::Type::Kinematic;
        if (parts.size() > 2) fail(ErrorKind::InvalidArgument, "expert '" + std::string(text) + "': too many fields");
        if (parts.size() == 2) {
            const auto v = parse_numbers(parts[1], 6, text);
            spec.workspace.lo = {v[0], v[1], v[2]};
            spec.workspace.hi = {v[3], v[4], v[5]};
        }
    } else if (parts[0] == "axis") {
        spec.type = ExpertSpec::Type::Axis;
        if (parts.size() != 3) {
            fail(ErrorKind::InvalidArgument, "expert '" + std::string(text) + "': expected axis:x,y,z:kappa");
        }
        const auto v = parse_numbers(parts[1], 3, text);
        spec.axis = {v[0], v[1], v[2]};
        spec.kappa = parse_number(parts[2], text);
        if (!(spec.axis.norm() > 0.0)) fail(ErrorKind::InvalidArgument, "axis expert: zero axis");
        if (!(spec.kappa > 0.0)) fail(ErrorKind::InvalidArgument, "axis expert: kappa must be positive");
    } else {
        fail(ErrorKind::InvalidArgument, "unknown expert '" + parts[0] + "' (expected collision, kinematic or axis)");
    }
    return spec;
}

std::string to_string(const ExpertSpec& spec) {
    std::ostringstream ss;
    ss.precision(17);
    switch (spec.type) {
        case ExpertSpec::Type::Collision:
            ss << "collision:" << spec.lambda;
            break;
        case ExpertSpec::Type::Kinematic: {
            const auto& w = spec.workspace;
            ss << "kinematic:" << w.lo.x() << ',' << w.lo.y() << ',' << w.lo.z() << ',' << w.hi.x() << ','
               << w.hi.y() << ',' << w.hi.z();
            break;
        }
        case ExpertSpec::Type::Axis:
            ss << "axis:" << spec.axis.x() << ',' << spec.axis.y() << ',' << spec.axis.z() << ':' << spec.kappa;
            break;
    }
    return ss.str();
}

std::vector<ExpertPtr> make_experts(const std::vector<ExpertSpec>& specs, const AugmentedCloud& o,
                                    const GripperModel& g) {
    std::vector<ExpertPtr> out;
    for (const auto& s : specs) {
        switch (s.type) {
            case ExpertSpec::Type::Collision:
                out.push_back(std::make_shared<CollisionExpert>(o, g, s.lambda));
                break;
            case ExpertSpec::Type::Kinematic:
                out.push_back(std::make_shared<KinematicExpert>(g, s.workspace));
                break;
            case ExpertSpec::Type::Axis:
                out.push_back(std::make_shared<AxisAlignExpert>(g, s.axis, s.kappa));
                break;
        }
    }
    return out;
}

std::vector<ExpertSpec> default_experts() {
    ExpertSpec collision;
    collision.type = ExpertSpec::Type::Collision;
    ExpertSpec kinematic;
    kinematic.type = ExpertSpec::Type::Kinematic;
    return {collision, kinematic};
}

// ---------------------------------------------------------------------------
// Objective

GraspObjective::GraspObjective(const GripperModel& g, const HandConfigModel& c, std::vector<QueryDensity> queries,
                               std::vector<ExpertPtr> experts)
    : gripper_(&g), hand_(&c), queries_(std::move(queries)), experts_(std::move(experts)) {
    if (c.dim() != g.dof()) {
        fail(ErrorKind::InvalidArgument, "hand configuration model dimension does not match the gripper");
    }
    for (const auto& q : queries_) {
        if (q.link() < 0 || q.link() >= static_cast<int>(g.links.size())) {
            fail(ErrorKind::InvalidArgument, "query density refers to an unknown link");
        }
    }
}

double GraspObjective::evaluate(GraspCandidate& h) const {
    return *evaluate_above(h, kNegInf);
}

std::optional<double> GraspObjective::evaluate_above(GraspCandidate& h, double floor) const {
    h.scores.clear();
    const Grasp grasp = h.grasp();
    if (static_cast<std::size_t>(grasp.h_c.size()) != gripper_->dof()) {
        fail(ErrorKind::InvalidArgument, "candidate joint vector does not match the gripper");
    }
    const std::vector<Pose> links = fk(*gripper_, grasp);
    double total = 0.0;
    for (const auto& e : experts_) {
        if (e->kind() != ExpertKind::Hard) continue;
        const double s = e->log_score(grasp, links);
        h.scores.emplace_back(e->name(), s);
        total += s;
        if (s == kNegInf) {
            h.total = kNegInf;
            return h.total;
        }
    }
    const double c = hand_config_logpdf(*hand_, grasp.h_c);
    h.scores.emplace_back("hand_config", c);
    total += c;
    for (const auto& q : queries_) {
        const double s = q.log_likelihood(links[static_cast<std::size_t>(q.link())]);
        h.scores.emplace_back("query:" + q.link_id(), s);
        total += s;
    }
    for (const auto& e : experts_) {
        if (e->kind() != ExpertKind::Soft) continue;
        if (total < floor) return std::nullopt;
        const double s = floor == kNegInf ? e->log_score(grasp, links) : e->log_score_above(grasp, links, floor - total);
        h.scores.emplace_back(e->name(), s);
        total += s;
    }
    if (total < floor) return std::nullopt;
    h.total = std::isnan(total) ? kNegInf : total;
    return h.total;
}

bool GraspObjective::rejected_by_hard_expert(const GraspCandidate& h) const {
    for (const auto& e : experts_) {
        if (e->kind() != ExpertKind::Hard) continue;
        const auto s = h.score(e->name());
        if (s && *s == kNegInf) return true;
    }
    return false;
}

GraspCandidate sample_grasp(const std::vector<QueryDensity>& qset, const HandConfigModel& c, const GripperModel& g,
                            Rng& rng) {
    if (qset.empty()) {
        fail(ErrorKind::InvalidArgument, "sample_grasp: no query densities");
    }
    const QueryDensity& q = qset[rng.index(qset.size())];
    const Pose s = q.sample(rng);
    const HandConfig h_c = g.clamp(hand_config_sample(c, rng));
    GraspCandidate h;
    h.h_w = wrist_from_link(g, q.link(), s, h_c);
    h.h_c = h_c;
    h.sampled_link = q.link();
    return h;
}

std::vector<GraspCandidate> rank(std::vector<GraspCandidate> candidates) {
    auto key = [](const GraspCandidate& h) { return std::isnan(h.total) ? kNegInf : h.total; };
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const GraspCandidate& a, const GraspCandidate& b) { return key(a) > key(b); });
    return candidates;
}

GraspCandidate anneal(const GraspCandidate& h0, const GraspObjective& objective, const AnnealOptions& options,
                      std::uint64_t seed) {
    if (options.iters < 0 || !(options.t0 >= 0.0)) {
        fail(ErrorKind::InvalidArgument, "anneal: iterations and T0 must be nonnegative");
    }
    GraspCandidate start = h0;
    const double f0 = objective.evaluate(start);
    if (f0 == kNegInf) {
        fail(ErrorKind::InvalidStart, "anneal: starting candidate has a -inf objective");
    }
    const GripperModel& g = objective.gripper();
    Eigen::VectorXd joint_step(static_cast<Eigen::Index>(g.dof()));
    for (std::size_t i = 0; i < g.dof(); ++i) {
        joint_step[static_cast<Eigen::Index>(i)] = options.step_joint_fraction * g.joints[i].range();
    }
    Rng rng(seed);
    auto propose = [&](const GraspCandidate& x, double temperature, Rng& r) {
        GraspCandidate y = x;
        for (int k = 0; k < 3; ++k) y.h_w.p[k] += options.step_position * temperature * r.normal();
        Eigen::Vector3d theta;
        for (int k = 0; k < 3; ++k) theta[k] = options.step_rotation * temperature * r.normal();
        // Half-angle rotation vector; rotate about the wrist origin.
        y.h_w.q = y.h_w.q * quat_exp(RotVec{0.5 * theta});
        for (Eigen::Index k = 0; k < y.h_c.size(); ++k) y.h_c[k] += joint_step[k] * temperature * r.normal();
        return y;
    };
    auto f = [&](GraspCandidate& x, double floor) {
        const auto v = objective.evaluate_above(x, floor);
        return v ? *v : kNegInf;
    };
    return anneal_generic(start, f0, f, propose, options.iters, options.t0, rng).first;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SynthesisResult synthesize(const ModelBundle& bundle, const GripperModel& g, const AugmentedCloud& o,
                           const std::vector<ExpertSpec>& expert_specs, const SynthesisOptions& options) {
    if (o.empty()) {
        fail(ErrorKind::InvalidArgument, "synthesize: empty object cloud");
    }
    if (bundle.contacts.empty()) {
        fail(ErrorKind::InvalidArgument, "synthesize: model bundle has no contact models");
    }
    if (!bundle.gripper.empty() && bundle.gripper != g.name) {
        fail(ErrorKind::InvalidArgument, "model bundle was learned for gripper '" + bundle.gripper + "', not '" +
                                             g.name + "'");
    }
    SynthesisResult result;
    auto clock = std::chrono::steady_clock::now();

    std::vector<std::optional<QueryDensity>> fitted(bundle.contacts.size());
    parallel_for(bundle.contacts.size(), options.jobs, [&](std::size_t i) {
        const auto& m = bundle.contacts[i];
        fitted[i] = build_query_density(o, m, g.link_index(m.link_id()), options.query,
                                        derive_seed(options.seed, "query:" + m.link_id()));
    });
    for (auto& q : fitted) result.queries.push_back(std::move(*q));
    result.timings.query_fit = seconds_since(clock);

    clock = std::chrono::steady_clock::now();
    const GraspObjective objective(g, bundle.hand, result.queries, make_experts(expert_specs, o, g));
    std::vector<GraspCandidate> candidates(options.n_candidates);
    parallel_for(options.n_candidates, options.jobs, [&](std::size_t i) {
        Rng rng(derive_seed(options.seed, "candidate", i));
        GraspCandidate h;
        for (int attempt = 0; attempt <= options.max_resample; ++attempt) {
            h = sample_grasp(result.queries, bundle.hand, g, rng);
            objective.evaluate(h);
            if (!objective.rejected_by_hard_expert(h)) break;
        }
        h.index = i;
        candidates[i] = std::move(h);
    });
    result.ranked_initial = rank(std::move(candidates));
    result.timings.sampling_ranking = seconds_since(clock);

    clock = std::chrono::steady_clock::now();
    result.ranked = result.ranked_initial;
    if (options.optimize) {
        const std::size_t m = std::min(options.top_m, result.ranked.size());
        parallel_for(m, options.jobs, [&](std::size_t i) {
            const GraspCandidate& h0 = result.ranked_initial[i];
            if (h0.total == kNegInf) return;
            GraspCandidate refined = anneal(h0, objective, options.anneal, derive_seed(options.seed, "anneal", h0.index));
            refined.index = h0.index;
            refined.sampled_link = h0.sampled_link;
            result.ranked[i] = std::move(refined);
        });
        result.ranked = rank(std::move(result.ranked));
    }
    result.timings.optimization = seconds_since(clock);
    return result;
}

json grasps_to_json(const std::vector<GraspCandidate>& ranked, const json& provenance) {
    json list = json::array();
    for (std::size_t r = 0; r < ranked.size(); ++r) {
        const auto& h = ranked[r];
        json scores = json::object();
        for (const auto& [k, v] : h.scores) scores[k] = std::isfinite(v) ? json(v) : json(nullptr);
        list.push_back({{"rank", r},
                        {"sample_index", h.index},
                        {"sampled_link", h.sampled_link},
                        {"h_w", pose_to_json(h.h_w)},
                        {"h_c", vector_to_json(h.h_c)},
                        {"scores", scores},
                        {"total", std::isfinite(h.total) ? json(h.total) : json(nullptr)}});
    }
    return {{"format", "graspsynth-grasps"}, {"version", 1}, {"provenance", provenance}, {"grasps", list}};
}

}  // namespace graspsynth
