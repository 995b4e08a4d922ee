#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "graspsynth/error.hpp"
#include "graspsynth/eval.hpp"
#include "graspsynth/synth.hpp"

using namespace graspsynth;

namespace {

struct Fixture {
    Demonstration demo = make_box_demo();
    GripperModel gripper = default_gripper();
    ModelBundle bundle = learn_from_demonstration(demo.cloud, demo.snapshot, gripper).bundle;
};

const Fixture& fixture() {
    static const Fixture f;
    return f;
}

QueryOptions small_query(QueryMethod method = QueryMethod::Gmm) {
    QueryOptions q;
    q.method = method;
    q.n_samples = 200;
    return q;
}

SynthesisOptions small_synthesis() {
    SynthesisOptions o;
    o.query = small_query();
    o.n_candidates = 60;
    o.top_m = 3;
    o.anneal.iters = 20;
    o.seed = 11;
    return o;
}

AugmentedCloud point_cloud(std::vector<Eigen::Vector3d> points) {
    AugmentedCloud o;
    for (const auto& p : points) o.items.push_back({Pose::translation(p), {0.0, 0.0}});
    return o;
}

GripperModel one_box_gripper(double half) {
    GripperModel g;
    g.name = "block";
    CollisionPrimitive b;
    b.half_extents = Eigen::Vector3d::Constant(half);
    LinkSpec l;
    l.id = "block";
    l.geometry = b;
    g.links.push_back(l);
    g.validate();
    return g;
}

Pose random_pose(Rng& rng, double spread) {
    return {spread * Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()),
            Quat::from_coeffs(rng.normal(), rng.normal(), rng.normal(), rng.normal())};
}

GraspCandidate candidate_at(const Pose& h_w, double width) { return {h_w, HandConfig::Constant(1, width)}; }

}  // namespace

TEST(QueryDensity, DemonstratedLinkPosesBeatRandomPoses) {
    const Fixture& f = fixture();
    const auto links = fk(f.gripper, {f.demo.snapshot.h_w, f.demo.snapshot.h_g});
    for (const auto& m : f.bundle.contacts) {
        const int link = f.gripper.link_index(m.link_id());
        for (QueryMethod method : {QueryMethod::Gmm, QueryMethod::Kde}) {
            const QueryDensity q = build_query_density(f.demo.cloud, m, link, small_query(method), 1);
            Rng rng(2);
            double held_out = 0.0, random = 0.0;
            const int n = 1000;
            for (int i = 0; i < n; ++i) {
                // Demonstrated placement slid along the face it touched.
                Pose s = links[static_cast<std::size_t>(link)];
                s.p += Eigen::Vector3d(0.0, 0.01 * rng.normal(), 0.02 * rng.normal());
                held_out += std::exp(q.log_likelihood(s));
                const Pose u{Eigen::Vector3d(0.2 * rng.uniform() - 0.1, 0.2 * rng.uniform() - 0.1, 0.2 * rng.uniform() - 0.1),
                             Quat::from_coeffs(rng.normal(), rng.normal(), rng.normal(), rng.normal())};
                random += std::exp(q.log_likelihood(u));
            }
            EXPECT_GT(held_out, 10.0 * random) << m.link_id() << " " << to_string(method);
        }
    }
}

TEST(QueryDensity, SampleCountEqualToComponents) {
    const Fixture& f = fixture();
    QueryOptions q = small_query();
    q.n_samples = q.components;
    const auto& m = f.bundle.contacts.front();
    const QueryDensity d = build_query_density(f.demo.cloud, m, f.gripper.link_index(m.link_id()), q, 2);
    EXPECT_EQ(d.n_samples_used(), q.components);
    Rng rng(3);
    EXPECT_TRUE(std::isfinite(d.log_likelihood(d.sample(rng))));
    q.n_samples = q.components - 1;
    try {
        build_query_density(f.demo.cloud, m, f.gripper.link_index(m.link_id()), q, 2);
        FAIL() << "expected InvalidArgument";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
    }
}

TEST(QueryDensity, DeterministicForSeed) {
    const Fixture& f = fixture();
    const auto& m = f.bundle.contacts.front();
    const int link = f.gripper.link_index(m.link_id());
    const QueryDensity a = build_query_density(f.demo.cloud, m, link, small_query(), 4);
    const QueryDensity b = build_query_density(f.demo.cloud, m, link, small_query(), 4);
    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const Pose s = a.sample(rng);
        EXPECT_EQ(a.log_likelihood(s), b.log_likelihood(s));
    }
}

TEST(QueryDensity, NoAffinity) {
    const Fixture& f = fixture();
    const auto& m = f.bundle.contacts.front();
    AugmentedCloud far = f.demo.cloud;
    for (auto& p : far.items) p.r = Eigen::Vector2d::Constant(std::nan(""));
    try {
        build_query_density(far, m, f.gripper.link_index(m.link_id()), small_query(), 1);
        FAIL() << "expected NoAffinity";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NoAffinity) << e.what();
    }
}

TEST(SampleGrasp, LinkPoseMatchesQuerySampleAndLimits) {
    const Fixture& f = fixture();
    std::vector<QueryDensity> qs;
    for (const auto& m : f.bundle.contacts) {
        qs.push_back(build_query_density(f.demo.cloud, m, f.gripper.link_index(m.link_id()), small_query(), 6));
    }
    Rng rng(7);
    std::vector<int> hits(f.gripper.links.size(), 0);
    for (int i = 0; i < 200; ++i) {
        const GraspCandidate h = sample_grasp(qs, f.bundle.hand, f.gripper, rng);
        ASSERT_TRUE(f.gripper.within_limits(h.h_c));
        ASSERT_TRUE(h.scores.empty());
        ++hits[static_cast<std::size_t>(h.sampled_link)];
        const Pose link = fk(f.gripper, h.grasp())[static_cast<std::size_t>(h.sampled_link)];
        EXPECT_TRUE(std::isfinite(qs[static_cast<std::size_t>(h.sampled_link) - 1].log_likelihood(link)));
    }
    EXPECT_GT(hits[1], 60);
    EXPECT_GT(hits[2], 60);
    EXPECT_THROW(sample_grasp({}, f.bundle.hand, f.gripper, rng), Error);
}

TEST(CollisionExpert, OneCentimeterInside) {
    const GripperModel g = one_box_gripper(0.05);
    const CollisionExpert e(point_cloud({{0.0, 0.0, 0.04}}), g, 100.0);
    const Grasp h{Pose::identity(), HandConfig(0)};
    EXPECT_NEAR(e.value(h, fk(g, h)), std::exp(-1.0), 1e-12);
    const Grasp far{Pose::translation({1.0, 0.0, 0.0}), HandConfig(0)};
    EXPECT_EQ(e.log_score(far, fk(g, far)), 0.0);
}

TEST(CollisionExpert, MonotoneAlongRay) {
    const GripperModel g = one_box_gripper(0.03);
    std::vector<Eigen::Vector3d> pts;
    Rng rng(8);
    for (int i = 0; i < 500; ++i) pts.emplace_back(0.02 * rng.normal(), 0.02 * rng.normal(), 0.02 * rng.normal());
    const CollisionExpert e(point_cloud(pts), g, 100.0);
    double previous = kNegInf;
    for (int k = 0; k <= 40; ++k) {
        const Grasp h{Pose::translation({0.0, 0.0, 0.005 * k}), HandConfig(0)};
        const double s = e.log_score(h, fk(g, h));
        EXPECT_GE(s, previous);
        previous = s;
    }
    EXPECT_EQ(previous, 0.0);
}

TEST(CollisionExpert, GridMatchesBruteForce) {
    const Fixture& f = fixture();
    const CollisionExpert e(f.demo.cloud, f.gripper, 100.0);
    Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        const Grasp h{random_pose(rng, 0.04), HandConfig::Constant(1, 0.11 * rng.uniform())};
        const auto links = fk(f.gripper, h);
        double total = 0.0, worst = 0.0;
        for (std::size_t i = 0; i < f.gripper.links.size(); ++i) {
            if (!f.gripper.links[i].geometry) continue;
            const Pose inv = pose_inverse(links[i]);
            for (const auto& p : f.demo.cloud.items) {
                const double d = f.gripper.links[i].geometry->penetration(inv.transform(p.position()));
                total += d;
                worst = std::max(worst, d);
            }
        }
        EXPECT_NEAR(e.penetration(links), total, 1e-9 * std::max(1.0, total));
        EXPECT_NEAR(e.max_penetration(links), worst, 1e-12);
        EXPECT_NEAR(e.log_score(h, links), -100.0 * total, 1e-7 * std::max(1.0, total));
    }
}

TEST(CollisionExpert, CappedScoreStaysBelowFloor) {
    const Fixture& f = fixture();
    const CollisionExpert e(f.demo.cloud, f.gripper, 100.0);
    const Grasp h{Pose::identity(), HandConfig::Constant(1, 0.02)};
    const auto links = fk(f.gripper, h);
    const double full = e.log_score(h, links);
    ASSERT_LT(full, -1.0);
    EXPECT_LT(e.log_score_above(h, links, -1.0), -1.0);
    EXPECT_EQ(e.log_score_above(h, links, full - 1.0), full);
}

TEST(KinematicExpert, JointLimitBoundary) {
    const GripperModel g = default_gripper();
    const KinematicExpert e(g, Workspace{});
    const Grasp inside{Pose::identity(), HandConfig::Constant(1, 0.11)};
    const Grasp outside{Pose::identity(), HandConfig::Constant(1, 0.11 + 1e-9)};
    EXPECT_EQ(e.log_score(inside, {}), 0.0);
    EXPECT_EQ(e.log_score(outside, {}), kNegInf);
    EXPECT_EQ(e.log_score({Pose::translation({1.5, 0.0, 0.0}), HandConfig::Constant(1, 0.05)}, {}), kNegInf);
    Workspace cone;
    cone.cone_axis = Eigen::Vector3d::UnitZ();
    cone.cone_angle = 0.5;
    const KinematicExpert c(g, cone);
    EXPECT_EQ(c.log_score(inside, {}), 0.0);
    EXPECT_EQ(c.log_score({{Eigen::Vector3d::Zero(), Quat::from_axis_angle(Eigen::Vector3d::UnitX(), 0.6)}, inside.h_c}, {}),
              kNegInf);
}

TEST(KinematicExpert, RejectionRemovesExactlyOutOfBound) {
    const Fixture& f = fixture();
    const GraspObjective objective(f.gripper, f.bundle.hand, {}, {std::make_shared<KinematicExpert>(f.gripper, Workspace{})});
    Rng rng(10);
    int rejected = 0;
    for (int i = 0; i < 500; ++i) {
        GraspCandidate h = candidate_at(random_pose(rng, 0.6), -0.02 + 0.15 * rng.uniform());
        objective.evaluate(h);
        const bool out = !f.gripper.within_limits(h.h_c) || (h.h_w.p.array().abs() > 1.0).any();
        EXPECT_EQ(objective.rejected_by_hard_expert(h), out);
        EXPECT_EQ(h.total == kNegInf, out);
        rejected += out;
    }
    EXPECT_GT(rejected, 50);
}

TEST(AxisAlignExpert, AntiAlignedAndRollInvariant) {
    const GripperModel g = default_gripper();
    const AxisAlignExpert e(g, Eigen::Vector3d::UnitZ(), 5.0);
    const Grasp down{{Eigen::Vector3d::Zero(), Quat::from_axis_angle(Eigen::Vector3d::UnitX(), M_PI)},
                     HandConfig::Constant(1, 0.05)};
    EXPECT_NEAR(e.log_score(down, {}), -10.0, 1e-12);
    EXPECT_NEAR(e.log_score({Pose::identity(), down.h_c}, {}), 0.0, 1e-15);
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
        const Grasp h{random_pose(rng, 0.1), down.h_c};
        const Grasp rolled{{h.h_w.p, h.h_w.q * Quat::from_axis_angle(g.approach_axis, 6.0 * rng.uniform())}, h.h_c};
        EXPECT_NEAR(e.log_score(h, {}), e.log_score(rolled, {}), 1e-12);
        EXPECT_LE(e.log_score(h, {}), 0.0);
    }
    EXPECT_THROW(AxisAlignExpert(g, Eigen::Vector3d::Zero(), 1.0), Error);
}

TEST(ExpertSpec, ParseRoundTrip) {
    for (const char* text : {"collision", "collision:50", "kinematic:-1,-1,-1,1,1,1", "axis:0,0,1:5"}) {
        const ExpertSpec s = parse_expert(text);
        EXPECT_EQ(to_string(parse_expert(to_string(s))), to_string(s)) << text;
    }
    EXPECT_EQ(parse_expert("collision:50").lambda, 50.0);
    EXPECT_EQ(parse_expert("axis:0,0,1:5").kappa, 5.0);
    EXPECT_THROW(parse_expert("friction"), Error);
    EXPECT_THROW(parse_expert("axis:0,0"), Error);
}

TEST(GraspObjective, TotalIsSumOfLogFactors) {
    const Fixture& f = fixture();
    std::vector<QueryDensity> qs;
    for (const auto& m : f.bundle.contacts) {
        qs.push_back(build_query_density(f.demo.cloud, m, f.gripper.link_index(m.link_id()), small_query(), 12));
    }
    std::vector<ExpertSpec> specs = default_experts();
    specs.push_back(parse_expert("axis:0,1,0:2"));
    const auto experts = make_experts(specs, f.demo.cloud, f.gripper);
    const GraspObjective objective(f.gripper, f.bundle.hand, qs, experts);
    Rng rng(13);
    int finite = 0;
    for (int i = 0; i < 100; ++i) {
        GraspCandidate h = sample_grasp(qs, f.bundle.hand, f.gripper, rng);
        const double total = objective.evaluate(h);
        if (total == kNegInf) continue;
        ++finite;
        double sum = 0.0;
        for (const auto& [name, s] : h.scores) sum += s;
        EXPECT_EQ(total, sum);
        // Independent product of factors.
        const auto links = fk(f.gripper, h.grasp());
        double product = std::exp(hand_config_logpdf(f.bundle.hand, h.h_c));
        for (const auto& q : qs) product *= std::exp(q.log_likelihood(links[static_cast<std::size_t>(q.link())]));
        for (const auto& e : experts) product *= e->value(h.grasp(), links);
        EXPECT_NEAR(std::log(product), total, 1e-9 * std::max(1.0, std::abs(total)));
        EXPECT_EQ(*objective.evaluate_above(h, total - 1.0), total);
    }
    EXPECT_GT(finite, 20);
}

TEST(GraspObjective, EarlyStopOnlyBelowFloor) {
    const Fixture& f = fixture();
    std::vector<QueryDensity> qs;
    for (const auto& m : f.bundle.contacts) {
        qs.push_back(build_query_density(f.demo.cloud, m, f.gripper.link_index(m.link_id()), small_query(), 14));
    }
    const GraspObjective objective(f.gripper, f.bundle.hand, qs, make_experts(default_experts(), f.demo.cloud, f.gripper));
    Rng rng(15);
    for (int i = 0; i < 100; ++i) {
        GraspCandidate h = sample_grasp(qs, f.bundle.hand, f.gripper, rng);
        const double total = objective.evaluate(h);
        if (total == kNegInf) continue;
        const double floor = total + (rng.uniform() - 0.5) * 20.0;
        GraspCandidate copy = h;
        const auto v = objective.evaluate_above(copy, floor);
        EXPECT_EQ(v.has_value(), total >= floor);
    }
}

TEST(Rank, StableDescendingWithNegInfLast) {
    std::vector<GraspCandidate> c(6);
    const double totals[] = {1.0, kNegInf, 3.0, 1.0, std::nan(""), -2.0};
    for (std::size_t i = 0; i < 6; ++i) {
        c[i].total = totals[i];
        c[i].index = i;
    }
    const auto r = rank(c);
    const std::size_t expected[] = {2, 0, 3, 5, 1, 4};
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(r[i].index, expected[i]);
}

TEST(Rank, InvariantToConstantShift) {
    Rng rng(16);
    std::vector<GraspCandidate> c(50);
    for (std::size_t i = 0; i < c.size(); ++i) {
        c[i].total = i % 7 == 0 ? kNegInf : std::round(10.0 * rng.normal());
        c[i].index = i;
    }
    std::vector<GraspCandidate> shifted = c;
    for (auto& h : shifted) h.total += 123.0;
    const auto a = rank(c), b = rank(shifted);
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(a[i].index, b[i].index);
}

TEST(Anneal, QuadraticSurrogateConverges) {
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        auto f = [](double x, double) { return -50.0 * (x - 1.0) * (x - 1.0); };
        auto propose = [](double x, double temperature, Rng& r) { return x + 0.5 * temperature * r.normal(); };
        const auto [best, fbest] = anneal_generic(-2.0, f(-2.0, 0.0), f, propose, 300, 1.0, rng);
        EXPECT_EQ(fbest, f(best, 0.0));
        EXPECT_GE(fbest, f(-2.0, 0.0));
        hits += std::abs(best - 1.0) < 0.05;
    }
    EXPECT_GE(hits, 95);
}

TEST(Anneal, ZeroTemperatureIsGreedy) {
    Rng rng(17);
    auto f = [](double x, double) { return -x * x; };
    auto propose = [](double x, double, Rng& r) { return x + r.normal(); };
    const auto [best, fbest] = anneal_generic(3.0, -9.0, f, propose, 200, 0.0, rng);
    EXPECT_GE(fbest, -9.0);
    EXPECT_LT(std::abs(best), 0.5);
}

TEST(Anneal, NeverWorseThanStartAndRejectsInvalidStart) {
    const Fixture& f = fixture();
    std::vector<QueryDensity> qs;
    for (const auto& m : f.bundle.contacts) {
        qs.push_back(build_query_density(f.demo.cloud, m, f.gripper.link_index(m.link_id()), small_query(), 18));
    }
    const GraspObjective objective(f.gripper, f.bundle.hand, qs, make_experts(default_experts(), f.demo.cloud, f.gripper));
    Rng rng(19);
    AnnealOptions options;
    options.iters = 30;
    int checked = 0;
    for (int i = 0; i < 40 && checked < 5; ++i) {
        GraspCandidate h = sample_grasp(qs, f.bundle.hand, f.gripper, rng);
        if (objective.evaluate(h) == kNegInf) continue;
        ++checked;
        const GraspCandidate refined = anneal(h, objective, options, 20 + i);
        EXPECT_GE(refined.total, h.total);
        GraspCandidate again = refined;
        EXPECT_EQ(objective.evaluate(again), refined.total);
    }
    EXPECT_EQ(checked, 5);
    GraspCandidate bad = candidate_at(Pose::identity(), 0.5);
    try {
        anneal(bad, objective, options, 1);
        FAIL() << "expected InvalidStart";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidStart);
    }
}

TEST(Synthesize, DeterministicAcrossJobs) {
    const Fixture& f = fixture();
    SynthesisOptions o = small_synthesis();
    const auto a = synthesize(f.bundle, f.gripper, f.demo.cloud, default_experts(), o);
    o.jobs = 4;
    const auto b = synthesize(f.bundle, f.gripper, f.demo.cloud, default_experts(), o);
    EXPECT_EQ(grasps_to_json(a.ranked, {}).dump(), grasps_to_json(b.ranked, {}).dump());
    EXPECT_EQ(a.ranked.size(), o.n_candidates);
    EXPECT_EQ(a.ranked_initial.size(), o.n_candidates);
    o.seed = 12;
    const auto c = synthesize(f.bundle, f.gripper, f.demo.cloud, default_experts(), o);
    EXPECT_NE(grasps_to_json(a.ranked, {}).dump(), grasps_to_json(c.ranked, {}).dump());
}

TEST(Synthesize, TwoHundredRankedCandidates) {
    const Fixture& f = fixture();
    SynthesisOptions o = small_synthesis();
    o.n_candidates = 200;
    o.optimize = false;
    const auto r = synthesize(f.bundle, f.gripper, f.demo.cloud, default_experts(), o);
    ASSERT_EQ(r.ranked.size(), 200u);
    for (std::size_t i = 1; i < r.ranked.size(); ++i) EXPECT_GE(r.ranked[i - 1].total, r.ranked[i].total);
    EXPECT_TRUE(std::isfinite(r.ranked.front().total));
    EXPECT_GT(r.timings.total(), 0.0);
}

TEST(Synthesize, RefinementDoesNotLowerTopScores) {
    const Fixture& f = fixture();
    const auto r = synthesize(f.bundle, f.gripper, f.demo.cloud, default_experts(), small_synthesis());
    EXPECT_GE(r.ranked.front().total, r.ranked_initial.front().total);
}

TEST(Synthesize, GripperMismatch) {
    const Fixture& f = fixture();
    GripperModel other = f.gripper;
    other.name = "other";
    EXPECT_THROW(synthesize(f.bundle, other, f.demo.cloud, default_experts(), small_synthesis()), Error);
}

TEST(GraspsJson, NegInfIsNull) {
    GraspCandidate h = candidate_at(Pose::identity(), 0.05);
    h.total = kNegInf;
    h.scores = {{"kinematic", kNegInf}};
    const auto j = grasps_to_json({h}, {{"seed", 0}});
    EXPECT_TRUE(j["grasps"][0]["total"].is_null());
    EXPECT_TRUE(j["grasps"][0]["scores"]["kinematic"].is_null());
}
