#include <cmath>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "graspsynth/error.hpp"
#include "graspsynth/eval.hpp"

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

Pose random_pose(Rng& rng) {
    return {0.3 * Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()),
            Quat::from_coeffs(rng.normal(), rng.normal(), rng.normal(), rng.normal())};
}

// Small patch of object points on the pad plane of `finger`, with the
// surface normal given in the pad frame.
void add_patch(AugmentedCloud& o, const Pose& finger, const Eigen::Vector3d& normal_local) {
    const Eigen::Vector3d z = finger.q.rotate(normal_local.normalized());
    const Eigen::Vector3d x = z.unitOrthogonal();
    Eigen::Matrix3d r;
    r << x, z.cross(x), z;
    for (int i = -3; i <= 3; ++i) {
        for (int j = -2; j <= 2; ++j) {
            const Eigen::Vector3d p = finger.transform({0.004 * i, 0.003 * j, 0.001});
            o.items.push_back({{p, Quat::from_matrix(r)}, {0.0, 0.0}});
        }
    }
}

SynthesisOptions small_synthesis() {
    SynthesisOptions o;
    o.query.n_samples = 150;
    o.n_candidates = 40;
    o.top_m = 2;
    o.anneal.iters = 15;
    return o;
}

}  // namespace

TEST(Proxy, DemonstratedGraspSucceeds) {
    const Fixture& f = fixture();
    const ProxyReport r = antipodal_check({f.demo.snapshot.h_w, f.demo.snapshot.h_g}, f.gripper, f.demo.cloud);
    EXPECT_TRUE(r.success) << r.reason;
    EXPECT_GT(r.left_contacts, 0u);
    EXPECT_GT(r.right_contacts, 0u);
    EXPECT_LT(r.opposition_deg, 5.0);
}

TEST(Proxy, FreeSpaceFails) {
    const Fixture& f = fixture();
    const Pose far = Pose::translation({0.0, -0.5, 0.0}) * f.demo.snapshot.h_w;
    const ProxyReport r = antipodal_check({far, f.demo.snapshot.h_g}, f.gripper, f.demo.cloud);
    EXPECT_FALSE(r.success);
    EXPECT_EQ(r.left_contacts + r.right_contacts, 0u);
}

TEST(Proxy, SyntheticFaceToFace) {
    const GripperModel g = default_gripper();
    const Grasp h{Pose::identity(), HandConfig::Constant(1, 0.05)};
    const auto links = fk(g, h);
    AugmentedCloud o;
    add_patch(o, links[1], Eigen::Vector3d::UnitZ());
    add_patch(o, links[2], Eigen::Vector3d::UnitZ());
    EXPECT_TRUE(antipodal_check(h, g, o).success);
}

TEST(Proxy, PerpendicularFacesFail) {
    const GripperModel g = default_gripper();
    const Grasp h{Pose::identity(), HandConfig::Constant(1, 0.05)};
    const auto links = fk(g, h);
    AugmentedCloud o;
    add_patch(o, links[1], Eigen::Vector3d::UnitZ());
    add_patch(o, links[2], Eigen::Vector3d::UnitX());
    const ProxyReport r = antipodal_check(h, g, o);
    EXPECT_FALSE(r.success);
    EXPECT_NEAR(r.opposition_deg, 90.0, 1e-6);
}

TEST(Proxy, InwardNormalsFail) {
    const GripperModel g = default_gripper();
    const Grasp h{Pose::identity(), HandConfig::Constant(1, 0.05)};
    const auto links = fk(g, h);
    AugmentedCloud o;
    add_patch(o, links[1], -Eigen::Vector3d::UnitZ());
    add_patch(o, links[2], -Eigen::Vector3d::UnitZ());
    EXPECT_FALSE(antipodal_check(h, g, o).success);
}

TEST(Proxy, PenetratingGraspFails) {
    const Fixture& f = fixture();
    const ProxyReport r = antipodal_check({f.demo.snapshot.h_w, HandConfig::Constant(1, 0.03)}, f.gripper, f.demo.cloud);
    EXPECT_FALSE(r.success);
}

TEST(Proxy, RigidInvariant) {
    const Fixture& f = fixture();
    Rng rng(1);
    for (int t = 0; t < 5; ++t) {
        const Pose tf = random_pose(rng);
        AugmentedCloud moved = f.demo.cloud;
        for (auto& p : moved.items) p.v = tf * p.v;
        for (double w : {0.03, 0.05, 0.08}) {
            const Grasp h{f.demo.snapshot.h_w, HandConfig::Constant(1, w)};
            const ProxyReport a = antipodal_check(h, f.gripper, f.demo.cloud);
            const ProxyReport b = antipodal_check({tf * h.h_w, h.h_c}, f.gripper, moved);
            EXPECT_EQ(a.success, b.success);
            EXPECT_EQ(a.left_contacts, b.left_contacts);
            EXPECT_EQ(a.right_contacts, b.right_contacts);
        }
    }
}

TEST(Proxy, NeedsParallelJaw) {
    GripperModel g = default_gripper();
    g.parallel_jaw.reset();
    try {
        antipodal_check({Pose::identity(), HandConfig::Constant(1, 0.05)}, g, fixture().demo.cloud);
        FAIL() << "expected UnsupportedGripper";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnsupportedGripper);
    }
}

TEST(Statistics, IncompleteBetaKnownValues) {
    for (double x : {0.0, 0.1, 0.5, 0.9, 1.0}) EXPECT_NEAR(incomplete_beta(1.0, 1.0, x), x, 1e-12);
    EXPECT_NEAR(incomplete_beta(3.0, 3.0, 0.5), 0.5, 1e-12);
    // I_x(a, 1) = x^a.
    EXPECT_NEAR(incomplete_beta(2.5, 1.0, 0.3), std::pow(0.3, 2.5), 1e-12);
    EXPECT_NEAR(incomplete_beta(2.0, 5.0, 0.2) + incomplete_beta(5.0, 2.0, 0.8), 1.0, 1e-12);
}

TEST(Statistics, StudentTCdf) {
    EXPECT_NEAR(student_t_cdf(0.0, 5.0), 0.5, 1e-15);
    // df = 1 is Cauchy.
    EXPECT_NEAR(student_t_cdf(1.0, 1.0), 0.75, 1e-12);
    EXPECT_NEAR(student_t_cdf(-2.0, 3.0) + student_t_cdf(2.0, 3.0), 1.0, 1e-12);
    // df = 2 closed form.
    EXPECT_NEAR(student_t_cdf(1.5, 2.0), 0.5 + 1.5 / (2.0 * std::sqrt(2.0 + 1.5 * 1.5)), 1e-12);
}

TEST(Statistics, PairedTTestExample) {
    const std::vector<double> a{2, 4, 6}, b{1, 2, 3};
    const TTestResult r = paired_t_test(a, b);
    EXPECT_NEAR(r.t, 2.0 * std::sqrt(3.0), 1e-12);
    EXPECT_NEAR(r.t, 3.464, 5e-4);
    EXPECT_EQ(r.df, 2);
    EXPECT_NEAR(r.p_two_tailed, 0.0742, 5e-5);
    EXPECT_NEAR(r.mean_diff, 2.0, 1e-15);
}

TEST(Statistics, PairedTTestSymmetry) {
    Rng rng(2);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> a(8), b(8);
        for (int i = 0; i < 8; ++i) {
            a[i] = rng.normal();
            b[i] = rng.normal();
        }
        const TTestResult ab = paired_t_test(a, b), ba = paired_t_test(b, a);
        EXPECT_NEAR(ab.t, -ba.t, 1e-12);
        EXPECT_NEAR(ab.p_two_tailed, ba.p_two_tailed, 1e-12);
        EXPECT_GE(ab.p_two_tailed, 0.0);
        EXPECT_LE(ab.p_two_tailed, 1.0);
    }
}

TEST(Statistics, PairedTTestDegenerate) {
    const std::vector<double> a{0.5, 0.7, 0.9};
    EXPECT_EQ(paired_t_test(a, a).p_two_tailed, 1.0);
    const std::vector<double> b{0.4, 0.6, 0.8};
    try {
        paired_t_test(a, b);
        FAIL() << "expected DegenerateVariance";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateVariance);
    }
    EXPECT_THROW(paired_t_test(std::vector<double>{1.0}, std::vector<double>{2.0}), Error);
    EXPECT_THROW(paired_t_test(a, std::vector<double>{1.0, 2.0}), Error);
}

TEST(Corpus, DeterministicAndDistinct) {
    const auto a = generate_corpus(20, 7), b = generate_corpus(20, 7);
    ASSERT_EQ(a.size(), 20u);
    EXPECT_EQ(objects_to_json(a).dump(), objects_to_json(b).dump());
    EXPECT_NE(objects_to_json(a).dump(), objects_to_json(generate_corpus(20, 8)).dump());
    std::set<std::string> ids;
    for (const auto& o : a) ids.insert(o.id);
    EXPECT_EQ(ids.size(), 20u);
    EXPECT_EQ(objects_to_json(objects_from_json(objects_to_json(a))).dump(), objects_to_json(a).dump());
}

TEST(Corpus, AcquisitionDeterministic) {
    const auto corpus = generate_corpus(2, 7);
    const AugmentedCloud a = acquire_object(corpus[0], true, 3), b = acquire_object(corpus[0], true, 3);
    ASSERT_EQ(a.size(), b.size());
    ASSERT_GT(a.size(), 100u);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a.items[i].position(), b.items[i].position());
}

TEST(Conditions, Flags) {
    EXPECT_FALSE(condition_noise(Condition::A));
    EXPECT_TRUE(condition_noise(Condition::B));
    EXPECT_FALSE(condition_noise(Condition::C));
    EXPECT_TRUE(condition_noise(Condition::D));
    EXPECT_TRUE(condition_optimize(Condition::A));
    EXPECT_TRUE(condition_optimize(Condition::B));
    EXPECT_FALSE(condition_optimize(Condition::C));
    EXPECT_FALSE(condition_optimize(Condition::D));
    for (Condition c : {Condition::A, Condition::B, Condition::C, Condition::D}) {
        EXPECT_EQ(parse_condition(to_string(c)), c);
    }
    EXPECT_THROW(parse_condition("E"), Error);
}

TEST(Benchmark, TimingsPositive) {
    const Fixture& f = fixture();
    BenchmarkOptions o;
    o.synthesis = small_synthesis();
    o.probe_evaluations = 500;
    const BenchmarkResult r = run_benchmark(f.demo.cloud, f.bundle, f.gripper, o, "box");
    EXPECT_GT(r.kde.timings.total(), 0.0);
    EXPECT_GT(r.gmm.timings.total(), 0.0);
    EXPECT_GT(r.kde_eval_n, 0.0);
    EXPECT_GT(r.kde_eval_2n, 0.0);
    EXPECT_EQ(r.kde.method, QueryMethod::Kde);
    EXPECT_EQ(r.gmm.method, QueryMethod::Gmm);
    const std::string csv = benchmark_csv({r});
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);  // header, kde, gmm
}

class Campaign : public ::testing::Test {
protected:
    static CampaignOptions options() {
        CampaignOptions o;
        o.conditions = {Condition::A, Condition::C};
        o.repeats = 2;
        o.seed = 5;
        o.synthesis = small_synthesis();
        return o;
    }
    static const CampaignReport& report() {
        static const CampaignReport r = run_campaign(generate_corpus(3, 7), fixture().bundle, fixture().gripper, options());
        return r;
    }
};

TEST_F(Campaign, RecordCountAndOrder) {
    const CampaignReport& r = report();
    EXPECT_EQ(r.records.size(), 3u * 2 * 2 * 2);
    EXPECT_EQ(r.object_count, 3u);
    EXPECT_EQ(r.repeats, 2);
    EXPECT_EQ(r.records[0].condition, Condition::A);
    EXPECT_EQ(r.records[0].method, QueryMethod::Gmm);
    EXPECT_EQ(r.records[1].repeat, 1);
}

TEST_F(Campaign, RatesUseObjectCountAsDenominator) {
    const CampaignReport& r = report();
    ASSERT_EQ(r.summaries.size(), 2u);
    for (const auto& s : r.summaries) {
        for (std::size_t m = 0; m < r.methods.size(); ++m) {
            double mean = 0.0;
            for (int rep = 0; rep < r.repeats; ++rep) {
                int successes = 0;
                for (const auto& rec : r.records) {
                    successes += rec.condition == s.condition && rec.method == r.methods[m] && rec.repeat == rep && rec.success;
                }
                EXPECT_DOUBLE_EQ(s.per_repeat[m][static_cast<std::size_t>(rep)], successes / 3.0);
                mean += successes / 3.0;
            }
            EXPECT_DOUBLE_EQ(s.mean[m], mean / r.repeats);
        }
        EXPECT_TRUE(s.t_test.has_value() || !s.t_test_note.empty());
    }
}

TEST_F(Campaign, RefinementNeverLowersBestScore) {
    const CampaignReport& r = report();
    for (const auto& a : r.records) {
        if (a.condition != Condition::A) continue;
        for (const auto& c : r.records) {
            if (c.condition == Condition::C && c.object_id == a.object_id && c.method == a.method && c.repeat == a.repeat) {
                EXPECT_EQ(c.seed, a.seed);
                EXPECT_GE(a.best_total, c.best_total);
            }
        }
    }
}

TEST_F(Campaign, DeterministicAcrossJobs) {
    CampaignOptions o = options();
    o.jobs = 3;
    const CampaignReport again = run_campaign(generate_corpus(3, 7), fixture().bundle, fixture().gripper, o);
    ASSERT_EQ(again.records.size(), report().records.size());
    for (std::size_t i = 0; i < again.records.size(); ++i) {
        const TrialRecord &a = again.records[i], &b = report().records[i];
        EXPECT_EQ(a.object_id, b.object_id);
        EXPECT_EQ(a.seed, b.seed);
        EXPECT_EQ(a.success, b.success);
        EXPECT_EQ(a.best_total, b.best_total);
    }
    EXPECT_EQ(campaign_summary_json(again).dump(), campaign_summary_json(report()).dump());
    EXPECT_FALSE(campaign_text(report()).empty());
}
