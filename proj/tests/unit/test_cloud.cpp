#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "graspsynth/cloud.hpp"
#include "graspsynth/error.hpp"

using namespace graspsynth;

namespace {

PointCloud plane_grid(int n, double spacing) {
    PointCloud c;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) c.points.emplace_back(i * spacing, j * spacing, 0.0);
    }
    return c;
}

PointCloud cylinder_shell(double radius, double height, int rings, int per_ring) {
    PointCloud c;
    for (int h = 0; h < rings; ++h) {
        const double z = -0.5 * height + height * h / (rings - 1);
        for (int a = 0; a < per_ring; ++a) {
            const double t = 2 * std::numbers::pi * (a + 0.5 * (h % 2)) / per_ring;
            c.points.emplace_back(radius * std::cos(t), radius * std::sin(t), z);
        }
    }
    return c;
}

CameraIntrinsics small_camera() {
    CameraIntrinsics k;
    k.width = 11;
    k.height = 11;
    k.fx = k.fy = 20.0;
    k.cx = k.cy = 5.0;
    return k;
}

DepthImage constant_image(int w, int h, double z) {
    DepthImage img;
    img.intrinsics.width = w;
    img.intrinsics.height = h;
    img.intrinsics.cx = (w - 1) / 2.0;
    img.intrinsics.cy = (h - 1) / 2.0;
    img.z.assign(static_cast<std::size_t>(w) * h, z);
    return img;
}

double triple_product(const Pose& v) {
    const Eigen::Matrix3d r = v.q.matrix();
    return r.col(0).cross(r.col(1)).dot(r.col(2));
}

}  // namespace

TEST(EstimateFrames, PlaneHasZeroCurvature) {
    const AugmentedCloud o = estimate_frames(plane_grid(20, 0.002), 0.006);
    ASSERT_FALSE(o.empty());
    for (const auto& a : o.items) {
        EXPECT_NEAR(std::abs(a.normal().z()), 1.0, 1e-9);
        EXPECT_LT(a.r[0], 1e-6);
        EXPECT_LT(a.r[1], 1e-6);
    }
}

TEST(EstimateFrames, CylinderCurvatureIsInverseRadius) {
    const double radius = 0.04;
    const AugmentedCloud o = estimate_frames(cylinder_shell(radius, 0.12, 61, 126), 0.01);
    int checked = 0;
    for (const auto& a : o.items) {
        if (std::abs(a.position().z()) > 0.04) continue;
        ++checked;
        EXPECT_NEAR(a.r[0], 1.0 / radius, 0.15 / radius);
        EXPECT_LT(a.r[1], 0.15 / radius);
        EXPECT_GE(a.r[0], a.r[1]);
        const Eigen::Vector2d radial = a.position().head<2>().normalized();
        EXPECT_GT(a.normal().head<2>().dot(radial), 0.99);
    }
    EXPECT_GT(checked, 1000);
}

TEST(EstimateFrames, FramesAreRightHandedOrthonormal) {
    Rng rng(1);
    PrimitiveSpec s;
    s.shape = Shape::Box;
    s.extents = {0.05, 0.06, 0.1};
    s.density = 2e5;
    const AugmentedCloud o = estimate_frames(make_primitive(s, rng), 0.01);
    for (const auto& a : o.items) {
        EXPECT_NEAR(a.v.q.norm(), 1.0, 1e-9);
        EXPECT_NEAR(triple_product(a.v), 1.0, 1e-6);
        EXPECT_GE(a.r[0], a.r[1]);
        EXPECT_GE(a.r[1], 0.0);
    }
}

TEST(EstimateFrames, XAxisSignIsCanonical) {
    const AugmentedCloud o = estimate_frames(cylinder_shell(0.04, 0.12, 61, 126), 0.01);
    for (const auto& a : o.items) {
        if (a.r[0] - a.r[1] < 1.0) continue;
        const Eigen::Vector3d x = a.v.q.matrix().col(0);
        const bool positive = x.x() > 1e-9 || (std::abs(x.x()) <= 1e-9 && (x.y() > 1e-9 || (std::abs(x.y()) <= 1e-9 && x.z() >= 0)));
        EXPECT_TRUE(positive);
    }
}

TEST(EstimateFrames, NormalsPointOutward) {
    Rng rng(2);
    PrimitiveSpec s;
    s.shape = Shape::Sphere;
    s.extents = {0.05, 0, 0};
    s.density = 2e5;
    for (const auto& a : estimate_frames(make_primitive(s, rng), 0.01).items) {
        EXPECT_GT(a.normal().dot(a.position().normalized()), 0.95);
    }
}

TEST(EstimateFrames, NormalsFaceTheRecordingCamera) {
    PointCloud c = plane_grid(15, 0.002);
    c.sensor_origins = {Eigen::Vector3d(0.01, 0.01, -1.0)};
    c.viewpoint.assign(c.size(), 0);
    for (const auto& a : estimate_frames(c, 0.006).items) EXPECT_NEAR(a.normal().z(), -1.0, 1e-9);
}

TEST(EstimateFrames, TranslationEquivariant) {
    const PointCloud base = cylinder_shell(0.04, 0.12, 31, 90);
    PointCloud moved = base;
    const Eigen::Vector3d t(0.3, -0.2, 0.5);
    for (auto& p : moved.points) p += t;
    const AugmentedCloud a = estimate_frames(base, 0.01);
    const AugmentedCloud b = estimate_frames(moved, 0.01);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_LT((b.items[i].position() - a.items[i].position() - t).norm(), 1e-6);
        EXPECT_LT(rotation_angle_between(a.items[i].v.q, b.items[i].v.q), 1e-4);
        EXPECT_LT((a.items[i].r - b.items[i].r).norm(), 1e-6);
    }
}

// Under rotation the normals and curvatures follow the cloud; the k1 axis
// follows up to the sign fixed by the world-axis convention.
TEST(EstimateFrames, RotationEquivariantUpToAxisSign) {
    const PointCloud base = cylinder_shell(0.04, 0.12, 31, 90);
    const Pose g{Eigen::Vector3d(0.1, 0.2, 0.3), Quat::from_axis_angle(Eigen::Vector3d(1, 2, 3), 0.7)};
    PointCloud moved = base;
    for (auto& p : moved.points) p = g.transform(p);
    const AugmentedCloud a = estimate_frames(base, 0.01);
    const AugmentedCloud b = estimate_frames(moved, 0.01);
    ASSERT_EQ(a.size(), b.size());
    const Eigen::Matrix3d r = g.q.matrix();
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_LT((b.items[i].position() - g.transform(a.items[i].position())).norm(), 1e-6);
        EXPECT_LT((b.items[i].normal() - r * a.items[i].normal()).norm(), 1e-4);
        EXPECT_LT((a.items[i].r - b.items[i].r).norm(), 1e-6 * std::max(1.0, a.items[i].r.norm()));
        if (a.items[i].r[0] - a.items[i].r[1] > 5.0) {
            const Eigen::Vector3d xa = r * a.items[i].v.q.matrix().col(0);
            const Eigen::Vector3d xb = b.items[i].v.q.matrix().col(0);
            EXPECT_GT(std::abs(xa.dot(xb)), 1.0 - 1e-4);
        }
    }
}

TEST(EstimateFrames, CurvatureInvariantToReordering) {
    const PointCloud base = cylinder_shell(0.04, 0.12, 31, 90);
    PointCloud shuffled = base;
    std::vector<std::size_t> perm(base.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = (i * 7919) % perm.size();
    std::sort(perm.begin(), perm.end());
    perm.erase(std::unique(perm.begin(), perm.end()), perm.end());
    ASSERT_EQ(perm.size(), base.size());
    Rng rng(3);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < perm.size(); ++i) shuffled.points[i] = base.points[perm[i]];
    const AugmentedCloud a = estimate_frames(base, 0.01);
    const AugmentedCloud b = estimate_frames(shuffled, 0.01);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const auto it = std::find_if(a.items.begin(), a.items.end(), [&](const AugmentedPoint& p) {
            return p.position() == b.items[i].position();
        });
        ASSERT_NE(it, a.items.end());
        EXPECT_LT((it->r - b.items[i].r).norm(), 1e-6);
    }
}

TEST(EstimateFrames, Errors) {
    EXPECT_THROW(estimate_frames(plane_grid(2, 0.01), 0.01), Error);
    EXPECT_THROW(estimate_frames(plane_grid(10, 0.01), 0.0), Error);
    try {
        estimate_frames(plane_grid(10, 0.1), 0.01);
        FAIL() << "expected EmptyResult";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::EmptyResult);
    }
}

TEST(SampleSurface, SinglePoint) {
    AugmentedCloud o;
    o.items.push_back({Pose::translation({1, 2, 3}), {4, 5}});
    Rng rng(4);
    EXPECT_EQ(sample_surface(o, rng).position(), Eigen::Vector3d(1, 2, 3));
}

TEST(SampleSurface, UniformAndReproducible) {
    AugmentedCloud o;
    for (int i = 0; i < 100; ++i) o.items.push_back({Pose::translation({double(i), 0, 0}), {0, 0}});
    Rng rng(5), again(5);
    std::vector<int> counts(100, 0);
    for (int i = 0; i < 10000; ++i) {
        const auto& a = sample_surface(o, rng);
        EXPECT_EQ(&a, &sample_surface(o, again));
        ++counts[static_cast<std::size_t>(a.position().x())];
    }
    for (int c : counts) {
        EXPECT_GE(c / 10000.0, 0.005);
        EXPECT_LE(c / 10000.0, 0.015);
    }
}

TEST(MakePrimitive, BoxCountFollowsArea) {
    PrimitiveSpec s;
    s.shape = Shape::Box;
    s.extents = {1, 1, 1};
    s.density = 1e4;
    Rng rng(6);
    const PointCloud c = make_primitive(s, rng);
    EXPECT_NEAR(static_cast<double>(c.size()), 6e4, 0.05 * 6e4);
    EXPECT_NEAR(s.surface_area(), 6.0, 1e-12);
}

TEST(MakePrimitive, SphereOnSurface) {
    PrimitiveSpec s;
    s.shape = Shape::Sphere;
    s.extents = {0.3, 0, 0};
    s.density = 1e4;
    s.pose = Pose::translation({1, 2, 3});
    Rng rng(7);
    for (const auto& p : make_primitive(s, rng).points) EXPECT_NEAR((p - s.pose.p).norm(), 0.3, 1e-12);
}

TEST(MakePrimitive, CylinderCapsAtHalfHeight) {
    PrimitiveSpec s;
    s.shape = Shape::Cylinder;
    s.extents = {0.1, 0.4, 0};
    s.density = 1e5;
    Rng rng(8);
    int caps = 0;
    for (const auto& p : make_primitive(s, rng).points) {
        const double rho = p.head<2>().norm();
        if (rho < 0.1 - 1e-9) {
            ++caps;
            EXPECT_NEAR(std::abs(p.z()), 0.2, 1e-12);
        } else {
            EXPECT_NEAR(rho, 0.1, 1e-12);
            EXPECT_LE(std::abs(p.z()), 0.2 + 1e-12);
        }
    }
    EXPECT_GT(caps, 0);
}

TEST(MakePrimitive, Errors) {
    EXPECT_THROW(parse_shape("torus"), Error);
    PrimitiveSpec s;
    s.extents = {1, 0, 1};
    Rng rng(9);
    EXPECT_THROW(make_primitive(s, rng), Error);
}

TEST(SignedDistance, Signs) {
    PrimitiveSpec s;
    s.shape = Shape::Box;
    s.extents = {2, 2, 2};
    EXPECT_NEAR(s.signed_distance({0, 0, 0}), -1.0, 1e-12);
    EXPECT_NEAR(s.signed_distance({2, 0, 0}), 1.0, 1e-12);
}

TEST(MakeObject, DropsBuriedPoints) {
    PrimitiveSpec a, b;
    a.shape = b.shape = Shape::Sphere;
    a.extents = b.extents = {0.1, 0, 0};
    b.pose = Pose::translation({0.1, 0, 0});
    a.density = b.density = 1e5;
    Rng rng(10);
    const std::vector<PrimitiveSpec> parts{a, b};
    for (const auto& p : make_object(parts, rng).points) {
        EXPECT_GE(a.signed_distance(p), -1e-9);
        EXPECT_GE(b.signed_distance(p), -1e-9);
    }
}

TEST(RenderDepth, PointOnOpticalAxis) {
    PointCloud c;
    c.points.emplace_back(0, 0, 1.0);
    const DepthImage img = render_depth(c, small_camera(), Pose::identity(), 0.0);
    EXPECT_EQ(img.at(5, 5), 1.0);
    EXPECT_TRUE(std::isnan(img.at(0, 0)));
}

TEST(RenderDepth, FrontoParallelPlane) {
    PointCloud c;
    for (int i = -100; i <= 100; ++i) {
        for (int j = -100; j <= 100; ++j) c.points.emplace_back(0.002 * i, 0.002 * j, 0.7);
    }
    const DepthImage img = render_depth(c, small_camera(), Pose::identity(), 1.5);
    int covered = 0;
    for (double z : img.z) {
        if (std::isnan(z)) continue;
        ++covered;
        EXPECT_NEAR(z, 0.7, 1e-9);
    }
    EXPECT_EQ(covered, 121);
}

TEST(RenderDepth, NearestWins) {
    PointCloud c;
    c.points.emplace_back(0, 0, 2.0);
    c.points.emplace_back(0, 0, 1.0);
    EXPECT_EQ(render_depth(c, small_camera(), Pose::identity(), 0.0).at(5, 5), 1.0);
}

TEST(RenderDepth, RejectsDegenerateIntrinsics) {
    CameraIntrinsics k = small_camera();
    k.fx = 0.0;
    EXPECT_THROW(render_depth(PointCloud{}, k, Pose::identity(), 1.0), Error);
}

TEST(ApplyNoise, ZeroSigmaIsBitExact) {
    DepthImage img = constant_image(8, 6, 0.5);
    img.z[3] = std::nan("");
    img.z[7] = 0.123456789;
    const DepthImage out = apply_noise(img, 0.0, 0.0, 42);
    ASSERT_EQ(out.z.size(), img.z.size());
    for (std::size_t i = 0; i < img.z.size(); ++i) {
        if (std::isnan(img.z[i])) {
            EXPECT_TRUE(std::isnan(out.z[i]));
        } else {
            EXPECT_EQ(out.z[i], img.z[i]);
        }
    }
}

TEST(ApplyNoise, DepthStdMatchesSigma) {
    const DepthImage img = constant_image(400, 250, 1.0);
    const DepthImage out = apply_noise(img, 1.0, 0.001, 7);
    double sum = 0.0, sum2 = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < out.z.size(); ++i) {
        if (std::isnan(out.z[i])) continue;
        const double d = out.z[i] - 1.0;
        sum += d;
        sum2 += d * d;
        ++n;
    }
    ASSERT_GE(n, 90000);
    const double mean = sum / n;
    EXPECT_NEAR(std::sqrt(sum2 / n - mean * mean), 0.001, 0.05 * 0.001);
}

TEST(ApplyNoise, ShiftOnlyTouchesEdges) {
    DepthImage img = constant_image(40, 40, 1.0);
    for (int v = 0; v < 40; ++v) {
        for (int u = 20; u < 40; ++u) img.z[static_cast<std::size_t>(v) * 40 + u] = 2.0;
    }
    const DepthImage out = apply_noise(img, 1.0, 0.0, 3);
    int changed_edge = 0;
    for (int v = 6; v < 34; ++v) {
        for (int u = 0; u < 40; ++u) {
            const double z = out.at(u, v);
            if (std::isnan(z)) continue;
            if (u >= 6 && u <= 13) EXPECT_NEAR(z, 1.0, 1e-12);
            if (u >= 26 && u <= 33) EXPECT_NEAR(z, 2.0, 1e-12);
            if ((u == 19 || u == 20) && std::abs(z - img.at(u, v)) > 1e-6) ++changed_edge;
        }
    }
    EXPECT_GT(changed_edge, 10);
}

TEST(ApplyNoise, ScheduleIndependentStreams) {
    const DepthImage img = constant_image(30, 20, 1.0);
    const DepthImage a = apply_noise(img, 1.0, 0.001, 5);
    const DepthImage b = apply_noise(img, 1.0, 0.001, 5);
    const DepthImage c = apply_noise(img, 1.0, 0.001, 6);
    for (std::size_t i = 0; i < a.z.size(); ++i) {
        if (std::isnan(a.z[i])) {
            EXPECT_TRUE(std::isnan(b.z[i]));
        } else {
            EXPECT_EQ(a.z[i], b.z[i]);
        }
    }
    EXPECT_NE(a.z[300], c.z[300]);
}

TEST(Unproject, PlaneRoundTrip) {
    PointCloud c;
    for (int i = -150; i <= 150; ++i) {
        for (int j = -150; j <= 150; ++j) c.points.emplace_back(0.3, 0.001 * i, 0.001 * j);
    }
    CameraIntrinsics k = small_camera();
    const Pose cam = look_at({1.0, 0.02, -0.01}, {0.3, 0.0, 0.0}, {0, 0, 1});
    const PointCloud back = unproject(render_depth(c, k, cam, 1.5));
    ASSERT_GT(back.size(), 50u);
    const double footprint = 0.7 / k.fx;
    for (const auto& p : back.points) EXPECT_NEAR(p.x(), 0.3, footprint);
}

TEST(Stitch, IdenticalCloudsDeduplicate) {
    PointCloud c = plane_grid(10, 0.01);
    const std::vector<PointCloud> clouds{c, c};
    EXPECT_EQ(stitch(clouds, 0.002).size(), c.size());
}

TEST(Acquire, TetrahedralRingSeesEveryBoxFace) {
    PrimitiveSpec s;
    s.shape = Shape::Box;
    s.extents = {0.05, 0.06, 0.1};
    const std::vector<PrimitiveSpec> parts{s};
    const PointCloud c = acquire(parts, AcquisitionOptions{});
    std::array<int, 6> faces{};
    for (const auto& p : c.points) {
        for (int a = 0; a < 3; ++a) {
            if (std::abs(std::abs(p[a]) - 0.5 * s.extents[a]) < 1e-6) ++faces[static_cast<std::size_t>(2 * a + (p[a] > 0))];
        }
    }
    for (int f : faces) EXPECT_GT(f, 0);
    ASSERT_TRUE(c.has_viewpoints());
    EXPECT_EQ(c.sensor_origins.size(), 4u);
}

TEST(Acquire, SplattedSurfaceMatchesRaycast) {
    PrimitiveSpec s;
    s.shape = Shape::Sphere;
    s.extents = {0.04, 0, 0};
    s.density = 4e5;
    Rng rng(11);
    const PointCloud surface = make_primitive(s, rng);
    const PointCloud c = acquire(surface, AcquisitionOptions{});
    ASSERT_GT(c.size(), 100u);
    for (const auto& p : c.points) EXPECT_NEAR(p.norm(), 0.04, 0.003);
}
