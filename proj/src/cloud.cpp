#include "graspsynth/cloud.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

#include <Eigen/Eigenvalues>

#include "graspsynth/error.hpp"
#include "graspsynth/spatial_grid.hpp"

namespace graspsynth {

namespace {

constexpr std::size_t kMinNeighbors = 5;
// Curvature gap (1/m) below which the k1 direction is treated as undefined.
constexpr double kUmbilicTolerance = 1.0;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// Any unit vector orthogonal to n, and its complement.
std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const Eigen::Vector3d& n) {
    const Eigen::Vector3d seed = std::abs(n.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    const Eigen::Vector3d t1 = (seed - seed.dot(n) * n).normalized();
    return {t1, n.cross(t1)};
}

// x-axis sign: nonnegative along world +x, ties broken by +y then +z.
Eigen::Vector3d canonical_direction(Eigen::Vector3d x) {
    constexpr double tie = 1e-9;
    for (int axis = 0; axis < 3; ++axis) {
        if (std::abs(x[axis]) > tie) {
            return x[axis] < 0.0 ? Eigen::Vector3d(-x) : x;
        }
    }
    return x;
}

}  // namespace

AugmentedCloud estimate_frames(const PointCloud& cloud, double radius) {
    if (!(radius > 0.0)) {
        fail(ErrorKind::InvalidArgument, "estimate_frames: radius must be positive");
    }
    if (cloud.size() < kMinNeighbors) {
        fail(ErrorKind::InvalidArgument, "estimate_frames: cloud has fewer than 5 points");
    }
    if (cloud.has_viewpoints() && cloud.viewpoint.size() != cloud.size()) {
        fail(ErrorKind::InvalidArgument, "estimate_frames: viewpoint list does not match point count");
    }
    const auto& pts = cloud.points;
    const std::size_t n = pts.size();
    for (const auto& p : pts) {
        if (!p.allFinite()) {
            fail(ErrorKind::InvalidArgument, "estimate_frames: non-finite point");
        }
    }
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto& p : pts) centroid += p;
    centroid /= static_cast<double>(n);

    const SpatialGrid grid(pts, radius);
    std::vector<std::vector<std::size_t>> neighbors(n);
    std::vector<Eigen::Vector3d> normals(n, Eigen::Vector3d::Zero());
    std::vector<char> valid(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        neighbors[i] = grid.within(pts[i], radius);
        if (neighbors[i].size() < kMinNeighbors) {
            continue;
        }
        const auto& nb = neighbors[i];
        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        for (auto j : nb) mean += pts[j];
        mean /= static_cast<double>(nb.size());
        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (auto j : nb) {
            const Eigen::Vector3d d = pts[j] - mean;
            cov += d * d.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
        Eigen::Vector3d normal = eig.eigenvectors().col(0).normalized();
        const Eigen::Vector3d toward = cloud.has_viewpoints()
                                           ? Eigen::Vector3d(cloud.sensor_origins.at(static_cast<std::size_t>(cloud.viewpoint[i])) - pts[i])
                                           : Eigen::Vector3d(pts[i] - centroid);
        if (normal.dot(toward) < 0.0) {
            normal = -normal;
        }
        normals[i] = normal;
        valid[i] = 1;
    }

    AugmentedCloud out;
    out.items.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!valid[i]) {
            continue;
        }
        const Eigen::Vector3d& nrm = normals[i];
        const auto [t1, t2] = tangent_basis(nrm);
        // 2-D tangent coordinates of projected neighbor normals and offsets.
        std::vector<Eigen::Vector2d> dn;
        std::vector<Eigen::Vector2d> dp;
        for (auto j : neighbors[i]) {
            if (!valid[j]) {
                continue;
            }
            const Eigen::Vector3d& m = normals[j];
            const Eigen::Vector3d off = pts[j] - pts[i];
            dn.emplace_back(m.dot(t1), m.dot(t2));
            dp.emplace_back(off.dot(t1), off.dot(t2));
        }
        if (dn.size() < kMinNeighbors) {
            continue;
        }
        const double count = static_cast<double>(dn.size());
        Eigen::Vector2d mean_n = Eigen::Vector2d::Zero();
        Eigen::Vector2d mean_p = Eigen::Vector2d::Zero();
        for (std::size_t k = 0; k < dn.size(); ++k) {
            mean_n += dn[k];
            mean_p += dp[k];
        }
        mean_n /= count;
        mean_p /= count;
        Eigen::Matrix2d cov_n = Eigen::Matrix2d::Zero();
        Eigen::Matrix2d cov_p = Eigen::Matrix2d::Zero();
        for (std::size_t k = 0; k < dn.size(); ++k) {
            const Eigen::Vector2d a = dn[k] - mean_n;
            const Eigen::Vector2d b = dp[k] - mean_p;
            cov_n += a * a.transpose();
            cov_p += b * b.transpose();
        }
        cov_n /= count;
        cov_p /= count;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov_n);
        // Eigenvalues are normal-direction variances; dividing by the spread
        // of tangent offsets along the same axis gives curvature in 1/m.
        std::array<double, 2> k{};
        std::array<Eigen::Vector2d, 2> dir{};
        for (int a = 0; a < 2; ++a) {
            const Eigen::Vector2d e = eig.eigenvectors().col(1 - a);
            const double lambda = std::max(0.0, eig.eigenvalues()[1 - a]);
            const double spread = e.dot(cov_p * e);
            k[static_cast<std::size_t>(a)] = spread > 1e-20 ? std::sqrt(lambda / spread) : 0.0;
            dir[static_cast<std::size_t>(a)] = e;
        }
        if (k[1] > k[0]) {
            std::swap(k[0], k[1]);
            std::swap(dir[0], dir[1]);
        }
        Eigen::Vector3d x;
        if (k[0] - k[1] < kUmbilicTolerance) {
            // No preferred tangent direction: follow a world axis instead.
            const Eigen::Vector3d ref = std::abs(nrm.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
            x = (ref - ref.dot(nrm) * nrm).normalized();
        } else {
            x = canonical_direction((dir[0].x() * t1 + dir[0].y() * t2).normalized());
        }
        const Eigen::Vector3d y = nrm.cross(x);
        Eigen::Matrix3d rot;
        rot.col(0) = x;
        rot.col(1) = y;
        rot.col(2) = nrm;
        out.items.push_back({Pose{pts[i], Quat::from_matrix(rot)}, Eigen::Vector2d(k[0], k[1])});
    }
    if (out.empty()) {
        fail(ErrorKind::EmptyResult, "estimate_frames: every point lacked enough neighbors within the radius");
    }
    return out;
}

const AugmentedPoint& sample_surface(const AugmentedCloud& o, Rng& rng) {
    if (o.empty()) {
        fail(ErrorKind::InvalidArgument, "sample_surface: empty cloud");
    }
    return o.items[rng.index(o.size())];
}

// ---------------------------------------------------------------------------
// Primitives

Shape parse_shape(std::string_view tag) {
    if (tag == "box") return Shape::Box;
    if (tag == "cylinder") return Shape::Cylinder;
    if (tag == "sphere") return Shape::Sphere;
    fail(ErrorKind::InvalidArgument, "unknown shape '" + std::string(tag) + "'");
}

std::string_view to_string(Shape shape) {
    switch (shape) {
        case Shape::Box: return "box";
        case Shape::Cylinder: return "cylinder";
        case Shape::Sphere: return "sphere";
    }
    return "unknown";
}

double PrimitiveSpec::surface_area() const {
    const double pi = std::numbers::pi;
    switch (shape) {
        case Shape::Box:
            return 2.0 * (extents.x() * extents.y() + extents.x() * extents.z() + extents.y() * extents.z());
        case Shape::Cylinder:
            return 2.0 * pi * extents.x() * extents.y() + 2.0 * pi * extents.x() * extents.x();
        case Shape::Sphere:
            return 4.0 * pi * extents.x() * extents.x();
    }
    return 0.0;
}

double PrimitiveSpec::signed_distance(const Eigen::Vector3d& world_point) const {
    const Eigen::Vector3d p = pose_inverse(pose).transform(world_point);
    switch (shape) {
        case Shape::Box: {
            const Eigen::Vector3d q = p.cwiseAbs() - 0.5 * extents;
            return q.cwiseMax(0.0).norm() + std::min(q.maxCoeff(), 0.0);
        }
        case Shape::Cylinder: {
            const Eigen::Vector2d q(std::hypot(p.x(), p.y()) - extents.x(), std::abs(p.z()) - 0.5 * extents.y());
            return q.cwiseMax(0.0).norm() + std::min(q.maxCoeff(), 0.0);
        }
        case Shape::Sphere:
            return p.norm() - extents.x();
    }
    return 0.0;
}

PointCloud make_primitive(const PrimitiveSpec& spec, Rng& rng) {
    const int needed = spec.shape == Shape::Box ? 3 : (spec.shape == Shape::Cylinder ? 2 : 1);
    for (int i = 0; i < needed; ++i) {
        if (!(spec.extents[i] > 0.0)) {
            fail(ErrorKind::InvalidArgument, "make_primitive: extents must be positive");
        }
    }
    if (!(spec.density > 0.0)) {
        fail(ErrorKind::InvalidArgument, "make_primitive: density must be positive");
    }
    const auto count = static_cast<std::size_t>(std::llround(spec.surface_area() * spec.density));
    const double pi = std::numbers::pi;
    PointCloud cloud;
    cloud.points.reserve(count);
    const Eigen::Vector3d& e = spec.extents;
    for (std::size_t n = 0; n < count; ++n) {
        Eigen::Vector3d local;
        switch (spec.shape) {
            case Shape::Box: {
                const double axy = e.x() * e.y(), axz = e.x() * e.z(), ayz = e.y() * e.z();
                const double pick = rng.uniform() * (axy + axz + ayz);
                const double side = rng.uniform() < 0.5 ? -0.5 : 0.5;
                const double a = rng.uniform() - 0.5, b = rng.uniform() - 0.5;
                if (pick < axy) {
                    local = {a * e.x(), b * e.y(), side * e.z()};
                } else if (pick < axy + axz) {
                    local = {a * e.x(), side * e.y(), b * e.z()};
                } else {
                    local = {side * e.x(), a * e.y(), b * e.z()};
                }
                break;
            }
            case Shape::Cylinder: {
                const double radius = e.x(), h = e.y();
                const double side_area = 2.0 * pi * radius * h;
                const double cap_area = pi * radius * radius;
                const double theta = 2.0 * pi * rng.uniform();
                if (rng.uniform() * (side_area + 2.0 * cap_area) < side_area) {
                    local = {radius * std::cos(theta), radius * std::sin(theta), (rng.uniform() - 0.5) * h};
                } else {
                    const double rr = radius * std::sqrt(rng.uniform());
                    const double z = rng.uniform() < 0.5 ? -0.5 * h : 0.5 * h;
                    local = {rr * std::cos(theta), rr * std::sin(theta), z};
                }
                break;
            }
            case Shape::Sphere: {
                Eigen::Vector3d g(rng.normal(), rng.normal(), rng.normal());
                while (g.norm() < 1e-12) {
                    g = {rng.normal(), rng.normal(), rng.normal()};
                }
                local = e.x() * g.normalized();
                break;
            }
        }
        cloud.points.push_back(spec.pose.transform(local));
    }
    return cloud;
}

PointCloud make_object(std::span<const PrimitiveSpec> parts, Rng& rng) {
    if (parts.empty()) {
        fail(ErrorKind::InvalidArgument, "make_object: no primitives");
    }
    PointCloud out;
    for (std::size_t a = 0; a < parts.size(); ++a) {
        const PointCloud piece = make_primitive(parts[a], rng);
        for (const auto& p : piece.points) {
            bool buried = false;
            for (std::size_t b = 0; b < parts.size() && !buried; ++b) {
                buried = b != a && parts[b].signed_distance(p) < -1e-9;
            }
            if (!buried) {
                out.points.push_back(p);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Depth rendering and noise

namespace {

void check_intrinsics(const CameraIntrinsics& k) {
    if (k.width <= 0 || k.height <= 0) {
        fail(ErrorKind::InvalidArgument, "camera: image size must be positive");
    }
    if (!(std::abs(k.fx) > 0.0) || !(std::abs(k.fy) > 0.0) || !std::isfinite(k.fx) || !std::isfinite(k.fy)) {
        fail(ErrorKind::InvalidArgument, "camera: degenerate intrinsics (fx or fy is zero)");
    }
}

}  // namespace

DepthImage render_depth(const PointCloud& cloud, const CameraIntrinsics& intrinsics, const Pose& camera,
                        double splat_radius) {
    check_intrinsics(intrinsics);
    if (!(splat_radius >= 0.0)) {
        fail(ErrorKind::InvalidArgument, "render_depth: splat radius must be nonnegative");
    }
    DepthImage img{intrinsics, camera,
                   std::vector<double>(static_cast<std::size_t>(intrinsics.width) * static_cast<std::size_t>(intrinsics.height), kNaN)};
    const Pose world_to_camera = pose_inverse(camera);
    const double s2 = splat_radius * splat_radius;
    const int w = intrinsics.width, h = intrinsics.height;
    auto splat = [&](int i, int j, double z) {
        double& cell = img.z[static_cast<std::size_t>(j) * static_cast<std::size_t>(w) + static_cast<std::size_t>(i)];
        if (std::isnan(cell) || z < cell) {
            cell = z;
        }
    };
    for (const auto& pw : cloud.points) {
        const Eigen::Vector3d pc = world_to_camera.transform(pw);
        if (!(pc.z() > 1e-9)) {
            continue;
        }
        const double u = intrinsics.fx * pc.x() / pc.z() + intrinsics.cx;
        const double v = intrinsics.fy * pc.y() / pc.z() + intrinsics.cy;
        const int ui = static_cast<int>(std::lround(u));
        const int vi = static_cast<int>(std::lround(v));
        if (ui >= 0 && ui < w && vi >= 0 && vi < h) {
            splat(ui, vi, pc.z());
        }
        const int i0 = std::max(0, static_cast<int>(std::floor(u - splat_radius)));
        const int i1 = std::min(w - 1, static_cast<int>(std::ceil(u + splat_radius)));
        const int j0 = std::max(0, static_cast<int>(std::floor(v - splat_radius)));
        const int j1 = std::min(h - 1, static_cast<int>(std::ceil(v + splat_radius)));
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) {
                const double du = i - u, dv = j - v;
                if (du * du + dv * dv <= s2) {
                    splat(i, j, pc.z());
                }
            }
        }
    }
    return img;
}

DepthImage apply_noise(const DepthImage& image, double sigma_p, double sigma_d, std::uint64_t seed) {
    if (!(sigma_p >= 0.0) || !(sigma_d >= 0.0)) {
        fail(ErrorKind::InvalidArgument, "apply_noise: standard deviations must be nonnegative");
    }
    if (sigma_p == 0.0 && sigma_d == 0.0) {
        return image;
    }
    const int w = image.width(), h = image.height();
    DepthImage out = image;
    auto lookup = [&](double x, double y) -> double {
        const double fx0 = std::floor(x), fy0 = std::floor(y);
        const double ax = x - fx0, ay = y - fy0;
        const int x0 = static_cast<int>(fx0), y0 = static_cast<int>(fy0);
        const double wts[4] = {(1 - ax) * (1 - ay), ax * (1 - ay), (1 - ax) * ay, ax * ay};
        const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
        const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
        double acc = 0.0;
        for (int c = 0; c < 4; ++c) {
            if (wts[c] == 0.0) {
                continue;
            }
            if (xs[c] < 0 || xs[c] >= w || ys[c] < 0 || ys[c] >= h) {
                return kNaN;
            }
            const double z = image.at(xs[c], ys[c]);
            if (std::isnan(z)) {
                return kNaN;
            }
            acc += wts[c] * z;
        }
        return acc;
    };
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            const auto k = static_cast<std::uint64_t>(v) * static_cast<std::uint64_t>(w) + static_cast<std::uint64_t>(u);
            const double du = sigma_p * counter_normal(seed, k, 0);
            const double dv = sigma_p * counter_normal(seed, k, 1);
            const double dz = sigma_d * counter_normal(seed, k, 2);
            const double z = sigma_p == 0.0 ? image.at(u, v) : lookup(u + du, v + dv);
            out.z[k] = std::isnan(z) ? kNaN : z + dz;
        }
    }
    return out;
}

PointCloud unproject(const DepthImage& image) {
    check_intrinsics(image.intrinsics);
    const auto& k = image.intrinsics;
    PointCloud cloud;
    cloud.sensor_origins.push_back(image.camera.p);
    for (int v = 0; v < k.height; ++v) {
        for (int u = 0; u < k.width; ++u) {
            const double z = image.at(u, v);
            if (!std::isfinite(z) || z <= 0.0) {
                continue;
            }
            const Eigen::Vector3d pc((u - k.cx) * z / k.fx, (v - k.cy) * z / k.fy, z);
            cloud.points.push_back(image.camera.transform(pc));
            cloud.viewpoint.push_back(0);
        }
    }
    return cloud;
}

PointCloud stitch(std::span<const PointCloud> clouds, double voxel) {
    if (!(voxel > 0.0)) {
        fail(ErrorKind::InvalidArgument, "stitch: voxel size must be positive");
    }
    PointCloud out;
    bool all_have_viewpoints = true;
    for (const auto& c : clouds) {
        all_have_viewpoints = all_have_viewpoints && (c.has_viewpoints() || c.empty());
    }
    std::unordered_set<std::uint64_t> occupied;
    for (const auto& c : clouds) {
        const int offset = static_cast<int>(out.sensor_origins.size());
        if (all_have_viewpoints) {
            out.sensor_origins.insert(out.sensor_origins.end(), c.sensor_origins.begin(), c.sensor_origins.end());
        }
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Eigen::Vector3d& p = c.points[i];
            const auto key_of = [&](double x) {
                return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(x / voxel)) + (1LL << 20)) &
                       ((1ULL << 21) - 1);
            };
            const std::uint64_t key = (key_of(p.x()) << 42) | (key_of(p.y()) << 21) | key_of(p.z());
            if (!occupied.insert(key).second) {
                continue;
            }
            out.points.push_back(p);
            if (all_have_viewpoints) {
                out.viewpoint.push_back(c.viewpoint[i] + offset);
            }
        }
    }
    return out;
}

Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, const Eigen::Vector3d& up) {
    const Eigen::Vector3d z = (target - eye).normalized();
    Eigen::Vector3d ref = up;
    if (std::abs(ref.normalized().dot(z)) > 0.99) {
        ref = std::abs(z.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    }
    // Image y points down, so the camera x axis is z × (-up).
    const Eigen::Vector3d x = z.cross(-ref).normalized();
    const Eigen::Vector3d y = z.cross(x);
    Eigen::Matrix3d r;
    r.col(0) = x;
    r.col(1) = y;
    r.col(2) = z;
    return {eye, Quat::from_matrix(r)};
}

std::vector<Pose> tetrahedral_cameras(const Eigen::Vector3d& center, double distance) {
    const std::array<Eigen::Vector3d, 4> dirs = {Eigen::Vector3d(1, 1, 1), Eigen::Vector3d(1, -1, -1),
                                                 Eigen::Vector3d(-1, 1, -1), Eigen::Vector3d(-1, -1, 1)};
    std::vector<Pose> cams;
    for (const auto& d : dirs) {
        cams.push_back(look_at(center + distance * d.normalized(), center, Eigen::Vector3d::UnitZ()));
    }
    return cams;
}

DepthImage raycast_depth(std::span<const PrimitiveSpec> parts, const CameraIntrinsics& intrinsics,
                         const Pose& camera) {
    check_intrinsics(intrinsics);
    if (parts.empty()) {
        fail(ErrorKind::InvalidArgument, "raycast_depth: no primitives");
    }
    // Bounding sphere of the union.
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    for (const auto& p : parts) center += p.pose.p;
    center /= static_cast<double>(parts.size());
    double radius = 0.0;
    for (const auto& p : parts) {
        const double r = p.shape == Shape::Box ? 0.5 * p.extents.norm()
                         : p.shape == Shape::Cylinder ? std::hypot(p.extents.x(), 0.5 * p.extents.y())
                                                      : p.extents.x();
        radius = std::max(radius, (p.pose.p - center).norm() + r);
    }
    radius *= 1.01;
    auto sdf = [&](const Eigen::Vector3d& x) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& p : parts) d = std::min(d, p.signed_distance(x));
        return d;
    };
    constexpr int kMaxSteps = 512;
    constexpr double kHit = 1e-9;
    DepthImage img{intrinsics, camera,
                   std::vector<double>(static_cast<std::size_t>(intrinsics.width) * static_cast<std::size_t>(intrinsics.height), kNaN)};
    const Eigen::Matrix3d r = camera.q.matrix();
    for (int v = 0; v < intrinsics.height; ++v) {
        for (int u = 0; u < intrinsics.width; ++u) {
            const Eigen::Vector3d ray_c((u - intrinsics.cx) / intrinsics.fx, (v - intrinsics.cy) / intrinsics.fy, 1.0);
            const Eigen::Vector3d dir = (r * ray_c).normalized();
            const Eigen::Vector3d oc = camera.p - center;
            const double b = oc.dot(dir);
            const double disc = b * b - (oc.squaredNorm() - radius * radius);
            if (disc <= 0.0) {
                continue;
            }
            const double root = std::sqrt(disc);
            double t = std::max(0.0, -b - root);
            const double t_exit = -b + root;
            for (int step = 0; step < kMaxSteps && t <= t_exit; ++step) {
                const double d = sdf(camera.p + t * dir);
                if (d < kHit) {
                    // z-depth: distance along the optical axis.
                    img.z[static_cast<std::size_t>(v) * static_cast<std::size_t>(intrinsics.width) +
                          static_cast<std::size_t>(u)] = t / ray_c.norm();
                    break;
                }
                t += d;
            }
        }
    }
    return img;
}

namespace {

template <class Render>
PointCloud acquire_views(const Eigen::Vector3d& center, const AcquisitionOptions& options, Render&& render) {
    std::vector<PointCloud> views;
    const auto cams = tetrahedral_cameras(center, options.camera_distance);
    for (std::size_t c = 0; c < cams.size(); ++c) {
        DepthImage img = render(cams[c]);
        if (options.noise) {
            img = apply_noise(img, options.sigma_p, options.sigma_d, derive_seed(options.seed, "depth-noise", c));
        }
        views.push_back(unproject(img));
    }
    return stitch(views, options.voxel);
}

}  // namespace

PointCloud acquire(const PointCloud& surface, const AcquisitionOptions& options) {
    if (surface.empty()) {
        fail(ErrorKind::InvalidArgument, "acquire: empty surface");
    }
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    for (const auto& p : surface.points) center += p;
    center /= static_cast<double>(surface.size());
    return acquire_views(center, options, [&](const Pose& cam) {
        return render_depth(surface, options.intrinsics, cam, options.splat_radius);
    });
}

PointCloud acquire(std::span<const PrimitiveSpec> parts, const AcquisitionOptions& options) {
    if (parts.empty()) {
        fail(ErrorKind::InvalidArgument, "acquire: no primitives");
    }
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    for (const auto& p : parts) center += p.pose.p;
    center /= static_cast<double>(parts.size());
    return acquire_views(center, options, [&](const Pose& cam) { return raycast_depth(parts, options.intrinsics, cam); });
}

}  // namespace graspsynth
