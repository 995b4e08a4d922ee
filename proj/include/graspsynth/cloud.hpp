#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "graspsynth/random.hpp"
#include "graspsynth/se3.hpp"

namespace graspsynth {

/// Raw surface samples in meters. `viewpoint[i]` (optional, one entry per
/// point when present) indexes `sensor_origins`, the camera centers the
/// points were recorded from.
struct PointCloud {
    std::vector<Eigen::Vector3d> points;
    std::vector<int> viewpoint;
    std::vector<Eigen::Vector3d> sensor_origins;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    bool has_viewpoints() const { return !viewpoint.empty(); }
};

/// Surface point with its curvature frame `v` (x = k1 direction,
/// z = outward normal) and feature r = [k1, k2] in 1/m, k1 >= k2 >= 0.
struct AugmentedPoint {
    Pose v;
    Eigen::Vector2d r = Eigen::Vector2d::Zero();

    const Eigen::Vector3d& position() const { return v.p; }
    Eigen::Vector3d normal() const { return v.q.matrix().col(2); }
};

struct AugmentedCloud {
    std::vector<AugmentedPoint> items;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
};

inline constexpr double kDefaultCurvatureRadius = 0.01;

/// Normals from neighborhood PCA, principal curvature directions and
/// magnitudes from PCA of tangent-projected neighbor normals. Points with
/// fewer than 5 neighbors (self included) within `radius` are dropped.
/// The x axis is flipped to point along world +x (ties: +y, +z). Where
/// k1 - k2 < 1/m the projection of world x (world y near x-facing normals)
/// is used as the x axis.
AugmentedCloud estimate_frames(const PointCloud& cloud, double radius = kDefaultCurvatureRadius);

const AugmentedPoint& sample_surface(const AugmentedCloud& o, Rng& rng);

enum class Shape { Box, Cylinder, Sphere };

Shape parse_shape(std::string_view tag);
std::string_view to_string(Shape shape);

/// Analytic primitive in its local frame, placed by `pose`.
/// extents: box = full side lengths (x, y, z); cylinder = (radius, height, -),
/// axis along local z; sphere = (radius, -, -). density in points per m^2.
struct PrimitiveSpec {
    Shape shape = Shape::Box;
    Eigen::Vector3d extents = Eigen::Vector3d::Ones();
    Pose pose;
    double density = 1e4;

    double surface_area() const;
    // Signed distance to the primitive surface, negative inside.
    double signed_distance(const Eigen::Vector3d& world_point) const;
};

PointCloud make_primitive(const PrimitiveSpec& spec, Rng& rng);

/// Union of primitives; points buried inside another member are removed.
PointCloud make_object(std::span<const PrimitiveSpec> parts, Rng& rng);

struct CameraIntrinsics {
    int width = 320;
    int height = 240;
    double fx = 400.0;
    double fy = 400.0;
    double cx = 159.5;
    double cy = 119.5;
};

/// z-depth image (meters, NaN = no return). `camera` maps camera frame
/// (x right, y down, z forward) to world.
struct DepthImage {
    CameraIntrinsics intrinsics;
    Pose camera;
    std::vector<double> z;

    int width() const { return intrinsics.width; }
    int height() const { return intrinsics.height; }
    double at(int u, int v) const { return z[static_cast<std::size_t>(v) * static_cast<std::size_t>(width()) + static_cast<std::size_t>(u)]; }
};

/// z-buffer splatting: each point covers its nearest pixel and every pixel
/// center within `splat_radius` pixels; nearest depth wins.
DepthImage render_depth(const PointCloud& cloud, const CameraIntrinsics& intrinsics, const Pose& camera,
                        double splat_radius);

/// Exact depth image of a union of primitives (sphere tracing on the
/// signed distance), for noise-free synthetic acquisition.
DepthImage raycast_depth(std::span<const PrimitiveSpec> parts, const CameraIntrinsics& intrinsics,
                         const Pose& camera);

/// Additive plus lateral-shift Gaussian depth noise with bilinear lookup at
/// the shifted coordinate. Each pixel draws from its own counter-based
/// stream keyed by `seed`; lookups touching NaN or leaving the image give NaN.
DepthImage apply_noise(const DepthImage& image, double sigma_p, double sigma_d, std::uint64_t seed);

PointCloud unproject(const DepthImage& image);

inline constexpr double kDefaultStitchVoxel = 0.002;

/// Concatenates clouds (remapping viewpoint ids) and keeps the first point
/// of every occupied voxel.
PointCloud stitch(std::span<const PointCloud> clouds, double voxel = kDefaultStitchVoxel);

/// Camera pose at `eye` looking at `target`.
Pose look_at(const Eigen::Vector3d& eye, const Eigen::Vector3d& target, const Eigen::Vector3d& up);

/// Four cameras on the vertices of a regular tetrahedron around `center`.
std::vector<Pose> tetrahedral_cameras(const Eigen::Vector3d& center, double distance);

struct AcquisitionOptions {
    CameraIntrinsics intrinsics;
    double camera_distance = 0.45;
    double splat_radius = 1.5;
    bool noise = false;
    double sigma_p = 1.0;
    double sigma_d = 0.001;
    std::uint64_t seed = 0;
    double voxel = kDefaultStitchVoxel;
};

/// Renders the object from the tetrahedral ring, optionally adds depth
/// noise, back-projects and stitches the views.
PointCloud acquire(const PointCloud& surface, const AcquisitionOptions& options);
/// As above, ray casting the analytic primitives instead of splatting.
PointCloud acquire(std::span<const PrimitiveSpec> parts, const AcquisitionOptions& options);

}  // namespace graspsynth
