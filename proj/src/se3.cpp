#include "graspsynth/se3.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "graspsynth/error.hpp"

namespace graspsynth {

namespace {

constexpr double kZeroVectorPart = 1e-12;
constexpr double kUnitTolerance = 1e-6;

}  // namespace

Quat Quat::from_coeffs(double x, double y, double z, double w) {
    const double n = std::sqrt(x * x + y * y + z * z + w * w);
    if (!std::isfinite(n) || n == 0.0) {
        fail(ErrorKind::InvalidArgument, "quaternion has zero or non-finite norm");
    }
    // Leave already-unit input untouched so decode(encode(q)) is exact.
    if (std::abs(n - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) return {Eigen::Vector3d(x, y, z), w};
    return {Eigen::Vector3d(x / n, y / n, z / n), w / n};
}

Quat Quat::from_matrix(const Eigen::Matrix3d& rotation) {
    const Eigen::Quaterniond e(rotation);
    return from_coeffs(e.x(), e.y(), e.z(), e.w());
}

Quat Quat::from_axis_angle(const Eigen::Vector3d& axis, double angle) {
    const double n = axis.norm();
    if (!(n > 0.0)) {
        fail(ErrorKind::InvalidArgument, "rotation axis must be nonzero");
    }
    const double half = 0.5 * angle;
    const Eigen::Vector3d v = std::sin(half) * axis / n;
    return from_coeffs(v.x(), v.y(), v.z(), std::cos(half));
}

Eigen::Matrix3d Quat::matrix() const {
    const double x = v.x(), y = v.y(), z = v.z();
    Eigen::Matrix3d r;
    r << 1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
        2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
        2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y);
    return r;
}

Eigen::Vector3d Quat::rotate(const Eigen::Vector3d& x) const {
    // x + 2w (v × x) + 2 v × (v × x)
    const Eigen::Vector3d t = 2.0 * v.cross(x);
    return x + w * t + v.cross(t);
}

Quat operator*(const Quat& a, const Quat& b) {
    Quat r;
    r.w = a.w * b.w - a.v.dot(b.v);
    r.v = a.w * b.v + b.w * a.v + a.v.cross(b.v);
    // Renormalize so long composition chains keep the unit-norm invariant.
    const double n = r.norm();
    r.v /= n;
    r.w /= n;
    return r;
}

Quat quat_canonicalize(const Quat& q) {
    if (q.w >= 0.0) {
        return q;
    }
    return {-q.v, -q.w};
}

RotVec quat_log(const Quat& q) {
    const double n = q.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kUnitTolerance) {
        fail(ErrorKind::InvalidArgument,
             "quat_log: quaternion is not unit norm (norm = " + std::to_string(n) + ")");
    }
    const Quat c = quat_canonicalize(q);
    const double vn = c.v.norm();
    if (vn < kZeroVectorPart) {
        return {};
    }
    // atan2(|qv|, qw) equals acos(qw) on the unit sphere and stays accurate
    // near the identity where acos loses precision.
    const double angle = std::atan2(vn, c.w);
    return {angle * c.v / vn};
}

Quat quat_exp(const RotVec& omega) {
    if (!omega.omega.allFinite()) {
        fail(ErrorKind::InvalidArgument, "quat_exp: non-finite rotation vector");
    }
    const double n = omega.omega.norm();
    if (n == 0.0) {
        return Quat::identity();
    }
    const Eigen::Vector3d v = std::sin(n) * omega.omega / n;
    return Quat::from_coeffs(v.x(), v.y(), v.z(), std::cos(n));
}

Pose Pose::from_matrix(const Eigen::Matrix4d& m) {
    return {m.block<3, 1>(0, 3), Quat::from_matrix(m.block<3, 3>(0, 0))};
}

Eigen::Matrix4d Pose::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.block<3, 3>(0, 0) = q.matrix();
    m.block<3, 1>(0, 3) = p;
    return m;
}

Pose pose_compose(const Pose& a, const Pose& b) {
    return {a.q.rotate(b.p) + a.p, a.q * b.q};
}

Pose pose_inverse(const Pose& a) {
    const Quat qi = a.q.conjugate();
    return {-qi.rotate(a.p), qi};
}

double rotation_angle_between(const Quat& a, const Quat& b) {
    const Quat rel = a.conjugate() * b;
    return 2.0 * std::atan2(rel.v.norm(), std::abs(rel.w));
}

std::array<double, 7> pose_to_array(const Pose& pose) {
    return {pose.p.x(), pose.p.y(), pose.p.z(), pose.q.v.x(), pose.q.v.y(), pose.q.v.z(), pose.q.w};
}

Pose pose_from_array(std::span<const double> values) {
    if (values.size() != 7) {
        fail(ErrorKind::InvalidArgument, "pose requires 7 numbers, got " + std::to_string(values.size()));
    }
    Pose pose;
    pose.p = Eigen::Vector3d(values[0], values[1], values[2]);
    if (!pose.p.allFinite()) {
        fail(ErrorKind::InvalidArgument, "pose position is not finite");
    }
    pose.q = Quat::from_coeffs(values[3], values[4], values[5], values[6]);
    return pose;
}

}  // namespace graspsynth
