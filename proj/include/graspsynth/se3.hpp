#pragma once

#include <array>
#include <span>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace graspsynth {

/// Unit quaternion stored as vector part `v` and scalar part `w`.
///
/// Construct through `Quat::from_coeffs` or the free functions below; they
/// keep the unit-norm invariant. Aggregate construction is left open for
/// inputs the caller has already validated.
struct Quat {
    Eigen::Vector3d v = Eigen::Vector3d::Zero();
    double w = 1.0;

    static Quat identity() { return {}; }
    // Normalizes; throws InvalidArgument on a zero or non-finite input.
    static Quat from_coeffs(double x, double y, double z, double w);
    static Quat from_matrix(const Eigen::Matrix3d& rotation);
    static Quat from_axis_angle(const Eigen::Vector3d& axis, double angle);

    double norm() const { return std::sqrt(v.squaredNorm() + w * w); }
    Eigen::Matrix3d matrix() const;
    Eigen::Vector3d rotate(const Eigen::Vector3d& x) const;
    Quat conjugate() const { return {-v, w}; }
};

Quat operator*(const Quat& a, const Quat& b);

/// Rotation vector in the half-angle convention: `omega = acos(qw) * axis`,
/// so its magnitude is half the rotation angle.
struct RotVec {
    Eigen::Vector3d omega = Eigen::Vector3d::Zero();
};

/// Returns `q` if `q.w >= 0`, otherwise `-q` (same rotation).
Quat quat_canonicalize(const Quat& q);

/// Logarithmic map. Canonicalizes first; zero branch when ||qv|| < 1e-12.
/// Throws InvalidArgument when | ||q|| - 1 | > 1e-6.
RotVec quat_log(const Quat& q);

/// Exponential map `[sin(|w|) w/|w|, cos(|w|)]`; identity for a zero vector.
/// Throws InvalidArgument on non-finite input.
Quat quat_exp(const RotVec& omega);

/// Rigid transform: rotation `q`, then translation `p`.
struct Pose {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    Quat q;

    static Pose identity() { return {}; }
    static Pose translation(const Eigen::Vector3d& t) { return {t, Quat::identity()}; }
    static Pose from_matrix(const Eigen::Matrix4d& m);

    Eigen::Matrix4d matrix() const;
    Eigen::Vector3d transform(const Eigen::Vector3d& x) const { return q.rotate(x) + p; }
};

/// Group composition `a ∘ b` (apply b, then a).
Pose pose_compose(const Pose& a, const Pose& b);
Pose pose_inverse(const Pose& a);

inline Pose operator*(const Pose& a, const Pose& b) { return pose_compose(a, b); }

/// Geodesic angle between the rotations of two quaternions, in radians.
double rotation_angle_between(const Quat& a, const Quat& b);

/// Poses serialize as `px py pz qx qy qz qw`.
std::array<double, 7> pose_to_array(const Pose& pose);
Pose pose_from_array(std::span<const double> values);

}  // namespace graspsynth
