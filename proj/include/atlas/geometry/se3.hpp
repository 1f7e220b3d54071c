#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "atlas/geometry/so3.hpp"

namespace atlas::geometry {

// Rigid-body transform T_AB: maps points expressed in frame B into frame A,
//   p_A = R_AB * p_B + p_AB.
//
// Convention (used across the whole codebase): Hamilton quaternions with the
// scalar stored explicitly, passive transforms. The quaternion is
// renormalized on construction. Tangent-space increments are 6-vectors
// [d_theta; d_p] applied as R <- R * Exp(d_theta), p <- p + d_p.
class Se3Transform {
 public:
  Se3Transform()
      : rotation_(Eigen::Quaterniond::Identity()),
        translation_(Eigen::Vector3d::Zero()) {}

  Se3Transform(const Eigen::Quaterniond& rotation,
               const Eigen::Vector3d& translation)
      : rotation_(rotation.normalized()), translation_(translation) {}

  Se3Transform(const Eigen::Matrix3d& rotation,
               const Eigen::Vector3d& translation)
      : rotation_(Eigen::Quaterniond(rotation).normalized()),
        translation_(translation) {}

  static Se3Transform identity() { return Se3Transform(); }

  [[nodiscard]] const Eigen::Quaterniond& rotation() const { return rotation_; }
  [[nodiscard]] const Eigen::Vector3d& translation() const {
    return translation_;
  }
  [[nodiscard]] Eigen::Matrix3d rotation_matrix() const {
    return rotation_.toRotationMatrix();
  }

  [[nodiscard]] Eigen::Matrix4d matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation_matrix();
    m.topRightCorner<3, 1>() = translation_;
    return m;
  }

  // The Eq.-style point operator: p_A = T_AB(p_B).
  [[nodiscard]] Eigen::Vector3d operator*(const Eigen::Vector3d& p) const {
    return rotation_ * p + translation_;
  }

  [[nodiscard]] Se3Transform operator*(const Se3Transform& other) const {
    return Se3Transform(rotation_ * other.rotation_,
                        rotation_ * other.translation_ + translation_);
  }

  [[nodiscard]] Se3Transform inverse() const {
    const Eigen::Quaterniond r_inv = rotation_.conjugate();
    return Se3Transform(r_inv, -(r_inv * translation_));
  }

  // Decoupled retraction used by the optimizer and the fusion filter.
  [[nodiscard]] Se3Transform retract(const Eigen::Vector3d& d_theta,
                                     const Eigen::Vector3d& d_p) const {
    return Se3Transform(rotation_ * exp_so3(d_theta), translation_ + d_p);
  }

  // Decoupled local difference: other = this.retract(result).
  [[nodiscard]] Eigen::Matrix<double, 6, 1> local_difference(
      const Se3Transform& other) const {
    Eigen::Matrix<double, 6, 1> d;
    d.head<3>() = log_so3(rotation_.conjugate() * other.rotation_);
    d.tail<3>() = other.translation_ - translation_;
    return d;
  }

  [[nodiscard]] double rotation_angle_to(const Se3Transform& other) const {
    return log_so3(rotation_.conjugate() * other.rotation_).norm();
  }
  [[nodiscard]] double translation_distance_to(const Se3Transform& other) const {
    return (translation_ - other.translation_).norm();
  }

  [[nodiscard]] bool is_identity(double tolerance = 1e-9) const {
    return log_so3(rotation_).norm() <= tolerance &&
           translation_.norm() <= tolerance;
  }

  friend bool operator==(const Se3Transform& a, const Se3Transform& b) {
    return a.rotation_.coeffs() == b.rotation_.coeffs() &&
           a.translation_ == b.translation_;
  }

 private:
  Eigen::Quaterniond rotation_;
  Eigen::Vector3d translation_;
};

inline Se3Transform compose(const Se3Transform& a, const Se3Transform& b) {
  return a * b;
}

inline Se3Transform inverse(const Se3Transform& t) { return t.inverse(); }

inline Eigen::Vector3d transform_point(const Se3Transform& t,
                                       const Eigen::Vector3d& p) {
  return t * p;
}

}  // namespace atlas::geometry
