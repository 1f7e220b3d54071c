#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace atlas::geometry {

inline Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  // clang-format off
  m <<     0, -v.z(),  v.y(),
       v.z(),      0, -v.x(),
      -v.y(),  v.x(),      0;
  // clang-format on
  return m;
}

// Exponential map so(3) -> SO(3), returned as a unit quaternion.
inline Eigen::Quaterniond exp_so3(const Eigen::Vector3d& phi) {
  const double angle = phi.norm();
  if (angle < 1e-12) {
    Eigen::Quaterniond q(1.0, 0.5 * phi.x(), 0.5 * phi.y(), 0.5 * phi.z());
    q.normalize();
    return q;
  }
  const Eigen::Vector3d axis = phi / angle;
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis));
}

// Logarithm map SO(3) -> so(3).
inline Eigen::Vector3d log_so3(const Eigen::Quaterniond& q_in) {
  Eigen::Quaterniond q = q_in.normalized();
  if (q.w() < 0) {
    q.coeffs() = -q.coeffs();
  }
  const Eigen::Vector3d v(q.x(), q.y(), q.z());
  const double sin_half = v.norm();
  const double cos_half = q.w();
  if (sin_half < 1e-12) {
    return 2.0 * v;
  }
  const double angle = 2.0 * std::atan2(sin_half, cos_half);
  return (angle / sin_half) * v;
}

inline Eigen::Vector3d log_so3(const Eigen::Matrix3d& r) {
  return log_so3(Eigen::Quaterniond(r));
}

// Right Jacobian of the SO(3) exponential: Exp(phi + d) ~ Exp(phi) Exp(Jr d).
inline Eigen::Matrix3d right_jacobian_so3(const Eigen::Vector3d& phi) {
  const double angle = phi.norm();
  const Eigen::Matrix3d w = skew(phi);
  if (angle < 1e-7) {
    return Eigen::Matrix3d::Identity() - 0.5 * w + (1.0 / 6.0) * w * w;
  }
  const double a2 = angle * angle;
  return Eigen::Matrix3d::Identity() -
         ((1.0 - std::cos(angle)) / a2) * w +
         ((angle - std::sin(angle)) / (a2 * angle)) * w * w;
}

// Inverse of the right Jacobian: Log(Exp(phi) Exp(d)) ~ phi + Jr^-1 d.
inline Eigen::Matrix3d right_jacobian_inv_so3(const Eigen::Vector3d& phi) {
  const double angle = phi.norm();
  const Eigen::Matrix3d w = skew(phi);
  if (angle < 1e-7) {
    return Eigen::Matrix3d::Identity() + 0.5 * w + (1.0 / 12.0) * w * w;
  }
  const double half = 0.5 * angle;
  const double cot_term = 1.0 / (angle * angle) -
                          (1.0 + std::cos(angle)) /
                              (2.0 * angle * std::sin(angle));
  (void)half;
  return Eigen::Matrix3d::Identity() + 0.5 * w + cot_term * w * w;
}

// Left Jacobian inverse: Log(Exp(d) Exp(phi)) ~ phi + Jl^-1 d.
inline Eigen::Matrix3d left_jacobian_inv_so3(const Eigen::Vector3d& phi) {
  return right_jacobian_inv_so3(-phi);
}

}  // namespace atlas::geometry
