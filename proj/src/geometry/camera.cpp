#include "atlas/geometry/camera.hpp"

#include "atlas/common/check.hpp"

namespace atlas::geometry {

namespace {
constexpr double kMinDepth = 1e-6;
constexpr int kUndistortMaxIterations = 10;
constexpr double kUndistortTolerance = 1e-10;
}  // namespace

CameraModel::CameraModel(double fx, double fy, double cx, double cy, int width,
                         int height, const Eigen::Vector4d& distortion,
                         const Se3Transform& t_imu_camera)
    : fx_(fx),
      fy_(fy),
      cx_(cx),
      cy_(cy),
      width_(width),
      height_(height),
      distortion_(distortion),
      t_imu_camera_(t_imu_camera) {
  ATLAS_CHECK(fx_ > 0.0 && fy_ > 0.0);
  ATLAS_CHECK(width_ > 0 && height_ > 0);
}

Eigen::Vector2d CameraModel::distort(const Eigen::Vector2d& n) const {
  const double k1 = distortion_[0], k2 = distortion_[1];
  const double p1 = distortion_[2], p2 = distortion_[3];
  const double x = n.x(), y = n.y();
  const double r2 = x * x + y * y;
  const double radial = 1.0 + k1 * r2 + k2 * r2 * r2;
  return {x * radial + 2.0 * p1 * x * y + p2 * (r2 + 2.0 * x * x),
          y * radial + p1 * (r2 + 2.0 * y * y) + 2.0 * p2 * x * y};
}

Eigen::Vector2d CameraModel::distort_with_jacobian(const Eigen::Vector2d& n,
                                                   Eigen::Matrix2d* j) const {
  const double k1 = distortion_[0], k2 = distortion_[1];
  const double p1 = distortion_[2], p2 = distortion_[3];
  const double x = n.x(), y = n.y();
  const double r2 = x * x + y * y;
  const double radial = 1.0 + k1 * r2 + k2 * r2 * r2;
  const double d_radial_d_r2 = k1 + 2.0 * k2 * r2;
  if (j != nullptr) {
    (*j)(0, 0) = radial + x * d_radial_d_r2 * 2.0 * x + 2.0 * p1 * y + 6.0 * p2 * x;
    (*j)(0, 1) = x * d_radial_d_r2 * 2.0 * y + 2.0 * p1 * x + 2.0 * p2 * y;
    (*j)(1, 0) = y * d_radial_d_r2 * 2.0 * x + 2.0 * p2 * y + 2.0 * p1 * x;
    (*j)(1, 1) = radial + y * d_radial_d_r2 * 2.0 * y + 6.0 * p1 * y + 2.0 * p2 * x;
  }
  return distort(n);
}

ProjectionResult CameraModel::project(const Eigen::Vector3d& p_camera) const {
  return project_with_jacobian(p_camera, nullptr);
}

ProjectionResult CameraModel::project_with_jacobian(
    const Eigen::Vector3d& p_camera, Eigen::Matrix<double, 2, 3>* jacobian) const {
  ProjectionResult result;
  const double z = p_camera.z();
  if (z <= kMinDepth) {
    result.status = ProjectionStatus::kBehindCamera;
    return result;
  }
  const Eigen::Vector2d normalized(p_camera.x() / z, p_camera.y() / z);
  Eigen::Matrix2d d_dist;
  const Eigen::Vector2d distorted =
      jacobian != nullptr ? distort_with_jacobian(normalized, &d_dist)
                          : distort(normalized);
  result.uv = {fx_ * distorted.x() + cx_, fy_ * distorted.y() + cy_};
  result.status = in_image(result.uv) ? ProjectionStatus::kVisible
                                      : ProjectionStatus::kOutsideImage;
  if (jacobian != nullptr) {
    Eigen::Matrix<double, 2, 3> d_norm;
    // clang-format off
    d_norm << 1.0 / z,     0.0, -p_camera.x() / (z * z),
                  0.0, 1.0 / z, -p_camera.y() / (z * z);
    // clang-format on
    Eigen::Matrix2d intrinsics;
    intrinsics << fx_, 0.0, 0.0, fy_;
    *jacobian = intrinsics * d_dist * d_norm;
  }
  return result;
}

std::optional<Eigen::Vector3d> CameraModel::unproject(
    const Eigen::Vector2d& uv) const {
  const Eigen::Vector2d distorted((uv.x() - cx_) / fx_, (uv.y() - cy_) / fy_);
  // Fixed-point inversion of the distortion.
  Eigen::Vector2d n = distorted;
  for (int i = 0; i < kUndistortMaxIterations; ++i) {
    const Eigen::Vector2d err = distort(n) - distorted;
    n -= err;
    if (err.norm() < kUndistortTolerance) {
      break;
    }
  }
  if ((distort(n) - distorted).norm() > 1e-6) {
    return std::nullopt;
  }
  return Eigen::Vector3d(n.x(), n.y(), 1.0).normalized();
}

bool operator==(const CameraModel& a, const CameraModel& b) {
  return a.fx_ == b.fx_ && a.fy_ == b.fy_ && a.cx_ == b.cx_ && a.cy_ == b.cy_ &&
         a.width_ == b.width_ && a.height_ == b.height_ &&
         a.distortion_ == b.distortion_ && a.t_imu_camera_ == b.t_imu_camera_;
}

}  // namespace atlas::geometry
