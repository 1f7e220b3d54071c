#pragma once

#include <optional>

#include <Eigen/Core>

#include "atlas/geometry/se3.hpp"

namespace atlas::geometry {

struct Keypoint {
  Eigen::Vector2d uv = Eigen::Vector2d::Zero();
  double sigma = 1.0;  // measurement standard deviation, pixels
};

enum class ProjectionStatus {
  kVisible,
  kBehindCamera,
  kOutsideImage,
};

struct ProjectionResult {
  ProjectionStatus status = ProjectionStatus::kBehindCamera;
  Eigen::Vector2d uv = Eigen::Vector2d::Zero();

  [[nodiscard]] bool visible() const {
    return status == ProjectionStatus::kVisible;
  }
};

// Pinhole camera with radial-tangential distortion (k1, k2, p1, p2) and the
// IMU-to-camera extrinsic T_IC. Distortion acts on the normalized image
// plane, before the intrinsics.
class CameraModel {
 public:
  CameraModel() = default;
  CameraModel(double fx, double fy, double cx, double cy, int width,
              int height, const Eigen::Vector4d& distortion = Eigen::Vector4d::Zero(),
              const Se3Transform& t_imu_camera = Se3Transform());

  [[nodiscard]] double fx() const { return fx_; }
  [[nodiscard]] double fy() const { return fy_; }
  [[nodiscard]] double cx() const { return cx_; }
  [[nodiscard]] double cy() const { return cy_; }
  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] const Eigen::Vector4d& distortion() const { return distortion_; }
  [[nodiscard]] const Se3Transform& t_imu_camera() const { return t_imu_camera_; }

  // Projects a camera-frame point. uv is filled for kOutsideImage as well so
  // residual evaluation can keep working near the border.
  [[nodiscard]] ProjectionResult project(const Eigen::Vector3d& p_camera) const;

  // Same, plus d(uv)/d(p_camera) at the solution (only valid when not behind
  // the camera).
  ProjectionResult project_with_jacobian(const Eigen::Vector3d& p_camera,
                                         Eigen::Matrix<double, 2, 3>* jacobian) const;

  // Unit bearing in the camera frame whose projection is uv; empty when the
  // distortion inversion does not converge.
  [[nodiscard]] std::optional<Eigen::Vector3d> unproject(
      const Eigen::Vector2d& uv) const;

  [[nodiscard]] bool in_image(const Eigen::Vector2d& uv) const {
    return uv.x() >= 0.0 && uv.x() < width_ && uv.y() >= 0.0 && uv.y() < height_;
  }

  // Distortion on the normalized image plane.
  [[nodiscard]] Eigen::Vector2d distort(const Eigen::Vector2d& normalized) const;
  Eigen::Vector2d distort_with_jacobian(const Eigen::Vector2d& normalized,
                                        Eigen::Matrix2d* jacobian) const;

  friend bool operator==(const CameraModel&, const CameraModel&);

 private:
  double fx_ = 1.0, fy_ = 1.0, cx_ = 0.0, cy_ = 0.0;
  int width_ = 0, height_ = 0;
  Eigen::Vector4d distortion_ = Eigen::Vector4d::Zero();  // k1, k2, p1, p2
  Se3Transform t_imu_camera_;
};

using CameraRig = std::vector<CameraModel>;

}  // namespace atlas::geometry
