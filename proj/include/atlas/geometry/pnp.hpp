#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "atlas/geometry/camera.hpp"
#include "atlas/geometry/se3.hpp"

namespace atlas::geometry {

// One 2d-3d correspondence: image keypoint and the matched point in the
// target frame (typically the global frame).
struct PnpMatch {
  Keypoint keypoint;
  Eigen::Vector3d p_frame = Eigen::Vector3d::Zero();
};

struct PnpRansacOptions {
  int max_iterations = 1000;
  double inlier_threshold_px = 1.0;
  double confidence = 0.999;
  int min_inliers = 8;
  std::uint64_t seed = 0;
  int refinement_iterations = 10;
};

struct PnpResult {
  Se3Transform t_frame_camera;  // camera pose in the match frame
  std::vector<int> inliers;     // indices into the match list, ascending
  double mean_inlier_error_px = 0.0;
};

// Minimal three-point absolute pose: all physically valid camera poses for
// three correspondences between camera-frame bearings and frame points.
// Degenerate (collinear) point triples produce an empty set.
std::vector<Se3Transform> solve_p3p(
    const std::array<Eigen::Vector3d, 3>& bearings,
    const std::array<Eigen::Vector3d, 3>& points);

// RANSAC over P3P hypotheses followed by a nonlinear reprojection refinement
// on the inlier set. Fails when no hypothesis reaches min_inliers.
std::optional<PnpResult> p3p_ransac(const std::vector<PnpMatch>& matches,
                                    const CameraModel& camera,
                                    const PnpRansacOptions& options = {});

}  // namespace atlas::geometry
