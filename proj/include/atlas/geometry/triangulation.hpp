#pragma once

#include <vector>

#include <Eigen/Core>

#include "atlas/geometry/se3.hpp"

namespace atlas::geometry {

// One ray: camera pose in the target frame plus a unit bearing expressed in
// the camera frame.
struct BearingObservation {
  Se3Transform t_frame_camera;
  Eigen::Vector3d bearing = Eigen::Vector3d::UnitZ();
};

enum class TriangulationStatus {
  kOk,
  kTooFewObservations,
  kInsufficientDisparity,
  kBehindCamera,
  kIllConditioned,
};

struct TriangulationResult {
  TriangulationStatus status = TriangulationStatus::kTooFewObservations;
  Eigen::Vector3d point = Eigen::Vector3d::Zero();

  [[nodiscard]] bool ok() const { return status == TriangulationStatus::kOk; }
};

struct TriangulationOptions {
  // Rays closer to parallel than this are rejected.
  double min_disparity_rad = 2.0 * M_PI / 180.0;
};

// Linear midpoint solution for two rays, homogeneous DLT for three or more.
TriangulationResult triangulate(const std::vector<BearingObservation>& observations,
                                const TriangulationOptions& options = {});

}  // namespace atlas::geometry
