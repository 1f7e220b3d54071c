#include "atlas/geometry/triangulation.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace atlas::geometry {

namespace {

double max_pairwise_angle(const std::vector<Eigen::Vector3d>& rays) {
  double max_angle = 0.0;
  for (std::size_t i = 0; i < rays.size(); ++i) {
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      const double c = std::clamp(rays[i].dot(rays[j]), -1.0, 1.0);
      max_angle = std::max(max_angle, std::acos(c));
    }
  }
  return max_angle;
}

// Least-squares intersection of lines p = c_i + s * d_i ("midpoint" method):
// minimize sum_i || (I - d_i d_i^T)(p - c_i) ||^2.
TriangulationResult midpoint(const std::vector<Eigen::Vector3d>& centers,
                             const std::vector<Eigen::Vector3d>& directions) {
  Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const Eigen::Matrix3d m =
        Eigen::Matrix3d::Identity() - directions[i] * directions[i].transpose();
    a += m;
    b += m * centers[i];
  }
  TriangulationResult result;
  Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
  if (!lu.isInvertible()) {
    result.status = TriangulationStatus::kIllConditioned;
    return result;
  }
  result.point = lu.solve(b);
  result.status = TriangulationStatus::kOk;
  return result;
}

// Homogeneous DLT over the cross-product constraints bearing x (R^T (p - c)) = 0.
TriangulationResult dlt(const std::vector<BearingObservation>& observations) {
  const std::size_t n = observations.size();
  Eigen::MatrixXd a(3 * n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    const Se3Transform t_camera_frame = observations[i].t_frame_camera.inverse();
    Eigen::Matrix<double, 3, 4> projection;
    projection.leftCols<3>() = t_camera_frame.rotation_matrix();
    projection.rightCols<1>() = t_camera_frame.translation();
    a.middleRows<3>(3 * static_cast<Eigen::Index>(i)) =
        skew(observations[i].bearing) * projection;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::Vector4d h = svd.matrixV().col(3);
  TriangulationResult result;
  if (std::abs(h[3]) < 1e-12 ||
      svd.singularValues()(2) < 1e-9 * svd.singularValues()(0)) {
    result.status = TriangulationStatus::kIllConditioned;
    return result;
  }
  result.point = h.head<3>() / h[3];
  result.status = TriangulationStatus::kOk;
  return result;
}

}  // namespace

TriangulationResult triangulate(const std::vector<BearingObservation>& observations,
                                const TriangulationOptions& options) {
  TriangulationResult result;
  if (observations.size() < 2) {
    result.status = TriangulationStatus::kTooFewObservations;
    return result;
  }

  std::vector<Eigen::Vector3d> centers, directions;
  centers.reserve(observations.size());
  directions.reserve(observations.size());
  for (const auto& obs : observations) {
    centers.push_back(obs.t_frame_camera.translation());
    directions.push_back(
        (obs.t_frame_camera.rotation() * obs.bearing).normalized());
  }

  if (max_pairwise_angle(directions) < options.min_disparity_rad) {
    result.status = TriangulationStatus::kInsufficientDisparity;
    return result;
  }

  result = observations.size() == 2 ? midpoint(centers, directions)
                                    : dlt(observations);
  if (!result.ok()) {
    return result;
  }

  for (const auto& obs : observations) {
    const Eigen::Vector3d p_camera = obs.t_frame_camera.inverse() * result.point;
    if (p_camera.z() <= 0.0) {
      result.status = TriangulationStatus::kBehindCamera;
      return result;
    }
  }
  return result;
}

}  // namespace atlas::geometry
