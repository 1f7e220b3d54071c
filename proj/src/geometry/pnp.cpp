#include "atlas/geometry/pnp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace atlas::geometry {

namespace {

// Real roots of c[0] + c[1] x + ... + c[degree] x^degree via the companion
// matrix, with degree reduction for vanishing leading coefficients.
std::vector<double> real_polynomial_roots(std::array<double, 5> c) {
  int degree = 4;
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return {};
  while (degree > 0 && std::abs(c[degree]) < 1e-14 * scale) --degree;
  if (degree == 0) return {};
  if (degree == 1) return {-c[0] / c[1]};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 0; i < degree; ++i) {
    companion(0, i) = -c[degree - 1 - i] / c[degree];
    if (i + 1 < degree) companion(i + 1, i) = 1.0;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<double> roots;
  for (int i = 0; i < degree; ++i) {
    const auto v = solver.eigenvalues()[i];
    if (std::abs(v.imag()) < 1e-8 * std::max(1.0, std::abs(v.real()))) {
      roots.push_back(v.real());
    }
  }
  return roots;
}

struct Quadratic {
  // q[0] + q[1] y + q[2] y^2
  std::array<double, 3> coeff{};
};

// Product of two quadratics in y (degree <= 4).
std::array<double, 5> multiply(const Quadratic& a, const Quadratic& b) {
  std::array<double, 5> out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out[i + j] += a.coeff[i] * b.coeff[j];
    }
  }
  return out;
}

std::array<double, 5> subtract(const std::array<double, 5>& a,
                               const std::array<double, 5>& b) {
  std::array<double, 5> out{};
  for (int i = 0; i < 5; ++i) out[i] = a[i] - b[i];
  return out;
}

// Rigid transform aligning three camera-frame points onto frame points
// (Horn/Umeyama without scale); empty when the triple is degenerate.
std::optional<Se3Transform> align_three_points(
    const std::array<Eigen::Vector3d, 3>& p_camera,
    const std::array<Eigen::Vector3d, 3>& p_frame) {
  Eigen::Vector3d mean_c = Eigen::Vector3d::Zero();
  Eigen::Vector3d mean_f = Eigen::Vector3d::Zero();
  for (int i = 0; i < 3; ++i) {
    mean_c += p_camera[i];
    mean_f += p_frame[i];
  }
  mean_c /= 3.0;
  mean_f /= 3.0;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (int i = 0; i < 3; ++i) {
    cov += (p_frame[i] - mean_f) * (p_camera[i] - mean_c).transpose();
  }
  // Three points span a plane only; regularize the normal direction so the
  // SVD picks the right-handed completion.
  Eigen::Vector3d n_c = (p_camera[1] - p_camera[0]).cross(p_camera[2] - p_camera[0]);
  Eigen::Vector3d n_f = (p_frame[1] - p_frame[0]).cross(p_frame[2] - p_frame[0]);
  const double n_norm = n_c.norm() * n_f.norm();
  if (n_norm < 1e-16) return std::nullopt;
  cov += n_f * n_c.transpose() / std::sqrt(n_norm);

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
    d(2, 2) = -1.0;
  }
  const Eigen::Matrix3d rotation = svd.matrixU() * d * svd.matrixV().transpose();
  return Se3Transform(rotation, mean_f - rotation * mean_c);
}

}  // namespace

std::vector<Se3Transform> solve_p3p(
    const std::array<Eigen::Vector3d, 3>& bearings,
    const std::array<Eigen::Vector3d, 3>& points) {
  // Side lengths (squared) of the world triangle and the cosines between the
  // bearing rays; classic distance-based formulation: find the depths s_i
  // with s2 = x*s1, s3 = y*s1 from two quadric constraints, eliminating x via
  // the resultant of the pair (a quartic in y).
  const Eigen::Vector3d f1 = bearings[0].normalized();
  const Eigen::Vector3d f2 = bearings[1].normalized();
  const Eigen::Vector3d f3 = bearings[2].normalized();

  const double a2 = (points[1] - points[2]).squaredNorm();  // opposite P1
  const double b2 = (points[0] - points[2]).squaredNorm();  // opposite P2
  const double c2 = (points[0] - points[1]).squaredNorm();  // opposite P3
  if (a2 < 1e-16 || b2 < 1e-16 || c2 < 1e-16) return {};
  // Collinear triple -> degenerate.
  const Eigen::Vector3d cross =
      (points[1] - points[0]).cross(points[2] - points[0]);
  if (cross.squaredNorm() < 1e-12 * a2 * std::max(b2, c2)) return {};

  const double cos_a = f2.dot(f3);  // angle opposite side a (rays 2,3)
  const double cos_b = f1.dot(f3);
  const double cos_c = f1.dot(f2);

  // Constraints with s2 = x s1, s3 = y s1:
  //   F: a2 (1 + y^2 - 2 y cos_b) - b2 (x^2 + y^2 - 2 x y cos_a) = 0
  //   G: a2 (1 + x^2 - 2 x cos_c) - c2 (x^2 + y^2 - 2 x y cos_a) = 0
  // viewed as quadratics in x with y-dependent coefficients.
  const Quadratic f2x{{-b2, 0.0, 0.0}};
  const Quadratic f1x{{0.0, 2.0 * b2 * cos_a, 0.0}};
  const Quadratic f0x{{a2, -2.0 * a2 * cos_b, a2 - b2}};
  const Quadratic g2x{{a2 - c2, 0.0, 0.0}};
  const Quadratic g1x{{-2.0 * a2 * cos_c, 2.0 * c2 * cos_a, 0.0}};
  const Quadratic g0x{{a2, 0.0, -c2}};

  // Resultant of the two quadratics in x:
  //   (f2 g0 - f0 g2)^2 - (f2 g1 - f1 g2)(f1 g0 - f0 g1)
  auto combine = [](const Quadratic& p, const Quadratic& q, const Quadratic& r,
                    const Quadratic& s) {
    // p*q - r*s
    return subtract(multiply(p, q), multiply(r, s));
  };
  const auto t0 = combine(f2x, g0x, f0x, g2x);  // f2 g0 - f0 g2
  const auto t1 = combine(f2x, g1x, f1x, g2x);  // f2 g1 - f1 g2
  const auto t2 = combine(f1x, g0x, f0x, g1x);  // f1 g0 - f0 g1
  std::array<double, 5> quartic{};
  for (int i = 0; i < 5; ++i) {
    double acc0 = 0.0, acc1 = 0.0;
    for (int j = 0; j <= i; ++j) {
      if (j < 5 && i - j < 5) {
        acc0 += t0[j] * t0[i - j];
        acc1 += t1[j] * t2[i - j];
      }
    }
    quartic[i] = acc0 - acc1;
  }

  std::vector<Se3Transform> solutions;
  for (double y : real_polynomial_roots(quartic)) {
    if (!(y > 1e-9)) continue;
    auto eval = [y](const Quadratic& q) {
      return q.coeff[0] + q.coeff[1] * y + q.coeff[2] * y * y;
    };
    // Linear elimination for x; fall back to the quadratic when degenerate.
    const double denom = eval(f1x) * eval(g2x) - eval(f2x) * eval(g1x);
    std::vector<double> xs;
    if (std::abs(denom) > 1e-12 * (a2 + b2 + c2)) {
      xs.push_back((eval(f2x) * eval(g0x) - eval(f0x) * eval(g2x)) / denom);
    } else {
      const double qa = eval(f2x), qb = eval(f1x), qc = eval(f0x);
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0 && std::abs(qa) > 1e-16) {
        xs.push_back((-qb + std::sqrt(disc)) / (2.0 * qa));
        xs.push_back((-qb - std::sqrt(disc)) / (2.0 * qa));
      }
    }
    for (double x : xs) {
      if (!(x > 1e-9)) continue;
      const double denom_s1 = 1.0 + y * y - 2.0 * y * cos_b;
      if (denom_s1 <= 0.0) continue;
      const double s1 = std::sqrt(b2 / denom_s1);
      const double s2 = x * s1;
      const double s3 = y * s1;
      const std::array<Eigen::Vector3d, 3> p_camera = {s1 * f1, s2 * f2,
                                                       s3 * f3};
      auto pose = align_three_points(p_camera, points);
      if (pose.has_value()) {
        solutions.push_back(*pose);
      }
    }
  }
  return solutions;
}

namespace {

int count_inliers(const std::vector<PnpMatch>& matches,
                  const CameraModel& camera, const Se3Transform& t_frame_camera,
                  double threshold_px, std::vector<int>* inliers) {
  const Se3Transform t_camera_frame = t_frame_camera.inverse();
  int count = 0;
  if (inliers != nullptr) inliers->clear();
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const Eigen::Vector3d p_camera = t_camera_frame * matches[i].p_frame;
    const ProjectionResult proj = camera.project(p_camera);
    if (proj.status == ProjectionStatus::kBehindCamera) continue;
    if ((proj.uv - matches[i].keypoint.uv).norm() <= threshold_px) {
      ++count;
      if (inliers != nullptr) inliers->push_back(static_cast<int>(i));
    }
  }
  return count;
}

// Gauss-Newton on the inlier reprojection error over the camera pose.
Se3Transform refine_pose(const std::vector<PnpMatch>& matches,
                         const std::vector<int>& inliers,
                         const CameraModel& camera, Se3Transform pose,
                         int iterations) {
  for (int it = 0; it < iterations; ++it) {
    Eigen::Matrix<double, 6, 6> h = Eigen::Matrix<double, 6, 6>::Zero();
    Eigen::Matrix<double, 6, 1> g = Eigen::Matrix<double, 6, 1>::Zero();
    const Se3Transform t_camera_frame = pose.inverse();
    const Eigen::Matrix3d r_cf = t_camera_frame.rotation_matrix();
    for (int idx : inliers) {
      const Eigen::Vector3d p_camera = t_camera_frame * matches[idx].p_frame;
      Eigen::Matrix<double, 2, 3> d_uv_d_pc;
      const ProjectionResult proj =
          camera.project_with_jacobian(p_camera, &d_uv_d_pc);
      if (proj.status == ProjectionStatus::kBehindCamera) continue;
      const Eigen::Vector2d residual = proj.uv - matches[idx].keypoint.uv;
      // p_camera = R_wc^T (p_w - t_wc) with pose perturbation
      // R <- R Exp(dtheta), t <- t + dp:
      //   d p_camera / d dtheta = skew(p_camera)
      //   d p_camera / d dp     = -R_cf
      Eigen::Matrix<double, 3, 6> d_pc;
      d_pc.leftCols<3>() = skew(p_camera);
      d_pc.rightCols<3>() = -r_cf;
      const Eigen::Matrix<double, 2, 6> j = d_uv_d_pc * d_pc;
      h += j.transpose() * j;
      g += j.transpose() * residual;
    }
    const Eigen::Matrix<double, 6, 1> step =
        h.ldlt().solve(-g);
    if (!step.allFinite()) break;
    pose = pose.retract(step.head<3>(), step.tail<3>());
    if (step.norm() < 1e-12) break;
  }
  return pose;
}

}  // namespace

std::optional<PnpResult> p3p_ransac(const std::vector<PnpMatch>& matches,
                                    const CameraModel& camera,
                                    const PnpRansacOptions& options) {
  if (matches.size() < 4) return std::nullopt;

  std::vector<Eigen::Vector3d> bearings(matches.size());
  for (std::size_t i = 0; i < matches.size(); ++i) {
    const auto bearing = camera.unproject(matches[i].keypoint.uv);
    if (!bearing.has_value()) return std::nullopt;
    bearings[i] = *bearing;
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, matches.size() - 1);

  Se3Transform best_pose;
  int best_count = 0;
  int adaptive_cap = options.max_iterations;
  for (int iteration = 0; iteration < std::min(options.max_iterations, adaptive_cap);
       ++iteration) {
    std::array<std::size_t, 3> sample{};
    sample[0] = pick(rng);
    do { sample[1] = pick(rng); } while (sample[1] == sample[0]);
    do { sample[2] = pick(rng); } while (sample[2] == sample[0] || sample[2] == sample[1]);

    const std::array<Eigen::Vector3d, 3> fs = {
        bearings[sample[0]], bearings[sample[1]], bearings[sample[2]]};
    const std::array<Eigen::Vector3d, 3> ps = {matches[sample[0]].p_frame,
                                               matches[sample[1]].p_frame,
                                               matches[sample[2]].p_frame};
    for (const Se3Transform& candidate : solve_p3p(fs, ps)) {
      const int count = count_inliers(matches, camera, candidate,
                                      options.inlier_threshold_px, nullptr);
      if (count > best_count) {
        best_count = count;
        best_pose = candidate;
        const double w =
            static_cast<double>(count) / static_cast<double>(matches.size());
        const double denom = std::log(1.0 - std::min(0.9999, w * w * w));
        if (denom < 0.0) {
          adaptive_cap = static_cast<int>(
              std::ceil(std::log(1.0 - options.confidence) / denom));
        }
      }
    }
  }

  if (best_count < std::max(options.min_inliers, 4)) return std::nullopt;

  PnpResult result;
  count_inliers(matches, camera, best_pose, options.inlier_threshold_px,
                &result.inliers);
  // Refine on inliers, then re-collect them; one extra round settles borders.
  for (int round = 0; round < 2; ++round) {
    result.t_frame_camera = refine_pose(matches, result.inliers, camera,
                                        round == 0 ? best_pose : result.t_frame_camera,
                                        options.refinement_iterations);
    count_inliers(matches, camera, result.t_frame_camera,
                  options.inlier_threshold_px, &result.inliers);
  }
  if (static_cast<int>(result.inliers.size()) < options.min_inliers) {
    return std::nullopt;
  }

  const Se3Transform t_camera_frame = result.t_frame_camera.inverse();
  double error_sum = 0.0;
  for (int idx : result.inliers) {
    const ProjectionResult proj =
        camera.project(t_camera_frame * matches[idx].p_frame);
    error_sum += (proj.uv - matches[idx].keypoint.uv).norm();
  }
  result.mean_inlier_error_px =
      result.inliers.empty() ? 0.0
                             : error_sum / static_cast<double>(result.inliers.size());
  return result;
}

}  // namespace atlas::geometry
