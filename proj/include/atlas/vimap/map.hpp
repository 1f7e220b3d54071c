#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "atlas/common/descriptor.hpp"
#include "atlas/common/id.hpp"
#include "atlas/geometry/camera.hpp"
#include "atlas/geometry/se3.hpp"
#include "atlas/vimap/resources.hpp"

namespace atlas::vimap {

// Per-camera visual measurements of one vertex. The three arrays are
// parallel; an unset landmark id means the keypoint is not associated yet.
struct VisualFrame {
  std::vector<geometry::Keypoint> keypoints;
  std::vector<BinaryDescriptor> descriptors;
  std::vector<LandmarkId> observed_landmarks;

  [[nodiscard]] std::size_t size() const { return keypoints.size(); }
};

struct Vertex {
  VertexId id;
  MissionId mission;
  std::int64_t timestamp_ns = 0;
  geometry::Se3Transform t_mission_imu;
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d gyro_bias = Eigen::Vector3d::Zero();
  Eigen::Vector3d accel_bias = Eigen::Vector3d::Zero();
  std::vector<VisualFrame> frames;
};

struct ImuMeasurement {
  std::int64_t timestamp_ns = 0;
  Eigen::Vector3d accel = Eigen::Vector3d::Zero();  // m/s^2, body frame
  Eigen::Vector3d gyro = Eigen::Vector3d::Zero();   // rad/s, body frame
};

struct ImuEdge {
  EdgeId id;
  VertexId from;
  VertexId to;
  std::vector<ImuMeasurement> measurements;
};

struct LoopClosureEdge {
  EdgeId id;
  VertexId from;
  VertexId to;
  geometry::Se3Transform t_from_to;
  Eigen::Matrix<double, 6, 6> covariance = Eigen::Matrix<double, 6, 6>::Identity();
  double switch_weight = 1.0;
};

enum class LandmarkQuality : std::uint8_t { kUnknown = 0, kGood = 1, kBad = 2 };

struct KeypointObservation {
  VertexId vertex;
  std::uint32_t frame = 0;
  std::uint32_t keypoint = 0;

  friend bool operator==(const KeypointObservation&,
                         const KeypointObservation&) = default;
  friend auto operator<=>(const KeypointObservation&,
                          const KeypointObservation&) = default;
};

struct Landmark {
  LandmarkId id;
  VertexId storing_vertex;
  // Position in the storing vertex's IMU frame; the global position is always
  // derived, never cached.
  Eigen::Vector3d p_body = Eigen::Vector3d::Zero();
  LandmarkQuality quality = LandmarkQuality::kUnknown;
  std::vector<KeypointObservation> observers;
};

struct Mission {
  MissionId id;
  geometry::Se3Transform t_global_mission;
  bool baseframe_known = false;
  VertexId root_vertex;
  geometry::CameraRig rig;
};

// Container of missions, vertices, edges and landmarks: the unit every
// console command operates on. Single writer, multiple concurrent readers
// between mutations.
class ViMap {
 public:
  ViMap() = default;

  // --- construction ---------------------------------------------------------
  MissionId add_mission(const Mission& mission);
  VertexId add_vertex(const Vertex& vertex);
  EdgeId add_imu_edge(const ImuEdge& edge);
  EdgeId add_loop_closure_edge(const LoopClosureEdge& edge);
  LandmarkId store_landmark(const Landmark& landmark);
  // Associates an existing keypoint with an existing landmark and registers
  // the back-reference on the landmark.
  void add_observation(const VertexId& vertex, std::uint32_t frame,
                       std::uint32_t keypoint, const LandmarkId& landmark);

  void remove_landmark(const LandmarkId& id);
  void remove_loop_closure_edge(const EdgeId& id);

  // --- queries --------------------------------------------------------------
  [[nodiscard]] bool has_mission(const MissionId& id) const { return missions_.count(id) > 0; }
  [[nodiscard]] bool has_vertex(const VertexId& id) const { return vertices_.count(id) > 0; }
  [[nodiscard]] bool has_landmark(const LandmarkId& id) const { return landmarks_.count(id) > 0; }

  [[nodiscard]] const Mission& mission(const MissionId& id) const;
  [[nodiscard]] Mission& mission(const MissionId& id);
  [[nodiscard]] const Vertex& vertex(const VertexId& id) const;
  [[nodiscard]] Vertex& vertex(const VertexId& id);
  [[nodiscard]] const Landmark& landmark(const LandmarkId& id) const;
  [[nodiscard]] Landmark& landmark(const LandmarkId& id);
  [[nodiscard]] const ImuEdge& imu_edge(const EdgeId& id) const;
  [[nodiscard]] ImuEdge& imu_edge(const EdgeId& id);
  [[nodiscard]] const LoopClosureEdge& loop_closure_edge(const EdgeId& id) const;

  [[nodiscard]] const std::map<MissionId, Mission>& missions() const { return missions_; }
  [[nodiscard]] const std::map<VertexId, Vertex>& vertices() const { return vertices_; }
  [[nodiscard]] const std::map<EdgeId, ImuEdge>& imu_edges() const { return imu_edges_; }
  [[nodiscard]] const std::map<EdgeId, LoopClosureEdge>& loop_closure_edges() const {
    return lc_edges_;
  }
  [[nodiscard]] const std::map<LandmarkId, Landmark>& landmarks() const { return landmarks_; }

  // Vertices of a mission in chain order, starting at the root.
  [[nodiscard]] std::vector<VertexId> mission_vertices(const MissionId& id) const;
  [[nodiscard]] std::optional<EdgeId> outgoing_imu_edge(const VertexId& id) const;
  [[nodiscard]] std::optional<EdgeId> incoming_imu_edge(const VertexId& id) const;

  // --- frame transforms -----------------------------------------------------
  [[nodiscard]] geometry::Se3Transform get_vertex_t_global_imu(const VertexId& id) const;
  [[nodiscard]] Eigen::Vector3d get_vertex_p_global(const VertexId& id) const;
  [[nodiscard]] Eigen::Vector3d get_landmark_p_global(const LandmarkId& id) const;
  // Landmark position in the storing mission's frame.
  [[nodiscard]] Eigen::Vector3d get_landmark_p_mission(const LandmarkId& id) const;

  // --- keyframing support ---------------------------------------------------
  // Removes a non-root, non-terminal vertex by splicing its two IMU edges
  // (shared boundary sample deduplicated). Landmark handling is the caller's
  // responsibility; observations referencing this vertex must be gone.
  void splice_out_vertex(const VertexId& id);

  // --- resources --------------------------------------------------------
  [[nodiscard]] ResourceStore& resources() { return resources_; }
  [[nodiscard]] const ResourceStore& resources() const { return resources_; }

  // --- integrity --------------------------------------------------------
  // Full referential-integrity audit in O(map size); returns problem
  // descriptions, empty when the map is consistent.
  [[nodiscard]] std::vector<std::string> audit() const;
  void check_consistency() const;  // throws InvariantError on audit findings

  [[nodiscard]] bool structurally_equal(const ViMap& other) const;

  friend ViMap merge_maps(const ViMap& a, const ViMap& b);

 private:
  std::map<MissionId, Mission> missions_;
  std::map<VertexId, Vertex> vertices_;
  std::map<EdgeId, ImuEdge> imu_edges_;
  std::map<EdgeId, LoopClosureEdge> lc_edges_;
  std::map<LandmarkId, Landmark> landmarks_;
  std::map<VertexId, EdgeId> outgoing_;
  std::map<VertexId, EdgeId> incoming_;
  ResourceStore resources_;
};

// Union of two maps with disjoint mission ids; any id collision is treated as
// corruption and throws.
ViMap merge_maps(const ViMap& a, const ViMap& b);

}  // namespace atlas::vimap
