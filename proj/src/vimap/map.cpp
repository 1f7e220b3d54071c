#include "atlas/vimap/map.hpp"

#include <algorithm>
#include <set>

#include "atlas/common/check.hpp"

namespace atlas::vimap {

namespace {

template <typename Map, typename Id>
const typename Map::mapped_type& find_or_throw(const Map& map, const Id& id,
                                               const char* what) {
  auto it = map.find(id);
  if (it == map.end()) {
    throw InvariantError(std::string("missing ") + what + ": " + id.hex());
  }
  return it->second;
}

template <typename Map, typename Id>
typename Map::mapped_type& find_or_throw(Map& map, const Id& id,
                                         const char* what) {
  auto it = map.find(id);
  if (it == map.end()) {
    throw InvariantError(std::string("missing ") + what + ": " + id.hex());
  }
  return it->second;
}

}  // namespace

MissionId ViMap::add_mission(const Mission& mission) {
  ATLAS_CHECK_MSG(mission.id.is_set(), "mission id must be set");
  if (missions_.count(mission.id) > 0) {
    throw InvariantError("duplicate mission id: " + mission.id.hex());
  }
  missions_.emplace(mission.id, mission);
  return mission.id;
}

VertexId ViMap::add_vertex(const Vertex& vertex) {
  ATLAS_CHECK_MSG(vertex.id.is_set(), "vertex id must be set");
  if (vertices_.count(vertex.id) > 0) {
    throw InvariantError("duplicate vertex id: " + vertex.id.hex());
  }
  const Mission& m = find_or_throw(missions_, vertex.mission, "mission");
  ATLAS_CHECK_MSG(vertex.frames.size() == m.rig.size(),
                  "vertex frame count must match the mission camera rig");
  for (const VisualFrame& frame : vertex.frames) {
    ATLAS_CHECK(frame.keypoints.size() == frame.descriptors.size());
    ATLAS_CHECK(frame.keypoints.size() == frame.observed_landmarks.size());
  }
  vertices_.emplace(vertex.id, vertex);
  if (!m.root_vertex.is_set()) {
    missions_.at(vertex.mission).root_vertex = vertex.id;
  }
  return vertex.id;
}

EdgeId ViMap::add_imu_edge(const ImuEdge& edge) {
  ATLAS_CHECK_MSG(edge.id.is_set(), "edge id must be set");
  if (imu_edges_.count(edge.id) > 0 || lc_edges_.count(edge.id) > 0) {
    throw InvariantError("duplicate edge id: " + edge.id.hex());
  }
  const Vertex& from = find_or_throw(vertices_, edge.from, "vertex");
  const Vertex& to = find_or_throw(vertices_, edge.to, "vertex");
  if (from.mission != to.mission) {
    throw InvariantError("IMU edge endpoints must share a mission");
  }
  if (to.timestamp_ns <= from.timestamp_ns) {
    throw InvariantError("IMU edge target timestamp must increase");
  }
  if (edge.measurements.size() < 2) {
    throw InvariantError("IMU edge needs at least 2 measurements");
  }
  for (std::size_t i = 1; i < edge.measurements.size(); ++i) {
    if (edge.measurements[i].timestamp_ns <= edge.measurements[i - 1].timestamp_ns) {
      throw InvariantError("IMU measurement timestamps must strictly increase");
    }
  }
  if (edge.measurements.front().timestamp_ns != from.timestamp_ns ||
      edge.measurements.back().timestamp_ns != to.timestamp_ns) {
    throw InvariantError("IMU measurements must span the vertex interval");
  }
  if (outgoing_.count(edge.from) > 0) {
    throw InvariantError("vertex already has an outgoing IMU edge");
  }
  if (incoming_.count(edge.to) > 0) {
    throw InvariantError("vertex already has an incoming IMU edge");
  }
  imu_edges_.emplace(edge.id, edge);
  outgoing_.emplace(edge.from, edge.id);
  incoming_.emplace(edge.to, edge.id);
  return edge.id;
}

EdgeId ViMap::add_loop_closure_edge(const LoopClosureEdge& edge) {
  ATLAS_CHECK_MSG(edge.id.is_set(), "edge id must be set");
  if (imu_edges_.count(edge.id) > 0 || lc_edges_.count(edge.id) > 0) {
    throw InvariantError("duplicate edge id: " + edge.id.hex());
  }
  find_or_throw(vertices_, edge.from, "vertex");
  find_or_throw(vertices_, edge.to, "vertex");
  const Eigen::Matrix<double, 6, 6> sym =
      0.5 * (edge.covariance + edge.covariance.transpose());
  if ((edge.covariance - sym).norm() > 1e-9 ||
      Eigen::LLT<Eigen::Matrix<double, 6, 6>>(sym).info() != Eigen::Success) {
    throw InvariantError("loop-closure covariance must be symmetric positive definite");
  }
  ATLAS_CHECK(edge.switch_weight >= 0.0 && edge.switch_weight <= 1.0);
  lc_edges_.emplace(edge.id, edge);
  return edge.id;
}

LandmarkId ViMap::store_landmark(const Landmark& landmark) {
  ATLAS_CHECK_MSG(landmark.id.is_set(), "landmark id must be set");
  if (landmarks_.count(landmark.id) > 0) {
    throw InvariantError("duplicate landmark id: " + landmark.id.hex());
  }
  find_or_throw(vertices_, landmark.storing_vertex, "vertex");
  ATLAS_CHECK_MSG(landmark.observers.empty(),
                  "observers are registered through add_observation");
  landmarks_.emplace(landmark.id, landmark);
  return landmark.id;
}

void ViMap::add_observation(const VertexId& vertex_id, std::uint32_t frame,
                            std::uint32_t keypoint, const LandmarkId& landmark_id) {
  Vertex& v = find_or_throw(vertices_, vertex_id, "vertex");
  Landmark& lm = find_or_throw(landmarks_, landmark_id, "landmark");
  if (frame >= v.frames.size() || keypoint >= v.frames[frame].size()) {
    throw InvariantError("observation references a nonexistent keypoint");
  }
  LandmarkId& slot = v.frames[frame].observed_landmarks[keypoint];
  if (slot.is_set()) {
    throw InvariantError("keypoint already observes a landmark");
  }
  slot = landmark_id;
  lm.observers.push_back({vertex_id, frame, keypoint});
}

void ViMap::remove_landmark(const LandmarkId& id) {
  Landmark& lm = find_or_throw(landmarks_, id, "landmark");
  for (const KeypointObservation& obs : lm.observers) {
    auto it = vertices_.find(obs.vertex);
    if (it == vertices_.end()) continue;
    it->second.frames[obs.frame].observed_landmarks[obs.keypoint] = LandmarkId();
  }
  landmarks_.erase(id);
}

void ViMap::remove_loop_closure_edge(const EdgeId& id) {
  if (lc_edges_.erase(id) == 0) {
    throw InvariantError("missing loop-closure edge: " + id.hex());
  }
}

const Mission& ViMap::mission(const MissionId& id) const {
  return find_or_throw(missions_, id, "mission");
}
Mission& ViMap::mission(const MissionId& id) {
  return find_or_throw(missions_, id, "mission");
}
const Vertex& ViMap::vertex(const VertexId& id) const {
  return find_or_throw(vertices_, id, "vertex");
}
Vertex& ViMap::vertex(const VertexId& id) {
  return find_or_throw(vertices_, id, "vertex");
}
const Landmark& ViMap::landmark(const LandmarkId& id) const {
  return find_or_throw(landmarks_, id, "landmark");
}
Landmark& ViMap::landmark(const LandmarkId& id) {
  return find_or_throw(landmarks_, id, "landmark");
}
const ImuEdge& ViMap::imu_edge(const EdgeId& id) const {
  return find_or_throw(imu_edges_, id, "IMU edge");
}
ImuEdge& ViMap::imu_edge(const EdgeId& id) {
  return find_or_throw(imu_edges_, id, "IMU edge");
}
const LoopClosureEdge& ViMap::loop_closure_edge(const EdgeId& id) const {
  return find_or_throw(lc_edges_, id, "loop-closure edge");
}

std::vector<VertexId> ViMap::mission_vertices(const MissionId& id) const {
  const Mission& m = find_or_throw(missions_, id, "mission");
  std::vector<VertexId> chain;
  VertexId current = m.root_vertex;
  while (current.is_set()) {
    chain.push_back(current);
    auto it = outgoing_.find(current);
    if (it == outgoing_.end()) break;
    current = imu_edges_.at(it->second).to;
  }
  return chain;
}

std::optional<EdgeId> ViMap::outgoing_imu_edge(const VertexId& id) const {
  auto it = outgoing_.find(id);
  if (it == outgoing_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> ViMap::incoming_imu_edge(const VertexId& id) const {
  auto it = incoming_.find(id);
  if (it == incoming_.end()) return std::nullopt;
  return it->second;
}

geometry::Se3Transform ViMap::get_vertex_t_global_imu(const VertexId& id) const {
  const Vertex& v = find_or_throw(vertices_, id, "vertex");
  const Mission& m = find_or_throw(missions_, v.mission, "mission");
  return m.t_global_mission * v.t_mission_imu;
}

Eigen::Vector3d ViMap::get_vertex_p_global(const VertexId& id) const {
  return get_vertex_t_global_imu(id).translation();
}

Eigen::Vector3d ViMap::get_landmark_p_global(const LandmarkId& id) const {
  const Landmark& lm = find_or_throw(landmarks_, id, "landmark");
  return get_vertex_t_global_imu(lm.storing_vertex) * lm.p_body;
}

Eigen::Vector3d ViMap::get_landmark_p_mission(const LandmarkId& id) const {
  const Landmark& lm = find_or_throw(landmarks_, id, "landmark");
  const Vertex& v = find_or_throw(vertices_, lm.storing_vertex, "vertex");
  return v.t_mission_imu * lm.p_body;
}

void ViMap::splice_out_vertex(const VertexId& id) {
  const Vertex& v = find_or_throw(vertices_, id, "vertex");
  auto in_it = incoming_.find(id);
  auto out_it = outgoing_.find(id);
  if (in_it == incoming_.end() || out_it == outgoing_.end()) {
    throw InvariantError("cannot splice out a chain endpoint");
  }
  for (const VisualFrame& frame : v.frames) {
    for (const LandmarkId& lm : frame.observed_landmarks) {
      if (lm.is_set()) {
        throw InvariantError("splice_out_vertex: vertex still has observations");
      }
    }
  }

  const EdgeId in_edge_id = in_it->second;
  const EdgeId out_edge_id = out_it->second;
  ImuEdge& in_edge = imu_edges_.at(in_edge_id);
  const ImuEdge& out_edge = imu_edges_.at(out_edge_id);

  // The boundary sample is carried by both edges; keep one copy.
  in_edge.measurements.insert(in_edge.measurements.end(),
                              out_edge.measurements.begin() + 1,
                              out_edge.measurements.end());
  in_edge.to = out_edge.to;
  incoming_[out_edge.to] = in_edge_id;
  incoming_.erase(id);
  outgoing_.erase(id);
  imu_edges_.erase(out_edge_id);
  vertices_.erase(id);
}

std::vector<std::string> ViMap::audit() const {
  std::vector<std::string> problems;
  auto complain = [&problems](const std::string& msg) { problems.push_back(msg); };

  std::set<VertexId> chained;
  for (const auto& [mission_id, m] : missions_) {
    if (!m.root_vertex.is_set()) {
      continue;  // empty mission is legal
    }
    if (vertices_.count(m.root_vertex) == 0) {
      complain("mission " + mission_id.hex() + " root vertex missing");
      continue;
    }
    if (incoming_.count(m.root_vertex) > 0) {
      complain("mission " + mission_id.hex() + " root vertex has an incoming edge");
    }
    std::int64_t last_ts = std::numeric_limits<std::int64_t>::min();
    for (const VertexId& vid : mission_vertices(mission_id)) {
      const Vertex& v = vertices_.at(vid);
      if (v.mission != mission_id) {
        complain("vertex " + vid.hex() + " chained into foreign mission");
      }
      if (v.timestamp_ns <= last_ts) {
        complain("vertex " + vid.hex() + " breaks timestamp monotonicity");
      }
      last_ts = v.timestamp_ns;
      if (!chained.insert(vid).second) {
        complain("vertex " + vid.hex() + " appears in two chains");
      }
    }
  }
  for (const auto& [vid, v] : vertices_) {
    if (missions_.count(v.mission) == 0) {
      complain("vertex " + vid.hex() + " references missing mission");
      continue;
    }
    if (chained.count(vid) == 0) {
      complain("vertex " + vid.hex() + " not reachable from its mission root");
    }
    const geometry::CameraRig& rig = missions_.at(v.mission).rig;
    if (v.frames.size() != rig.size()) {
      complain("vertex " + vid.hex() + " frame count mismatches rig");
    }
    for (std::size_t f = 0; f < v.frames.size(); ++f) {
      const VisualFrame& frame = v.frames[f];
      if (frame.descriptors.size() != frame.keypoints.size() ||
          frame.observed_landmarks.size() != frame.keypoints.size()) {
        complain("vertex " + vid.hex() + " has ragged frame arrays");
        continue;
      }
      for (std::size_t k = 0; k < frame.observed_landmarks.size(); ++k) {
        const LandmarkId& lm_id = frame.observed_landmarks[k];
        if (!lm_id.is_set()) continue;
        auto lm_it = landmarks_.find(lm_id);
        if (lm_it == landmarks_.end()) {
          complain("observation of missing landmark " + lm_id.hex());
          continue;
        }
        const KeypointObservation expected{vid, static_cast<std::uint32_t>(f),
                                           static_cast<std::uint32_t>(k)};
        if (std::find(lm_it->second.observers.begin(), lm_it->second.observers.end(),
                      expected) == lm_it->second.observers.end()) {
          complain("landmark " + lm_id.hex() + " misses back-reference from vertex " +
                   vid.hex());
        }
      }
    }
  }
  for (const auto& [eid, e] : imu_edges_) {
    if (vertices_.count(e.from) == 0 || vertices_.count(e.to) == 0) {
      complain("IMU edge " + eid.hex() + " has dangling endpoint");
    }
  }
  for (const auto& [eid, e] : lc_edges_) {
    if (vertices_.count(e.from) == 0 || vertices_.count(e.to) == 0) {
      complain("loop-closure edge " + eid.hex() + " has dangling endpoint");
    }
  }
  for (const auto& [lm_id, lm] : landmarks_) {
    if (vertices_.count(lm.storing_vertex) == 0) {
      complain("landmark " + lm_id.hex() + " has missing storing vertex");
    }
    std::set<KeypointObservation> seen;
    for (const KeypointObservation& obs : lm.observers) {
      if (!seen.insert(obs).second) {
        complain("landmark " + lm_id.hex() + " lists duplicate observer");
      }
      auto v_it = vertices_.find(obs.vertex);
      if (v_it == vertices_.end()) {
        complain("landmark " + lm_id.hex() + " observer vertex missing");
        continue;
      }
      const Vertex& v = v_it->second;
      if (obs.frame >= v.frames.size() ||
          obs.keypoint >= v.frames[obs.frame].size()) {
        complain("landmark " + lm_id.hex() + " observer keypoint out of range");
        continue;
      }
      if (v.frames[obs.frame].observed_landmarks[obs.keypoint] != lm_id) {
        complain("landmark " + lm_id.hex() + " observer does not point back");
      }
    }
  }
  return problems;
}

void ViMap::check_consistency() const {
  const std::vector<std::string> problems = audit();
  if (!problems.empty()) {
    std::string msg = "map audit failed:";
    for (const std::string& p : problems) {
      msg += "\n  " + p;
    }
    throw InvariantError(msg);
  }
}

namespace {

bool frames_equal(const VisualFrame& a, const VisualFrame& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.keypoints[i].uv != b.keypoints[i].uv ||
        a.keypoints[i].sigma != b.keypoints[i].sigma ||
        a.descriptors[i] != b.descriptors[i] ||
        a.observed_landmarks[i] != b.observed_landmarks[i]) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool ViMap::structurally_equal(const ViMap& other) const {
  if (missions_.size() != other.missions_.size() ||
      vertices_.size() != other.vertices_.size() ||
      imu_edges_.size() != other.imu_edges_.size() ||
      lc_edges_.size() != other.lc_edges_.size() ||
      landmarks_.size() != other.landmarks_.size()) {
    return false;
  }
  for (const auto& [id, m] : missions_) {
    auto it = other.missions_.find(id);
    if (it == other.missions_.end()) return false;
    const Mission& o = it->second;
    if (!(m.t_global_mission == o.t_global_mission) ||
        m.baseframe_known != o.baseframe_known || m.root_vertex != o.root_vertex ||
        m.rig != o.rig) {
      return false;
    }
  }
  for (const auto& [id, v] : vertices_) {
    auto it = other.vertices_.find(id);
    if (it == other.vertices_.end()) return false;
    const Vertex& o = it->second;
    if (v.mission != o.mission || v.timestamp_ns != o.timestamp_ns ||
        !(v.t_mission_imu == o.t_mission_imu) || v.velocity != o.velocity ||
        v.gyro_bias != o.gyro_bias || v.accel_bias != o.accel_bias ||
        v.frames.size() != o.frames.size()) {
      return false;
    }
    for (std::size_t f = 0; f < v.frames.size(); ++f) {
      if (!frames_equal(v.frames[f], o.frames[f])) return false;
    }
  }
  for (const auto& [id, e] : imu_edges_) {
    auto it = other.imu_edges_.find(id);
    if (it == other.imu_edges_.end()) return false;
    const ImuEdge& o = it->second;
    if (e.from != o.from || e.to != o.to ||
        e.measurements.size() != o.measurements.size()) {
      return false;
    }
    for (std::size_t i = 0; i < e.measurements.size(); ++i) {
      if (e.measurements[i].timestamp_ns != o.measurements[i].timestamp_ns ||
          e.measurements[i].accel != o.measurements[i].accel ||
          e.measurements[i].gyro != o.measurements[i].gyro) {
        return false;
      }
    }
  }
  for (const auto& [id, e] : lc_edges_) {
    auto it = other.lc_edges_.find(id);
    if (it == other.lc_edges_.end()) return false;
    const LoopClosureEdge& o = it->second;
    if (e.from != o.from || e.to != o.to || !(e.t_from_to == o.t_from_to) ||
        e.covariance != o.covariance || e.switch_weight != o.switch_weight) {
      return false;
    }
  }
  for (const auto& [id, lm] : landmarks_) {
    auto it = other.landmarks_.find(id);
    if (it == other.landmarks_.end()) return false;
    const Landmark& o = it->second;
    if (lm.storing_vertex != o.storing_vertex || lm.p_body != o.p_body ||
        lm.quality != o.quality || lm.observers != o.observers) {
      return false;
    }
  }
  return resources_.structurally_equal(other.resources_);
}

ViMap merge_maps(const ViMap& a, const ViMap& b) {
  ViMap out = a;
  for (const auto& [id, m] : b.missions_) {
    if (out.missions_.count(id) > 0) {
      throw InvariantError("mission id collision on merge: " + id.hex());
    }
    out.missions_.emplace(id, m);
  }
  for (const auto& [id, v] : b.vertices_) {
    if (out.vertices_.count(id) > 0) {
      throw InvariantError("vertex id collision on merge: " + id.hex());
    }
    out.vertices_.emplace(id, v);
  }
  for (const auto& [id, e] : b.imu_edges_) {
    if (out.imu_edges_.count(id) > 0 || out.lc_edges_.count(id) > 0) {
      throw InvariantError("edge id collision on merge: " + id.hex());
    }
    out.imu_edges_.emplace(id, e);
    out.outgoing_.emplace(e.from, id);
    out.incoming_.emplace(e.to, id);
  }
  for (const auto& [id, e] : b.lc_edges_) {
    if (out.imu_edges_.count(id) > 0 || out.lc_edges_.count(id) > 0) {
      throw InvariantError("edge id collision on merge: " + id.hex());
    }
    out.lc_edges_.emplace(id, e);
  }
  for (const auto& [id, lm] : b.landmarks_) {
    if (out.landmarks_.count(id) > 0) {
      throw InvariantError("landmark id collision on merge: " + id.hex());
    }
    out.landmarks_.emplace(id, lm);
  }
  out.resources_.merge_from(b.resources_);
  return out;
}

}  // namespace atlas::vimap
