#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ipp {

using NodeId = std::int32_t;
inline constexpr NodeId kInvalidNode = -1;

/// Boolean occupancy grid; true cells are navigable water.
struct OccupancyMask {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> cells;  // row-major, rows*cols

  bool at(int r, int c) const { return cells[static_cast<std::size_t>(r) * cols + c] != 0; }
  bool in_bounds(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }
  int count_navigable() const;

  /// Parses an ASCII grid of '0'/'1' characters, one row per line.
  static OccupancyMask from_ascii(const std::string& text);
  static OccupancyMask from_file(const std::string& path);
};

/// Linear georeferencing: cell centers interpolated inside a lat/lon
/// bounding box, with a fixed planar cell area.
struct GeoReference {
  double lat_min = 0.0, lat_max = 0.0;
  double lon_min = 0.0, lon_max = 0.0;
  double cell_area = 25.0;  // m^2 per cell
  int rows = 0;
  int cols = 0;

  double cell_side() const;
  /// Center of cell (r, c). Row 0 is the northern (lat_max) edge.
  std::pair<double, double> cell_center(int r, int c) const;
};

struct GraphEdge {
  NodeId to;
  double length;  // meters
};

/// Shortest-path result. `reachable == false` means the target lies in a
/// different connected component; nodes/length are then empty/infinite.
struct Path {
  bool reachable = false;
  std::vector<NodeId> nodes;
  double length = 0.0;
};

/// 8-connected navigation graph over the navigable cells of a mask.
/// Immutable after construction apart from named attribute maps.
class GridGraph {
 public:
  static GridGraph build_from_mask(const OccupancyMask& mask, const GeoReference& geo);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double cell_side() const { return cell_side_; }
  const GeoReference& geo() const { return geo_; }

  std::size_t node_count() const { return node_rc_.size(); }
  bool valid(NodeId n) const { return n >= 0 && static_cast<std::size_t>(n) < node_rc_.size(); }
  std::pair<int, int> node_rc(NodeId n) const { return node_rc_[n]; }
  NodeId node_at(int r, int c) const;  // kInvalidNode if blocked / out of bounds

  const std::vector<GraphEdge>& edges(NodeId n) const;
  std::vector<NodeId> neighbors(NodeId n) const;  // ascending NodeId

  /// Dijkstra path with ties broken toward the lexicographically smallest
  /// node sequence.
  Path shortest_path(NodeId from, NodeId to) const;
  /// Single-source distances; unreachable nodes get +infinity.
  std::vector<double> dijkstra_distances(NodeId src) const;

  std::pair<double, double> node_to_latlon(NodeId n) const;
  /// Snaps to the nearest navigable cell center (lower NodeId wins ties).
  /// Throws std::out_of_range for coordinates outside the bounding box.
  NodeId latlon_to_node(double lat, double lon) const;

  /// Named per-node scalar attributes (ground truth fields and the like).
  std::vector<double>& attribute(const std::string& name);
  const std::vector<double>& attribute(const std::string& name) const;
  bool has_attribute(const std::string& name) const;

 private:
  int rows_ = 0, cols_ = 0;
  double cell_side_ = 0.0;
  GeoReference geo_;
  std::vector<std::pair<int, int>> node_rc_;
  std::vector<NodeId> cell_to_node_;  // rows*cols, kInvalidNode where blocked
  std::vector<std::vector<GraphEdge>> adj_;
  std::unordered_map<std::string, std::vector<double>> attributes_;
};

}  // namespace ipp
