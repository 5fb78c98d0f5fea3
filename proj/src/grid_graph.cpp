#include "ipp/grid_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace ipp {

namespace {
constexpr double kTieEps = 1e-9;
}

int OccupancyMask::count_navigable() const {
  int n = 0;
  for (auto c : cells) n += (c != 0);
  return n;
}

OccupancyMask OccupancyMask::from_ascii(const std::string& text) {
  OccupancyMask m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty()) continue;
    if (m.cols == 0) m.cols = static_cast<int>(line.size());
    if (static_cast<int>(line.size()) != m.cols)
      throw std::invalid_argument("mask: ragged row " + std::to_string(m.rows));
    for (char ch : line) {
      if (ch != '0' && ch != '1')
        throw std::invalid_argument(std::string("mask: unexpected character '") + ch + "'");
      m.cells.push_back(ch == '1');
    }
    ++m.rows;
  }
  if (m.rows < 1 || m.cols < 1) throw std::invalid_argument("mask: empty grid");
  if (m.count_navigable() == 0) throw std::invalid_argument("mask: no navigable cells");
  return m;
}

OccupancyMask OccupancyMask::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("mask: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_ascii(buf.str());
}

double GeoReference::cell_side() const { return std::sqrt(cell_area); }

std::pair<double, double> GeoReference::cell_center(int r, int c) const {
  const double fr = (r + 0.5) / rows;
  const double fc = (c + 0.5) / cols;
  return {lat_max - fr * (lat_max - lat_min), lon_min + fc * (lon_max - lon_min)};
}

GridGraph GridGraph::build_from_mask(const OccupancyMask& mask, const GeoReference& geo) {
  if (geo.rows != mask.rows || geo.cols != mask.cols)
    throw std::invalid_argument("geo reference dimensions do not match mask");
  if (geo.cell_area <= 0.0) throw std::invalid_argument("cell_area must be positive");
  if (mask.count_navigable() == 0) throw std::invalid_argument("mask has no navigable cells");

  GridGraph g;
  g.rows_ = mask.rows;
  g.cols_ = mask.cols;
  g.geo_ = geo;
  g.cell_side_ = geo.cell_side();
  g.cell_to_node_.assign(static_cast<std::size_t>(mask.rows) * mask.cols, kInvalidNode);

  for (int r = 0; r < mask.rows; ++r)
    for (int c = 0; c < mask.cols; ++c)
      if (mask.at(r, c)) {
        g.cell_to_node_[static_cast<std::size_t>(r) * mask.cols + c] =
            static_cast<NodeId>(g.node_rc_.size());
        g.node_rc_.emplace_back(r, c);
      }

  const double s = g.cell_side_;
  const double d = s * std::sqrt(2.0);
  g.adj_.resize(g.node_rc_.size());
  for (NodeId n = 0; n < static_cast<NodeId>(g.node_rc_.size()); ++n) {
    const auto [r, c] = g.node_rc_[n];
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const int nr = r + dr, nc = c + dc;
        if (!mask.in_bounds(nr, nc) || !mask.at(nr, nc)) continue;
        if (dr != 0 && dc != 0) {
          // no corner-cutting: both orthogonal cells must be navigable
          if (!mask.at(r, nc) || !mask.at(nr, c)) continue;
        }
        const NodeId m = g.cell_to_node_[static_cast<std::size_t>(nr) * mask.cols + nc];
        g.adj_[n].push_back({m, (dr != 0 && dc != 0) ? d : s});
      }
    }
    std::sort(g.adj_[n].begin(), g.adj_[n].end(),
              [](const GraphEdge& a, const GraphEdge& b) { return a.to < b.to; });
  }
  return g;
}

NodeId GridGraph::node_at(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) return kInvalidNode;
  return cell_to_node_[static_cast<std::size_t>(r) * cols_ + c];
}

const std::vector<GraphEdge>& GridGraph::edges(NodeId n) const {
  if (!valid(n)) throw std::out_of_range("invalid NodeId " + std::to_string(n));
  return adj_[n];
}

std::vector<NodeId> GridGraph::neighbors(NodeId n) const {
  const auto& e = edges(n);
  std::vector<NodeId> out;
  out.reserve(e.size());
  for (const auto& edge : e) out.push_back(edge.to);
  return out;
}

std::vector<double> GridGraph::dijkstra_distances(NodeId src) const {
  if (!valid(src)) throw std::out_of_range("invalid NodeId " + std::to_string(src));
  std::vector<double> dist(node_count(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    for (const auto& e : adj_[u]) {
      const double nd = d + e.length;
      if (nd < dist[e.to]) {
        dist[e.to] = nd;
        pq.emplace(nd, e.to);
      }
    }
  }
  return dist;
}

Path GridGraph::shortest_path(NodeId from, NodeId to) const {
  if (!valid(from) || !valid(to)) throw std::out_of_range("invalid NodeId");
  Path p;
  if (from == to) {
    p.reachable = true;
    p.nodes = {from};
    p.length = 0.0;
    return p;
  }
  // Distances toward the target, then a greedy lowest-NodeId descent gives
  // the lexicographically smallest shortest node sequence.
  const auto dist_to = dijkstra_distances(to);
  if (!std::isfinite(dist_to[from])) return p;
  p.reachable = true;
  p.length = dist_to[from];
  NodeId u = from;
  p.nodes.push_back(u);
  while (u != to) {
    NodeId next = kInvalidNode;
    for (const auto& e : adj_[u]) {  // ascending NodeId
      if (std::abs(dist_to[u] - (e.length + dist_to[e.to])) <= kTieEps * std::max(1.0, dist_to[u])) {
        next = e.to;
        break;
      }
    }
    u = next;
    p.nodes.push_back(u);
  }
  return p;
}

std::pair<double, double> GridGraph::node_to_latlon(NodeId n) const {
  if (!valid(n)) throw std::out_of_range("invalid NodeId " + std::to_string(n));
  const auto [r, c] = node_rc_[n];
  return geo_.cell_center(r, c);
}

NodeId GridGraph::latlon_to_node(double lat, double lon) const {
  const auto lo = std::min(geo_.lat_min, geo_.lat_max);
  const auto hi = std::max(geo_.lat_min, geo_.lat_max);
  if (lat < lo || lat > hi || lon < std::min(geo_.lon_min, geo_.lon_max) ||
      lon > std::max(geo_.lon_min, geo_.lon_max))
    throw std::out_of_range("coordinate outside grid bounding box");
  // fractional cell coordinates
  const double fr = (geo_.lat_max - lat) / (geo_.lat_max - geo_.lat_min) * rows_ - 0.5;
  const double fc = (lon - geo_.lon_min) / (geo_.lon_max - geo_.lon_min) * cols_ - 0.5;
  NodeId best = kInvalidNode;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (NodeId n = 0; n < static_cast<NodeId>(node_rc_.size()); ++n) {
    const auto [r, c] = node_rc_[n];
    const double dr = fr - r, dc = fc - c;
    const double d2 = dr * dr + dc * dc;
    if (d2 < best_d2 - 1e-12) {
      best_d2 = d2;
      best = n;
    }
  }
  return best;
}

std::vector<double>& GridGraph::attribute(const std::string& name) {
  auto it = attributes_.find(name);
  if (it == attributes_.end())
    it = attributes_.emplace(name, std::vector<double>(node_count(), 0.0)).first;
  return it->second;
}

const std::vector<double>& GridGraph::attribute(const std::string& name) const {
  auto it = attributes_.find(name);
  if (it == attributes_.end()) throw std::out_of_range("no attribute '" + name + "'");
  return it->second;
}

bool GridGraph::has_attribute(const std::string& name) const {
  return attributes_.count(name) != 0;
}

}  // namespace ipp
