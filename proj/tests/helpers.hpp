#pragma once

#include <string>
#include <vector>

#include "ipp/grid_graph.hpp"
#include "ipp/rng.hpp"

namespace test {

inline ipp::GeoReference default_geo(int rows, int cols, double cell_area = 25.0) {
  ipp::GeoReference geo;
  geo.lat_min = 0.0;
  geo.lat_max = 0.01;
  geo.lon_min = 0.0;
  geo.lon_max = 0.01;
  geo.cell_area = cell_area;
  geo.rows = rows;
  geo.cols = cols;
  return geo;
}

inline ipp::GridGraph make_grid(const std::string& ascii, double cell_area = 25.0) {
  const auto mask = ipp::OccupancyMask::from_ascii(ascii);
  return ipp::GridGraph::build_from_mask(mask, default_geo(mask.rows, mask.cols, cell_area));
}

inline std::string full_grid_ascii(int rows, int cols) {
  std::string s;
  for (int r = 0; r < rows; ++r) {
    s.append(cols, '1');
    s.push_back('\n');
  }
  return s;
}

// random mask with a guaranteed navigable cell; not necessarily connected
inline std::string random_mask_ascii(int rows, int cols, ipp::Rng& rng, double p_navigable = 0.7) {
  std::string s;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) s.push_back(rng.uniform() < p_navigable ? '1' : '0');
    s.push_back('\n');
  }
  const std::size_t first = s.find_first_of("01");
  s[first] = '1';
  return s;
}

// keeps only the connected component of the first navigable cell
// (8-connectivity with the same no-corner-cutting rule as the graph)
inline std::string largest_component_ascii(const std::string& ascii) {
  const auto mask = ipp::OccupancyMask::from_ascii(ascii);
  const auto g = ipp::GridGraph::build_from_mask(mask, default_geo(mask.rows, mask.cols));
  std::vector<char> seen(g.node_count(), 0);
  std::vector<ipp::NodeId> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const ipp::NodeId u = stack.back();
    stack.pop_back();
    for (const auto& e : g.edges(u))
      if (!seen[e.to]) {
        seen[e.to] = 1;
        stack.push_back(e.to);
      }
  }
  std::string out;
  for (int r = 0; r < mask.rows; ++r) {
    for (int c = 0; c < mask.cols; ++c) {
      const ipp::NodeId n = g.node_at(r, c);
      out.push_back(n != ipp::kInvalidNode && seen[n] ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace test
