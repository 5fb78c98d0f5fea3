#include "ipp/field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ipp {

void FieldSpec::validate() const {
  if (n_peaks < 1) throw std::invalid_argument("field: n_peaks must be >= 1");
  if (peak_width_min <= 0.0 || peak_width_max < peak_width_min)
    throw std::invalid_argument("field: invalid peak_width range");
  if (amplitude_min <= 0.0 || amplitude_max < amplitude_min)
    throw std::invalid_argument("field: invalid amplitude range");
}

ScalarField generate_field(const GridGraph& g, const FieldSpec& spec, const std::string& name) {
  spec.validate();
  Rng rng(spec.seed);
  struct Peak {
    double r, c, width, amp;
  };
  std::vector<Peak> peaks;
  for (int i = 0; i < spec.n_peaks; ++i) {
    const NodeId center = static_cast<NodeId>(rng.uniform_index(g.node_count()));
    const auto [r, c] = g.node_rc(center);
    const double w = rng.uniform(spec.peak_width_min, spec.peak_width_max);
    const double a = rng.uniform(spec.amplitude_min, spec.amplitude_max);
    peaks.push_back({static_cast<double>(r), static_cast<double>(c), w, a});
  }

  ScalarField f;
  f.name = name;
  f.values.resize(g.node_count());
  for (NodeId n = 0; n < static_cast<NodeId>(g.node_count()); ++n) {
    const auto [r, c] = g.node_rc(n);
    double v = 0.0;
    for (const auto& p : peaks) {
      const double dr = r - p.r, dc = c - p.c;
      v += p.amp * std::exp(-(dr * dr + dc * dc) / (2.0 * p.width * p.width));
    }
    f.values[n] = v;
  }

  if (spec.normalize) {
    const auto [mn, mx] = std::minmax_element(f.values.begin(), f.values.end());
    const double lo = *mn, hi = *mx;
    if (hi > lo) {
      for (double& v : f.values) v = (v - lo) / (hi - lo);
    }
  }
  return f;
}

namespace {

std::vector<std::vector<double>> parse_csv_grid(std::istream& in, const std::string& path) {
  std::vector<std::vector<double>> grid;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("map: non-numeric cell in " + path);
      }
    }
    if (!grid.empty() && row.size() != grid.front().size())
      throw std::runtime_error("map: ragged CSV rows in " + path);
    grid.push_back(std::move(row));
  }
  if (grid.empty()) throw std::runtime_error("map: empty CSV " + path);
  return grid;
}

std::vector<std::vector<double>> parse_pgm(std::istream& in, const std::string& path) {
  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5") throw std::runtime_error("map: unsupported image format in " + path);
  auto next_token = [&in]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw std::runtime_error("map: truncated PGM header");
  };
  const int w = std::stoi(next_token());
  const int h = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (w <= 0 || h <= 0 || maxval <= 0) throw std::runtime_error("map: bad PGM header in " + path);
  std::vector<std::vector<double>> grid(h, std::vector<double>(w));
  if (magic == "P2") {
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        int v;
        if (!(in >> v)) throw std::runtime_error("map: truncated PGM data in " + path);
        grid[r][c] = static_cast<double>(v) / maxval;
      }
  } else {
    in.get();  // single whitespace after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        int v = 0;
        for (int b = 0; b < bytes; ++b) {
          const int ch = in.get();
          if (ch == EOF) throw std::runtime_error("map: truncated PGM data in " + path);
          v = (v << 8) | ch;
        }
        grid[r][c] = static_cast<double>(v) / maxval;
      }
  }
  return grid;
}

}  // namespace

ScalarField load_external_map(const GridGraph& g, const std::string& path, const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("map: cannot open " + path);

  std::vector<std::vector<double>> grid;
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".pgm") == 0)
    grid = parse_pgm(in, path);
  else
    grid = parse_csv_grid(in, path);

  const int src_rows = static_cast<int>(grid.size());
  const int src_cols = static_cast<int>(grid.front().size());
  if (src_rows < g.rows() || src_cols < g.cols())
    throw std::runtime_error("map: resolution " + std::to_string(src_rows) + "x" +
                             std::to_string(src_cols) + " below grid resolution");

  ScalarField f;
  f.name = name;
  f.values.resize(g.node_count());
  for (NodeId n = 0; n < static_cast<NodeId>(g.node_count()); ++n) {
    const auto [r, c] = g.node_rc(n);
    // nearest source cell to this node's cell center
    int sr = static_cast<int>((r + 0.5) * src_rows / g.rows());
    int sc = static_cast<int>((c + 0.5) * src_cols / g.cols());
    sr = std::min(sr, src_rows - 1);
    sc = std::min(sc, src_cols - 1);
    f.values[n] = grid[sr][sc];
  }
  return f;
}

void write_field_csv(const GridGraph& g, const std::vector<double>& values, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[64];
  for (int r = 0; r < g.rows(); ++r) {
    for (int c = 0; c < g.cols(); ++c) {
      if (c) out << ',';
      const NodeId n = g.node_at(r, c);
      if (n == kInvalidNode) {
        out << "nan";
      } else {
        std::snprintf(buf, sizeof(buf), "%.10g", values[n]);
        out << buf;
      }
    }
    out << '\n';
  }
}

double sample(const ScalarField& field, NodeId n, double noise_std, Rng& rng) {
  if (n < 0 || static_cast<std::size_t>(n) >= field.values.size())
    throw std::out_of_range("sample: invalid NodeId");
  if (noise_std == 0.0) return field.values[n];
  return field.values[n] + noise_std * rng.normal();
}

}  // namespace ipp
