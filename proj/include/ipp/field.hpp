#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ipp/grid_graph.hpp"
#include "ipp/rng.hpp"

namespace ipp {

/// Per-node ground-truth values attached to a graph.
struct ScalarField {
  std::string name;
  std::vector<double> values;  // one per graph node
};

/// Parameters for the seeded sum-of-Gaussians generator.
struct FieldSpec {
  std::uint64_t seed = 0;
  int n_peaks = 3;
  double peak_width_min = 2.0;  // cells
  double peak_width_max = 6.0;
  double amplitude_min = 0.5;
  double amplitude_max = 1.0;
  bool normalize = true;

  void validate() const;  // throws std::invalid_argument
};

/// Sum of isotropic Gaussian bumps centered on navigable cells.
/// Fully determined by (graph, spec).
ScalarField generate_field(const GridGraph& g, const FieldSpec& spec,
                           const std::string& name = "ground_truth");

/// Loads a CSV grid (row-major reals) or a PGM greyscale image (values
/// mapped to [0, 1]); nearest-cell sampling when resolutions differ.
ScalarField load_external_map(const GridGraph& g, const std::string& path,
                              const std::string& name = "ground_truth");

/// Writes per-node values as a rows x cols CSV grid (blocked cells as nan).
void write_field_csv(const GridGraph& g, const std::vector<double>& values,
                     const std::string& path);

/// Field value at a node plus zero-mean Gaussian noise.
double sample(const ScalarField& field, NodeId n, double noise_std, Rng& rng);

}  // namespace ipp
