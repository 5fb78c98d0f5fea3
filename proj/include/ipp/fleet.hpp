#pragma once

#include <vector>

#include "ipp/environments.hpp"
#include "ipp/grid_graph.hpp"

namespace ipp {

struct VehicleState {
  int id = 0;
  NodeId position = kInvalidNode;
  double traveled = 0.0;      // meters
  double max_distance = 0.0;  // budget, meters
  bool done = false;
  bool fault = false;  // unreachable target or protocol fault
};

struct FleetConfig {
  int n_vehicles = 1;
  std::vector<NodeId> initial_positions;
  std::vector<double> max_distance;  // per vehicle

  void validate(const GridGraph& g) const;
};

struct Measurement {
  int vehicle;
  NodeId node;
  double value;
};

struct MoveResult {
  std::vector<bool> reached;
  std::vector<bool> done;

  bool all_settled() const {
    for (std::size_t i = 0; i < reached.size(); ++i)
      if (!reached[i] && !done[i]) return false;
    return true;
  }
};

/// Common fleet surface shared by the local simulation and the remote
/// (wire-protocol) implementation; planners only ever see this.
class Fleet {
 public:
  virtual ~Fleet() = default;

  /// Advances toward the per-vehicle targets. The local fleet moves one
  /// edge per call; the remote fleet blocks until acknowledgment. The
  /// caller loops until all_settled().
  virtual MoveResult move(const std::vector<NodeId>& targets) = 0;

  /// Measurements taken since the previous call (local: one per vehicle
  /// at its current node; remote: all buffered intermediate readings).
  virtual std::vector<Measurement> take_measurement() = 0;

  virtual void reset(const FleetConfig& config) = 0;
  virtual const std::vector<VehicleState>& states() const = 0;
  /// Movement visits (one entry per hop actually taken), in order.
  virtual const std::vector<Visit>& visit_log() const = 0;
  /// Simulated mission time in seconds (0 at the instantaneous level).
  virtual double sim_time() const = 0;
};

}  // namespace ipp
