#include "ipp/fleet_local.hpp"

#include <algorithm>
#include <stdexcept>

namespace ipp {

void FleetConfig::validate(const GridGraph& g) const {
  if (n_vehicles < 1) throw std::invalid_argument("fleet: n_vehicles must be >= 1");
  if (static_cast<int>(initial_positions.size()) != n_vehicles)
    throw std::invalid_argument("fleet: initial_positions size mismatch");
  if (static_cast<int>(max_distance.size()) != n_vehicles)
    throw std::invalid_argument("fleet: max_distance size mismatch");
  for (NodeId n : initial_positions)
    if (!g.valid(n)) throw std::invalid_argument("fleet: initial position not navigable");
  for (double d : max_distance)
    if (d < 0.0) throw std::invalid_argument("fleet: negative max_distance");
}

LocalFleet::LocalFleet(const GridGraph& g, Environment& env, const FleetConfig& config)
    : graph_(g), env_(env) {
  reset(config);
}

void LocalFleet::reset(const FleetConfig& config) {
  config.validate(graph_);
  states_.clear();
  hop_log_.clear();
  buffer_.clear();
  contributed_.assign(config.n_vehicles, false);
  for (int i = 0; i < config.n_vehicles; ++i)
    states_.push_back({i, config.initial_positions[i], 0.0, config.max_distance[i], false, false});
}

const std::vector<VehicleState>& LocalFleet::states() const { return states_; }

MoveResult LocalFleet::move(const std::vector<NodeId>& targets) {
  if (targets.size() != states_.size()) throw std::invalid_argument("fleet: targets size mismatch");
  MoveResult res;
  res.reached.resize(states_.size());
  res.done.resize(states_.size());

  for (std::size_t i = 0; i < states_.size(); ++i) {
    VehicleState& v = states_[i];
    const NodeId target = targets[i];
    if (!graph_.valid(target)) throw std::invalid_argument("fleet: target not navigable");
    if (v.done) {
      res.reached[i] = (v.position == target);
      res.done[i] = true;
      continue;
    }
    if (v.position == target) {
      res.reached[i] = true;
      res.done[i] = false;
      continue;
    }
    const Path path = graph_.shortest_path(v.position, target);
    if (!path.reachable) {
      v.done = true;
      v.fault = true;
      res.reached[i] = false;
      res.done[i] = true;
      continue;
    }
    const NodeId next = path.nodes[1];
    double edge_len = 0.0;
    for (const auto& e : graph_.edges(v.position))
      if (e.to == next) edge_len = e.length;
    if (v.traveled + edge_len > v.max_distance) {
      // next edge would exceed the budget: stop here for good
      v.done = true;
      res.reached[i] = false;
      res.done[i] = true;
      continue;
    }
    v.position = next;
    v.traveled += edge_len;
    hop_log_.push_back({v.id, next});
    buffer_.push_back({v.id, next, env_.sense(next)});
    contributed_[i] = true;
    res.reached[i] = (v.position == target);
    res.done[i] = false;
  }
  return res;
}

std::vector<Measurement> LocalFleet::take_measurement() {
  // vehicles that did not move since the last call measure at rest, so a
  // stationary (or budget-exhausted) vehicle still reports its node;
  // faulted vehicles report nothing, matching the wire protocol
  for (std::size_t i = 0; i < states_.size(); ++i) {
    const VehicleState& v = states_[i];
    if (!contributed_[i] && !v.fault) buffer_.push_back({v.id, v.position, env_.sense(v.position)});
  }
  std::vector<Measurement> out = std::move(buffer_);
  buffer_.clear();
  std::fill(contributed_.begin(), contributed_.end(), false);
  std::stable_sort(out.begin(), out.end(),
                   [](const Measurement& a, const Measurement& b) { return a.vehicle < b.vehicle; });
  return out;
}

}  // namespace ipp
