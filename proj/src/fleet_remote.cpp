#include "ipp/fleet_remote.hpp"

#include <algorithm>
#include <stdexcept>

namespace ipp {

RemoteFleet::RemoteFleet(const GridGraph& g, Broker& broker, const FleetConfig& config,
                         const RemoteFleetConfig& remote_config, Pump pump)
    : graph_(g), broker_(broker), remote_config_(remote_config), pump_(std::move(pump)) {
  if (!pump_) throw std::invalid_argument("remote fleet: pump callback required");
  reset(config);
  for (int i = 0; i < static_cast<int>(states_.size()); ++i) {
    const std::string id = vehicle_id(i);
    Topics::validate_vehicle_id(id);
    broker_.subscribe(Topics::ack(id), [this, i](const std::string&, const std::string& payload) {
      handle_ack(i, payload);
    });
    broker_.subscribe(Topics::measurement(id),
                      [this, i](const std::string&, const std::string& payload) {
                        handle_measurement(i, payload);
                      });
  }
}

std::string RemoteFleet::vehicle_id(int index) const {
  return remote_config_.vehicle_id_prefix + std::to_string(index);
}

void RemoteFleet::reset(const FleetConfig& config) {
  config.validate(graph_);
  states_.clear();
  for (int i = 0; i < config.n_vehicles; ++i)
    states_.push_back({i, config.initial_positions[i], 0.0, config.max_distance[i], false, false});
  pending_.assign(states_.size(), {});
  next_goto_seq_.assign(states_.size(), 1);
  last_measurement_seq_.assign(states_.size(), 0);
  acked_through_.assign(states_.size(), 0);
  measurement_buffer_.clear();
  visit_log_.clear();
}

const std::vector<VehicleState>& RemoteFleet::states() const { return states_; }

void RemoteFleet::publish_goto(int vehicle, Pending& p) {
  broker_.publish(Topics::cmd(vehicle_id(vehicle)), p.payload);
}

MoveResult RemoteFleet::move(const std::vector<NodeId>& targets) {
  if (targets.size() != states_.size())
    throw std::invalid_argument("remote fleet: targets size mismatch");

  for (std::size_t i = 0; i < states_.size(); ++i) {
    VehicleState& v = states_[i];
    Pending& p = pending_[i];
    p = {};
    NodeId target = targets[i];
    if (!graph_.valid(target)) throw std::invalid_argument("remote fleet: target not navigable");
    if (v.fault) continue;  // faulted vehicles are out of the mission entirely
    if (v.done) target = v.position;

    NodeId commanded = v.position;
    double planned = 0.0;
    bool truncated = false;
    if (target != v.position) {
      const Path path = graph_.shortest_path(v.position, target);
      if (!path.reachable) {
        v.done = true;
        v.fault = true;
        continue;  // nothing to command
      }
      // longest route prefix that fits the remaining budget (whole edges)
      double cum = 0.0;
      std::size_t last_ok = 0;
      for (std::size_t k = 1; k < path.nodes.size(); ++k) {
        double edge = 0.0;
        for (const auto& e : graph_.edges(path.nodes[k - 1]))
          if (e.to == path.nodes[k]) edge = e.length;
        if (v.traveled + cum + edge > v.max_distance) break;
        cum += edge;
        last_ok = k;
      }
      if (last_ok == 0) {
        v.done = true;  // cannot afford even the first edge; measure in place
      } else {
        commanded = path.nodes[last_ok];
        planned = cum;
        truncated = (commanded != target);
      }
    }

    WireMessage cmd;
    cmd.kind = MsgKind::Goto;
    cmd.vehicle_id = vehicle_id(static_cast<int>(i));
    cmd.seq = next_goto_seq_[i]++;
    cmd.target_node = commanded;
    const auto [lat, lon] = graph_.node_to_latlon(commanded);
    cmd.lat = lat;
    cmd.lon = lon;

    p.waiting = true;
    p.goto_seq = cmd.seq;
    p.commanded_node = commanded;
    p.planned_length = planned;
    p.budget_truncated = truncated;
    p.deadline = 3.0 * planned / remote_config_.speed_limit + remote_config_.ack_timeout_base;
    p.retries_left = remote_config_.max_retries;
    p.payload = codec_encode(cmd);
    publish_goto(static_cast<int>(i), p);
  }

  // barrier: block until every vehicle's ack (or timeout exhaustion)
  auto any_waiting = [this]() {
    for (const auto& p : pending_)
      if (p.waiting) return true;
    return false;
  };
  while (any_waiting()) {
    pump_();
    for (std::size_t i = 0; i < pending_.size(); ++i) {
      Pending& p = pending_[i];
      if (!p.waiting) continue;
      p.waited += remote_config_.pump_dt;
      if (p.waited > p.deadline) {
        if (p.retries_left-- > 0) {
          p.waited = 0.0;
          publish_goto(static_cast<int>(i), p);  // idempotent by seq
        } else {
          states_[i].fault = true;
          states_[i].done = true;
          p.waiting = false;
        }
      }
    }
  }

  MoveResult res;
  res.reached.resize(states_.size());
  res.done.resize(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    res.reached[i] = (states_[i].position == targets[i]) && !states_[i].fault;
    res.done[i] = states_[i].done;
  }
  return res;
}

void RemoteFleet::handle_ack(int vehicle, const std::string& payload) {
  const auto msg = codec_decode(payload);
  if (!msg) return;
  Pending& p = pending_[vehicle];
  VehicleState& v = states_[vehicle];
  sim_time_ = std::max(sim_time_, msg->sim_time);
  if (msg->kind == MsgKind::Error) {
    if (p.waiting && msg->acked_seq == p.goto_seq) {
      v.fault = true;
      v.done = true;
      p.waiting = false;
    }
    return;
  }
  if (msg->kind != MsgKind::Ack) return;
  if (!p.waiting || msg->acked_seq != p.goto_seq) return;  // stale/duplicate ack
  if (msg->acked_seq <= acked_through_[vehicle]) return;
  acked_through_[vehicle] = msg->acked_seq;
  v.position = p.commanded_node;
  v.traveled += p.planned_length;
  if (p.budget_truncated) v.done = true;
  p.waiting = false;
}

void RemoteFleet::handle_measurement(int vehicle, const std::string& payload) {
  const auto msg = codec_decode(payload);
  if (!msg || msg->kind != MsgKind::Measurement) return;
  if (msg->seq <= last_measurement_seq_[vehicle]) return;  // QoS redelivery
  last_measurement_seq_[vehicle] = msg->seq;
  measurement_buffer_.push_back({vehicle, msg->node, msg->value});
  if (pending_[vehicle].waiting && pending_[vehicle].planned_length > 0.0)
    visit_log_.push_back({vehicle, msg->node});
}

std::vector<Measurement> RemoteFleet::take_measurement() {
  std::vector<Measurement> out(measurement_buffer_.begin(), measurement_buffer_.end());
  measurement_buffer_.clear();
  std::stable_sort(out.begin(), out.end(),
                   [](const Measurement& a, const Measurement& b) { return a.vehicle < b.vehicle; });
  return out;
}

}  // namespace ipp
