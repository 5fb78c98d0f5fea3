#include "ipp/backend_sim.hpp"

#include <cmath>
#include <stdexcept>

namespace ipp {

namespace {
constexpr double kEps = 1e-9;
}

void BackendConfig::validate() const {
  if (tick_dt <= 0.0) throw std::invalid_argument("backend: tick_dt must be positive");
  if (reach_tolerance <= 0.0) throw std::invalid_argument("backend: reach_tolerance must be positive");
  if (speed_limit <= 0.0) throw std::invalid_argument("backend: speed_limit must be positive");
  if (gps_noise_std < 0.0) throw std::invalid_argument("backend: negative gps_noise_std");
  if (state_period_ticks < 1) throw std::invalid_argument("backend: state_period_ticks must be >= 1");
}

VehicleBackend::VehicleBackend(std::string vehicle_id, const GridGraph& g, const ScalarField* field,
                               double sensor_noise_std, std::uint64_t noise_seed,
                               BackendConfig config, Broker& broker, NodeId start)
    : id_(std::move(vehicle_id)),
      graph_(g),
      field_(field),
      sensor_noise_std_(sensor_noise_std),
      config_(config),
      broker_(broker),
      rng_(noise_seed),
      alive_(std::make_shared<bool>(true)) {
  Topics::validate_vehicle_id(id_);
  config_.validate();
  if (!g.valid(start)) throw std::invalid_argument("backend: start node not navigable");
  const auto [x, y] = node_xy(start);
  snap_.x = x;
  snap_.y = y;
  subscribe();
  publish_state();
}

VehicleBackend::VehicleBackend(std::string vehicle_id, const GridGraph& g, const ScalarField* field,
                               double sensor_noise_std, std::uint64_t noise_seed,
                               BackendConfig config, Broker& broker, const Snapshot& snapshot)
    : id_(std::move(vehicle_id)),
      graph_(g),
      field_(field),
      sensor_noise_std_(sensor_noise_std),
      config_(config),
      broker_(broker),
      rng_(noise_seed),
      alive_(std::make_shared<bool>(true)),
      snap_(snapshot) {
  Topics::validate_vehicle_id(id_);
  config_.validate();
  subscribe();
  publish_state();
}

VehicleBackend::~VehicleBackend() { *alive_ = false; }

void VehicleBackend::kill() { *alive_ = false; }

void VehicleBackend::subscribe() {
  auto alive = alive_;
  broker_.subscribe(Topics::cmd(id_), [this, alive](const std::string&, const std::string& payload) {
    if (*alive) handle_cmd(payload);
  });
}

std::pair<double, double> VehicleBackend::node_xy(NodeId n) const {
  const auto [r, c] = graph_.node_rc(n);
  return {c * graph_.cell_side(), r * graph_.cell_side()};
}

std::pair<double, double> VehicleBackend::to_latlon(double x, double y) const {
  const auto& geo = graph_.geo();
  const double s = graph_.cell_side();
  const double fr = (y / s + 0.5) / graph_.rows();
  const double fc = (x / s + 0.5) / graph_.cols();
  return {geo.lat_max - fr * (geo.lat_max - geo.lat_min),
          geo.lon_min + fc * (geo.lon_max - geo.lon_min)};
}

NodeId VehicleBackend::nearest_node() const {
  const double s = graph_.cell_side();
  NodeId best = kInvalidNode;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (NodeId n = 0; n < static_cast<NodeId>(graph_.node_count()); ++n) {
    const auto [x, y] = node_xy(n);
    const double dx = x - snap_.x, dy = y - snap_.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best_d2 - 1e-12) {
      best_d2 = d2;
      best = n;
    }
  }
  return best;
}

void VehicleBackend::handle_cmd(const std::string& payload) {
  std::string err;
  const auto msg = codec_decode(payload, &err);
  if (!msg) {
    publish_error(0, "malformed command: " + err);
    return;
  }
  if (msg->kind != MsgKind::Goto || msg->vehicle_id != id_) return;

  if (snap_.any_goto_seen && msg->seq <= snap_.last_goto_seq) {
    // duplicate delivery or re-publish: at-most-once command effect
    auto it = snap_.completed_acks.find(msg->seq);
    if (it != snap_.completed_acks.end()) broker_.publish(Topics::ack(id_), it->second);
    // a still-active route for this seq keeps running untouched
    return;
  }
  snap_.any_goto_seen = true;
  snap_.last_goto_seq = msg->seq;
  start_route(*msg);
}

void VehicleBackend::start_route(const WireMessage& cmd) {
  if (!graph_.valid(cmd.target_node)) {
    publish_error(cmd.seq, "target node out of range");
    return;
  }
  const NodeId here = nearest_node();
  const Path path = graph_.shortest_path(here, cmd.target_node);
  if (!path.reachable) {
    publish_error(cmd.seq, "target unreachable");
    return;
  }
  if (path.nodes.size() == 1) {
    // already there: measure in place and ack without motion
    publish_measurement(here, cmd.seq);
    publish_ack(cmd.seq);
    return;
  }
  snap_.route = path.nodes;
  snap_.route_next = 1;
  snap_.route_active = true;
  snap_.active_goto_seq = cmd.seq;
}

void VehicleBackend::tick() {
  if (!*alive_) return;
  snap_.sim_time += config_.tick_dt;
  double budget = config_.speed_limit * config_.tick_dt;
  while (budget > kEps && snap_.route_active) {
    const auto [tx, ty] = node_xy(snap_.route[snap_.route_next]);
    const double dx = tx - snap_.x, dy = ty - snap_.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d <= budget + kEps) {
      snap_.x = tx;
      snap_.y = ty;
      budget -= d;
      publish_measurement(snap_.route[snap_.route_next], snap_.active_goto_seq);
      if (snap_.route_next + 1 == snap_.route.size()) {
        snap_.route_active = false;
        publish_ack(snap_.active_goto_seq);
        budget = 0.0;  // arrival consumes the rest of the tick
      } else {
        ++snap_.route_next;
      }
    } else {
      snap_.x += dx / d * budget;
      snap_.y += dy / d * budget;
      budget = 0.0;
    }
  }
  if (++ticks_since_state_ >= config_.state_period_ticks) {
    ticks_since_state_ = 0;
    publish_state();
  }
}

void VehicleBackend::publish_ack(std::uint64_t goto_seq) {
  WireMessage m;
  m.kind = MsgKind::Ack;
  m.vehicle_id = id_;
  m.seq = ++snap_.ack_seq;
  m.acked_seq = goto_seq;
  m.reached = true;
  m.sim_time = snap_.sim_time;
  const std::string payload = codec_encode(m);
  snap_.completed_acks[goto_seq] = payload;
  broker_.publish(Topics::ack(id_), payload);
}

void VehicleBackend::publish_error(std::uint64_t goto_seq, const std::string& what) {
  WireMessage m;
  m.kind = MsgKind::Error;
  m.vehicle_id = id_;
  m.seq = ++snap_.ack_seq;
  m.acked_seq = goto_seq;
  m.error = what;
  broker_.publish(Topics::ack(id_), codec_encode(m));
}

void VehicleBackend::publish_measurement(NodeId node, std::uint64_t goto_seq) {
  if (!field_) return;
  WireMessage m;
  m.kind = MsgKind::Measurement;
  m.vehicle_id = id_;
  m.seq = ++snap_.measurement_seq;
  m.node = node;
  m.value = sample(*field_, node, sensor_noise_std_, rng_);
  m.param = field_->name;
  m.goto_seq = goto_seq;
  broker_.publish(Topics::measurement(id_), codec_encode(m));
}

void VehicleBackend::publish_state() {
  WireMessage m;
  m.kind = MsgKind::State;
  m.vehicle_id = id_;
  m.seq = ++snap_.state_seq;
  double rx = snap_.x, ry = snap_.y;
  if (config_.gps_noise_std > 0.0) {
    rx += config_.gps_noise_std * rng_.normal();
    ry += config_.gps_noise_std * rng_.normal();
  }
  const auto [lat, lon] = to_latlon(rx, ry);
  m.lat = lat;
  m.lon = lon;
  m.sim_time = snap_.sim_time;
  broker_.publish(Topics::state(id_), codec_encode(m));
}

VehicleBackend& SimWorld::add_backend(const std::string& vehicle_id, const ScalarField* field,
                                      double sensor_noise_std, std::uint64_t noise_seed,
                                      const BackendConfig& config, NodeId start) {
  for (const auto& s : slots_)
    if (s.id == vehicle_id) throw std::invalid_argument("duplicate vehicle id '" + vehicle_id + "'");
  slots_.push_back({vehicle_id, field, sensor_noise_std, noise_seed, config});
  backends_.push_back(std::make_unique<VehicleBackend>(vehicle_id, graph_, field, sensor_noise_std,
                                                       noise_seed, config, broker_, start));
  return *backends_.back();
}

void SimWorld::step() {
  broker_.deliver_all();
  for (auto& b : backends_)
    if (b && b->alive()) b->tick();
  broker_.deliver_all();
}

VehicleBackend::Snapshot SimWorld::kill_backend(std::size_t index) {
  auto snap = backends_.at(index)->snapshot();
  backends_[index]->kill();
  backends_[index].reset();
  return snap;
}

void SimWorld::respawn_backend(std::size_t index, const VehicleBackend::Snapshot& snapshot) {
  const auto& s = slots_.at(index);
  backends_[index] = std::make_unique<VehicleBackend>(s.id, graph_, s.field, s.noise, s.seed,
                                                      s.config, broker_, snapshot);
}

double SimWorld::sim_time() const {
  double t = 0.0;
  for (const auto& b : backends_)
    if (b) t = std::max(t, b->sim_time());
  return t;
}

double SimWorld::tick_dt() const {
  return slots_.empty() ? 1.0 : slots_.front().config.tick_dt;
}

}  // namespace ipp
