#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ipp/broker.hpp"
#include "ipp/field.hpp"
#include "ipp/grid_graph.hpp"
#include "ipp/rng.hpp"
#include "ipp/wire.hpp"

namespace ipp {

struct BackendConfig {
  double tick_dt = 1.0;          // seconds per tick
  double reach_tolerance = 1.0;  // meters
  double gps_noise_std = 0.0;    // meters, reported positions only
  double speed_limit = 0.5;      // m/s
  int state_period_ticks = 10;

  void validate() const;
};

/// Kinematic vehicle server: follows Dijkstra routes at bounded speed,
/// publishes a measurement at every route node passed and exactly one ack
/// per accepted goto. All interaction goes through the broker.
class VehicleBackend {
 public:
  /// Everything needed to respawn a backend mid-mission: the physical
  /// state survives a process restart.
  struct Snapshot {
    double x = 0.0, y = 0.0;  // planar meters (col*side, row*side)
    double sim_time = 0.0;
    std::vector<NodeId> route;
    std::size_t route_next = 0;          // next route vertex to reach
    std::uint64_t active_goto_seq = 0;
    bool route_active = false;
    std::uint64_t measurement_seq = 0;
    std::uint64_t ack_seq = 0;
    std::uint64_t state_seq = 0;
    std::uint64_t last_goto_seq = 0;
    bool any_goto_seen = false;
    std::map<std::uint64_t, std::string> completed_acks;  // goto seq -> ack payload
  };

  VehicleBackend(std::string vehicle_id, const GridGraph& g, const ScalarField* field,
                 double sensor_noise_std, std::uint64_t noise_seed, BackendConfig config,
                 Broker& broker, NodeId start);
  VehicleBackend(std::string vehicle_id, const GridGraph& g, const ScalarField* field,
                 double sensor_noise_std, std::uint64_t noise_seed, BackendConfig config,
                 Broker& broker, const Snapshot& snapshot);
  ~VehicleBackend();

  void tick();
  double sim_time() const { return snap_.sim_time; }
  const std::string& id() const { return id_; }
  Snapshot snapshot() const { return snap_; }
  /// Marks the backend dead; its broker subscription becomes a no-op.
  void kill();
  bool alive() const { return *alive_; }

  /// True position in planar meters (tests only; the protocol reports
  /// lat/lon with optional GPS noise).
  std::pair<double, double> true_position() const { return {snap_.x, snap_.y}; }
  NodeId nearest_node() const;

 private:
  void subscribe();
  void handle_cmd(const std::string& payload);
  void start_route(const WireMessage& cmd);
  void publish_ack(std::uint64_t goto_seq);
  void publish_error(std::uint64_t goto_seq, const std::string& what);
  void publish_measurement(NodeId node, std::uint64_t goto_seq);
  void publish_state();
  std::pair<double, double> node_xy(NodeId n) const;
  std::pair<double, double> to_latlon(double x, double y) const;

  std::string id_;
  const GridGraph& graph_;
  const ScalarField* field_;  // nullptr = no synthetic sensing
  double sensor_noise_std_;
  BackendConfig config_;
  Broker& broker_;
  Rng rng_;
  std::shared_ptr<bool> alive_;
  Snapshot snap_;
  int ticks_since_state_ = 0;
};

/// In-process world: loopback broker plus one backend per vehicle,
/// advanced by deterministic logical ticks.
class SimWorld {
 public:
  explicit SimWorld(const GridGraph& g) : graph_(g) {}

  LoopbackBroker& broker() { return broker_; }

  VehicleBackend& add_backend(const std::string& vehicle_id, const ScalarField* field,
                              double sensor_noise_std, std::uint64_t noise_seed,
                              const BackendConfig& config, NodeId start);

  /// One logical step: deliver pending traffic, tick every live backend,
  /// deliver again.
  void step();

  VehicleBackend::Snapshot kill_backend(std::size_t index);
  void respawn_backend(std::size_t index, const VehicleBackend::Snapshot& snapshot);

  double sim_time() const;
  double tick_dt() const;
  std::size_t backend_count() const { return backends_.size(); }
  VehicleBackend& backend(std::size_t i) { return *backends_[i]; }

 private:
  const GridGraph& graph_;
  LoopbackBroker broker_;
  struct Slot {
    std::string id;
    const ScalarField* field;
    double noise;
    std::uint64_t seed;
    BackendConfig config;
  };
  std::vector<Slot> slots_;
  std::vector<std::unique_ptr<VehicleBackend>> backends_;
};

}  // namespace ipp
