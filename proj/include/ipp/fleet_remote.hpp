#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "ipp/broker.hpp"
#include "ipp/fleet.hpp"
#include "ipp/wire.hpp"

namespace ipp {

struct RemoteFleetConfig {
  std::string vehicle_id_prefix = "asv";
  double speed_limit = 0.5;     // m/s, used for ack timeout estimation
  double ack_timeout_base = 10.0;  // seconds added on top of 3x route time
  int max_retries = 2;             // re-publications of an unacked goto
  double pump_dt = 1.0;            // logical seconds advanced per pump step
};

/// Same fleet surface as LocalFleet, implemented over pub-sub topics with
/// acknowledgment-synchronized blocking moves. The world behind the broker
/// is advanced through the pump callback (loopback: tick backends and
/// deliver; real broker: wait).
class RemoteFleet : public Fleet {
 public:
  using Pump = std::function<void()>;

  RemoteFleet(const GridGraph& g, Broker& broker, const FleetConfig& config,
              const RemoteFleetConfig& remote_config, Pump pump);

  MoveResult move(const std::vector<NodeId>& targets) override;
  std::vector<Measurement> take_measurement() override;
  void reset(const FleetConfig& config) override;
  const std::vector<VehicleState>& states() const override;
  const std::vector<Visit>& visit_log() const override { return visit_log_; }
  double sim_time() const override { return sim_time_; }

  std::string vehicle_id(int index) const;

 private:
  struct Pending {
    bool waiting = false;
    std::uint64_t goto_seq = 0;
    NodeId commanded_node = kInvalidNode;
    double planned_length = 0.0;
    bool budget_truncated = false;
    double deadline = 0.0;  // logical seconds of waiting allowed
    double waited = 0.0;
    int retries_left = 0;
    std::string payload;  // for idempotent re-publication
  };

  void handle_ack(int vehicle, const std::string& payload);
  void handle_measurement(int vehicle, const std::string& payload);
  void publish_goto(int vehicle, Pending& p);

  const GridGraph& graph_;
  Broker& broker_;
  RemoteFleetConfig remote_config_;
  Pump pump_;
  std::vector<VehicleState> states_;
  std::vector<Pending> pending_;
  std::vector<std::uint64_t> next_goto_seq_;
  std::vector<std::uint64_t> last_measurement_seq_;
  std::vector<std::uint64_t> acked_through_;  // highest goto seq acked
  std::deque<Measurement> measurement_buffer_;
  std::vector<Visit> visit_log_;
  double sim_time_ = 0.0;
};

}  // namespace ipp
