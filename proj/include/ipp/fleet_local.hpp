#pragma once

#include "ipp/environments.hpp"
#include "ipp/fleet.hpp"

namespace ipp {

/// Abstraction level 1: vehicles hop between graph nodes instantly, with
/// distance accounting and strict pre-move budget enforcement.
class LocalFleet : public Fleet {
 public:
  LocalFleet(const GridGraph& g, Environment& env, const FleetConfig& config);

  MoveResult move(const std::vector<NodeId>& targets) override;
  std::vector<Measurement> take_measurement() override;
  void reset(const FleetConfig& config) override;
  const std::vector<VehicleState>& states() const override;
  double sim_time() const override { return 0.0; }

  /// Every hop actually taken, in order (for distance-accounting checks).
  const std::vector<Visit>& hop_log() const { return hop_log_; }
  const std::vector<Visit>& visit_log() const override { return hop_log_; }

 private:
  const GridGraph& graph_;
  Environment& env_;
  std::vector<VehicleState> states_;
  std::vector<Visit> hop_log_;
  std::vector<Measurement> buffer_;   // one reading per hop since last take_measurement
  std::vector<bool> contributed_;
};

}  // namespace ipp
