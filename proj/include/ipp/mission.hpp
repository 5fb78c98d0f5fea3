#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ipp/backend_sim.hpp"
#include "ipp/environments.hpp"
#include "ipp/scenario.hpp"

namespace ipp {

struct DecisionEvent {
  int step;
  int vehicle;
  NodeId target;

  bool operator==(const DecisionEvent&) const = default;
};

struct MissionResult {
  MissionMetrics metrics;
  std::vector<DecisionEvent> decisions;
  std::vector<Visit> visit_log;  // movement visits (one per hop)
  std::vector<VehicleState> final_states;
  double duration = 0.0;  // simulated seconds
  int steps = 0;
  bool fault = false;
  double final_coverage = 0.0;
  std::optional<double> final_mse;
  std::optional<double> final_mean_std;
  GpPosterior final_posterior;      // gp env only
  std::vector<double> ground_truth;  // gp/oil envs
  std::vector<std::string> trace;    // wire trace lines (remote)
};

/// Test-only extension points; never used by the CLI.
struct MissionHooks {
  std::function<void(SimWorld&)> on_world;            // after backends spawn (remote)
  std::function<void(int step, SimWorld*)> on_step;   // before planning each step
};

/// Canonical loop: plan, move until reached or done, measure, update the
/// model, record metrics; runs until every vehicle is done.
MissionResult run_mission(const ScenarioConfig& config, const MissionHooks* hooks = nullptr);

/// Writes metrics.csv, visits.csv, posterior grids, summary.json, the
/// normalized config, and the wire trace under `out_dir`.
void write_artifacts(const ScenarioConfig& config, const MissionResult& result,
                     const std::string& out_dir);

std::string metrics_csv(const MissionResult& result, int n_vehicles);

}  // namespace ipp
