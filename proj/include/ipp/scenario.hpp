#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ipp/backend_sim.hpp"
#include "ipp/field.hpp"
#include "ipp/fleet.hpp"
#include "ipp/fleet_remote.hpp"
#include "ipp/gp.hpp"
#include "ipp/grid_graph.hpp"

namespace ipp {

enum class ExecutionLevel { Local, Remote };
enum class PlannerKind { Greedy, ExpectedImprovement, Flooding };
enum class EnvKind { Gp, Trash, Oil };

/// Fully resolved mission recipe. `normalized()` echoes every default so
/// the emitted config is a complete reproduction recipe.
struct ScenarioConfig {
  std::uint64_t seed = 0;

  std::string mask_path;
  GeoReference geo;  // rows/cols filled from the mask at load time

  // ground truth
  bool field_synthetic = true;
  FieldSpec field_spec;
  std::string field_map_path;

  EnvKind env = EnvKind::Gp;
  double noise_std = 0.0;
  GpHyperparams gp;
  int trash_items = 20;
  double vision_radius = 10.0;
  double view_radius = 10.0;

  PlannerKind planner = PlannerKind::Greedy;
  double xi = 0.01;

  int n_vehicles = 1;
  std::vector<NodeId> initial_positions;  // resolved to the central node if absent
  double max_distance = 925.0;

  ExecutionLevel level = ExecutionLevel::Local;
  BackendConfig backend;
  std::string broker_host = "loopback";
  int broker_port = 1883;
  RemoteFleetConfig remote;

  int max_steps = 100000;
  std::string output_root = "runs";
  bool write_trace = true;

  nlohmann::json normalized() const;
  std::string run_id() const;  // config hash + seed
};

std::string planner_name(PlannerKind p);
std::string env_name(EnvKind e);
std::string level_name(ExecutionLevel l);

/// Parses and validates; on any violation returns the full error list
/// (field paths included) and no config.
struct ValidationResult {
  std::optional<ScenarioConfig> config;
  std::vector<std::string> errors;
};

ValidationResult parse_scenario(const nlohmann::json& j);
ValidationResult load_scenario(const std::string& path);

}  // namespace ipp
