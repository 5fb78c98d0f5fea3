#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "ipp/mission.hpp"

namespace {

constexpr int kExitConfigError = 1;
constexpr int kExitMissionFault = 2;

int load_or_fail(const std::string& path, ipp::ScenarioConfig& out) {
  const auto res = ipp::load_scenario(path);
  if (!res.config) {
    for (const auto& e : res.errors) std::cerr << "config error: " << e << "\n";
    return kExitConfigError;
  }
  out = *res.config;
  return 0;
}

int cmd_validate(const std::string& path) {
  ipp::ScenarioConfig config;
  if (int rc = load_or_fail(path, config)) return rc;
  std::cout << config.normalized().dump(2) << "\n";
  return 0;
}

int cmd_run(const std::string& path) {
  ipp::ScenarioConfig config;
  if (int rc = load_or_fail(path, config)) return rc;
  const std::string out_dir =
      (std::filesystem::path(config.output_root) / config.run_id()).string();
  ipp::MissionResult result;
  try {
    result = ipp::run_mission(config);
  } catch (const std::exception& e) {
    std::cerr << "mission fault: " << e.what() << "\n";
    return kExitMissionFault;
  }
  ipp::write_artifacts(config, result, out_dir);
  std::cout << "run " << config.run_id() << ": steps=" << result.steps
            << " duration=" << result.duration << "s coverage=" << result.final_coverage;
  if (result.final_mse) std::cout << " mse=" << *result.final_mse;
  std::cout << "\nartifacts: " << out_dir << "\n";
  if (result.fault) {
    std::cerr << "mission fault: one or more vehicles faulted (see summary.json)\n";
    return kExitMissionFault;
  }
  return 0;
}

int cmd_spawn_backends(const std::string& path) {
  ipp::ScenarioConfig config;
  if (int rc = load_or_fail(path, config)) return rc;
  if (config.level != ipp::ExecutionLevel::Remote) {
    std::cerr << "config error: spawn-backends requires level 'remote'\n";
    return kExitConfigError;
  }
  const auto mask = ipp::OccupancyMask::from_file(config.mask_path);
  ipp::GeoReference geo = config.geo;
  geo.rows = mask.rows;
  geo.cols = mask.cols;
  const auto graph = ipp::GridGraph::build_from_mask(mask, geo);
  const auto field = config.field_synthetic
                         ? ipp::generate_field(graph, config.field_spec)
                         : ipp::load_external_map(graph, config.field_map_path);

  ipp::SimWorld world(graph);
  std::set<std::string> seen;
  world.broker().subscribe("fleet/+/state",
                           [&](const std::string& topic, const std::string& payload) {
                             seen.insert(topic);
                             std::cout << topic << " " << payload << "\n";
                           });
  try {
    for (int i = 0; i < config.n_vehicles; ++i)
      world.add_backend(config.remote.vehicle_id_prefix + std::to_string(i), &field,
                        config.noise_std, config.seed * 1000003ull + i, config.backend,
                        config.initial_positions[i]);
  } catch (const std::exception& e) {
    std::cerr << "spawn error: " << e.what() << "\n";
    return kExitMissionFault;
  }
  // run until every session has announced itself on its state topic
  for (int tick = 0; tick < 10 * config.backend.state_period_ticks &&
                     static_cast<int>(seen.size()) < config.n_vehicles;
       ++tick)
    world.step();
  if (static_cast<int>(seen.size()) < config.n_vehicles) {
    std::cerr << "spawn error: not all backends reported state\n";
    return kExitMissionFault;
  }
  std::cout << seen.size() << " backend(s) up, awaiting gotos\n";
  return 0;
}

int cmd_replay(const std::string& config_path, const std::string& trace_path) {
  ipp::ScenarioConfig config;
  if (int rc = load_or_fail(config_path, config)) return rc;
  std::ifstream in(trace_path);
  if (!in) {
    std::cerr << "config error: cannot read trace file '" << trace_path << "'\n";
    return kExitConfigError;
  }
  const auto mask = ipp::OccupancyMask::from_file(config.mask_path);
  ipp::GeoReference geo = config.geo;
  geo.rows = mask.rows;
  geo.cols = mask.cols;
  const auto graph = ipp::GridGraph::build_from_mask(mask, geo);

  std::set<ipp::NodeId> visited;
  std::map<std::string, std::uint64_t> last_meas_seq;
  std::map<std::string, ipp::NodeId> last_position;
  int messages = 0, measurements = 0, gotos = 0, acks = 0, decode_errors = 0;
  double duration = 0.0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string ts, dir, topic;
    ls >> ts >> dir >> topic;
    std::string payload;
    std::getline(ls, payload);
    if (!payload.empty() && payload.front() == ' ') payload.erase(0, 1);
    duration = std::max(duration, std::atof(ts.c_str()));
    const auto msg = ipp::codec_decode(payload);
    if (!msg) {
      ++decode_errors;
      continue;
    }
    ++messages;
    switch (msg->kind) {
      case ipp::MsgKind::Goto:
        ++gotos;
        break;
      case ipp::MsgKind::Ack:
        ++acks;
        break;
      case ipp::MsgKind::Measurement:
        if (msg->seq > last_meas_seq[msg->vehicle_id]) {
          last_meas_seq[msg->vehicle_id] = msg->seq;
          ++measurements;
          visited.insert(msg->node);
          last_position[msg->vehicle_id] = msg->node;
        }
        break;
      default:
        break;
    }
  }

  nlohmann::json summary;
  summary["trace"] = trace_path;
  summary["messages"] = messages;
  summary["decode_errors"] = decode_errors;
  summary["gotos"] = gotos;
  summary["acks"] = acks;
  summary["measurements"] = measurements;
  summary["visited_nodes"] = visited.size();
  summary["coverage"] =
      static_cast<double>(visited.size()) / static_cast<double>(graph.node_count());
  summary["duration_s"] = duration;
  auto& pos = summary["final_positions"] = nlohmann::json::object();
  for (const auto& [id, node] : last_position) pos[id] = node;
  std::cout << summary.dump(2) << "\n";
  return decode_errors == 0 ? 0 : kExitMissionFault;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"informative path planning mission runner"};
  app.require_subcommand(1);

  std::string config_path, trace_path;
  auto* run = app.add_subcommand("run", "execute a mission and write its artifacts");
  run->add_option("config", config_path, "scenario file")->required();
  auto* validate = app.add_subcommand("validate", "check a scenario and print it normalized");
  validate->add_option("config", config_path, "scenario file")->required();
  auto* spawn = app.add_subcommand("spawn-backends", "bring up vehicle backends for a scenario");
  spawn->add_option("config", config_path, "scenario file")->required();
  auto* replay = app.add_subcommand("replay", "re-derive metrics from a wire trace");
  replay->add_option("config", config_path, "scenario file")->required();
  replay->add_option("trace", trace_path, "trace file from a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (validate->parsed()) return cmd_validate(config_path);
    if (spawn->parsed()) return cmd_spawn_backends(config_path);
    if (replay->parsed()) return cmd_replay(config_path, trace_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return 0;
}
