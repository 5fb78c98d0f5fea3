#include "ipp/mission.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ipp/fleet_local.hpp"
#include "ipp/planners.hpp"

namespace ipp {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::unique_ptr<Environment> make_environment(const ScenarioConfig& c, const GridGraph& g,
                                              const ScalarField& truth) {
  switch (c.env) {
    case EnvKind::Gp:
      return std::make_unique<GpBasedEnv>(g, truth, c.gp, c.noise_std, c.seed ^ 0x6d697373ull);
    case EnvKind::Trash: {
      std::map<NodeId, int> trash;
      Rng rng(c.seed ^ 0x74726173ull);
      for (int i = 0; i < c.trash_items; ++i)
        trash[static_cast<NodeId>(rng.uniform_index(g.node_count()))] += 1;
      return std::make_unique<TrashCleanEnv>(g, std::move(trash), c.vision_radius);
    }
    case EnvKind::Oil:
      return std::make_unique<OilSpillEnv>(g, truth, c.view_radius);
  }
  throw std::logic_error("unknown env kind");
}

}  // namespace

MissionResult run_mission(const ScenarioConfig& c, const MissionHooks* hooks) {
  const auto mask = OccupancyMask::from_file(c.mask_path);
  GeoReference geo = c.geo;
  geo.rows = mask.rows;
  geo.cols = mask.cols;
  const GridGraph graph = GridGraph::build_from_mask(mask, geo);

  ScalarField truth = c.field_synthetic ? generate_field(graph, c.field_spec)
                                        : load_external_map(graph, c.field_map_path);
  ScalarField zero_field;  // trash env carries no scalar signal
  auto env = make_environment(c, graph, truth);

  FleetConfig fleet_config;
  fleet_config.n_vehicles = c.n_vehicles;
  fleet_config.initial_positions = c.initial_positions;
  fleet_config.max_distance.assign(c.n_vehicles, c.max_distance);

  MissionResult result;
  if (c.env != EnvKind::Trash) result.ground_truth = truth.values;

  // fleet construction per execution level
  std::unique_ptr<SimWorld> world;
  std::unique_ptr<Fleet> fleet;
  if (c.level == ExecutionLevel::Local) {
    fleet = std::make_unique<LocalFleet>(graph, *env, fleet_config);
  } else {
    world = std::make_unique<SimWorld>(graph);
    // backends sense the shared field directly (synthetic measurement mode)
    const double backend_noise = c.env == EnvKind::Gp ? c.noise_std : 0.0;
    const ScalarField* backend_field = &truth;
    if (c.env == EnvKind::Trash) {
      zero_field.name = "trash";
      zero_field.values.assign(graph.node_count(), 0.0);
      backend_field = &zero_field;
    }
    for (int i = 0; i < c.n_vehicles; ++i)
      world->add_backend(c.remote.vehicle_id_prefix + std::to_string(i), backend_field,
                         backend_noise, c.seed * 1000003ull + i, c.backend,
                         c.initial_positions[i]);
    if (c.write_trace) {
      SimWorld* w = world.get();
      MissionResult* r = &result;
      world->broker().set_trace_sink([w, r](const std::string& topic, const std::string& payload) {
        // direction from the topic: cmd flows to the vehicle, the rest flows back
        const char* dir = topic.size() >= 4 && topic.compare(topic.size() - 4, 4, "/cmd") == 0
                              ? ">" : "<";
        r->trace.push_back(fmt(w->sim_time()) + " " + dir + " " + topic + " " + payload);
      });
    }
    if (hooks && hooks->on_world) hooks->on_world(*world);
    SimWorld* w = world.get();
    fleet = std::make_unique<RemoteFleet>(graph, world->broker(), fleet_config, c.remote,
                                          [w]() { w->step(); });
  }

  auto* gp_env = dynamic_cast<GpBasedEnv*>(env.get());
  std::vector<bool> planner_done(c.n_vehicles, false);
  std::unique_ptr<FloodingPlan> flooding;
  if (c.planner == PlannerKind::Flooding)
    flooding = std::make_unique<FloodingPlan>(graph, c.initial_positions);

  auto current_positions = [&]() {
    std::vector<NodeId> pos;
    for (const auto& s : fleet->states()) pos.push_back(s.position);
    return pos;
  };

  auto run_phase = [&](const std::vector<NodeId>& targets) {
    for (int guard = 0; guard < static_cast<int>(graph.node_count()) + 8; ++guard) {
      const MoveResult res = fleet->move(targets);
      if (res.all_settled()) break;
    }
    for (const auto& m : fleet->take_measurement()) env->ingest({m.vehicle, m.node}, m.value);
  };

  // the instantaneous level has no clock; distance at cruise speed keeps
  // its duration comparable with the remote level
  auto mission_time = [&]() {
    if (c.level == ExecutionLevel::Remote) return fleet->sim_time();
    double max_traveled = 0.0;
    for (const auto& s : fleet->states()) max_traveled = std::max(max_traveled, s.traveled);
    return max_traveled / c.backend.speed_limit;
  };

  auto record_step = [&](int step) {
    StepRecord rec;
    rec.step = step;
    rec.sim_time = mission_time();
    for (const auto& s : fleet->states()) rec.traveled.push_back(s.traveled);
    rec.mse = env->mse();
    rec.mean_std = env->mean_posterior_std();
    rec.coverage = env->coverage(graph);
    result.metrics.records.push_back(std::move(rec));
  };

  // step 0: measure at the starting positions before the first decision
  run_phase(current_positions());
  record_step(0);

  int step = 1;
  for (; step <= c.max_steps; ++step) {
    const auto& states = fleet->states();
    std::vector<bool> active(c.n_vehicles);
    bool any_active = false;
    for (int i = 0; i < c.n_vehicles; ++i) {
      active[i] = !states[i].done && !states[i].fault && !planner_done[i];
      any_active = any_active || active[i];
    }
    if (!any_active) break;
    if (hooks && hooks->on_step) hooks->on_step(step, world.get());

    const auto current = current_positions();
    PlannerDecision decision;
    switch (c.planner) {
      case PlannerKind::Greedy:
        decision = greedy_next(gp_env->posterior(), graph, current, &active);
        break;
      case PlannerKind::ExpectedImprovement: {
        AcquisitionParams params;
        params.xi = c.xi;
        params.f_best = gp_env->f_best();
        std::vector<double> budget;
        for (const auto& s : states) budget.push_back(s.max_distance - s.traveled);
        decision = ei_next(gp_env->posterior(), graph, current, params, budget, &active);
        break;
      }
      case PlannerKind::Flooding:
        decision = flooding->next(current);
        break;
    }

    std::vector<NodeId> targets(c.n_vehicles);
    for (int i = 0; i < c.n_vehicles; ++i) {
      if (!active[i]) {
        targets[i] = current[i];
        continue;
      }
      if (decision.done[i]) {
        planner_done[i] = true;
        targets[i] = current[i];
        continue;
      }
      targets[i] = decision.targets[i];
      result.decisions.push_back({step, i, targets[i]});
    }

    run_phase(targets);
    record_step(step);
  }

  result.steps = step - 1;
  result.final_states = fleet->states();
  result.visit_log = fleet->visit_log();
  result.duration = mission_time();
  result.final_coverage = env->coverage(graph);
  result.final_mse = env->mse();
  result.final_mean_std = env->mean_posterior_std();
  for (const auto& s : result.final_states) result.fault = result.fault || s.fault;
  if (gp_env && !gp_env->observation_log().empty()) result.final_posterior = gp_env->posterior();
  return result;
}

std::string metrics_csv(const MissionResult& result, int n_vehicles) {
  std::string out = "step,sim_time";
  for (int i = 0; i < n_vehicles; ++i) out += ",traveled_" + std::to_string(i);
  out += ",mse,mean_std,coverage\n";
  for (const auto& r : result.metrics.records) {
    out += std::to_string(r.step) + "," + fmt(r.sim_time);
    for (double t : r.traveled) out += "," + fmt(t);
    out += ",";
    out += r.mse ? fmt(*r.mse) : "na";
    out += ",";
    out += r.mean_std ? fmt(*r.mean_std) : "na";
    out += "," + fmt(r.coverage) + "\n";
  }
  return out;
}

void write_artifacts(const ScenarioConfig& c, const MissionResult& result,
                     const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const std::string& name) { return (fs::path(out_dir) / name).string(); };

  {
    std::ofstream f(path("metrics.csv"));
    f << metrics_csv(result, c.n_vehicles);
  }
  {
    std::ofstream f(path("visits.csv"));
    f << "vehicle,node\n";
    for (const auto& v : result.visit_log) f << v.vehicle << "," << v.node << "\n";
  }
  {
    std::ofstream f(path("decisions.csv"));
    f << "step,vehicle,target\n";
    for (const auto& d : result.decisions) f << d.step << "," << d.vehicle << "," << d.target << "\n";
  }
  {
    std::ofstream f(path("config.json"));
    f << c.normalized().dump(2) << "\n";
  }

  nlohmann::json summary;
  summary["run_id"] = c.run_id();
  summary["steps"] = result.steps;
  summary["duration_s"] = result.duration;
  summary["coverage"] = result.final_coverage;
  if (result.final_mse) summary["mse"] = *result.final_mse;
  else summary["mse"] = nullptr;
  if (result.final_mean_std) summary["mean_std"] = *result.final_mean_std;
  else summary["mean_std"] = nullptr;
  summary["fault"] = result.fault;
  auto& vehicles = summary["vehicles"] = nlohmann::json::array();
  for (const auto& s : result.final_states)
    vehicles.push_back({{"id", s.id}, {"position", s.position}, {"traveled", s.traveled},
                        {"done", s.done}, {"fault", s.fault}});
  {
    std::ofstream f(path("summary.json"));
    f << summary.dump(2) << "\n";
  }

  if (!result.final_posterior.mean.empty()) {
    const auto mask = OccupancyMask::from_file(c.mask_path);
    GeoReference geo = c.geo;
    geo.rows = mask.rows;
    geo.cols = mask.cols;
    const GridGraph graph = GridGraph::build_from_mask(mask, geo);
    write_field_csv(graph, result.final_posterior.mean, path("posterior_mean.csv"));
    write_field_csv(graph, result.final_posterior.std, path("posterior_std.csv"));
    if (!result.ground_truth.empty())
      write_field_csv(graph, result.ground_truth, path("ground_truth.csv"));
  }

  if (!result.trace.empty()) {
    std::ofstream f(path("trace.log"));
    for (const auto& line : result.trace) f << line << "\n";
  }
}

}  // namespace ipp
