#include "ipp/scenario.hpp"

#include <filesystem>
#include <fstream>

namespace ipp {

using nlohmann::json;

std::string planner_name(PlannerKind p) {
  switch (p) {
    case PlannerKind::Greedy: return "greedy";
    case PlannerKind::ExpectedImprovement: return "ei";
    case PlannerKind::Flooding: return "flooding";
  }
  return "?";
}

std::string env_name(EnvKind e) {
  switch (e) {
    case EnvKind::Gp: return "gp";
    case EnvKind::Trash: return "trash";
    case EnvKind::Oil: return "oil";
  }
  return "?";
}

std::string level_name(ExecutionLevel l) { return l == ExecutionLevel::Local ? "local" : "remote"; }

json ScenarioConfig::normalized() const {
  json j;
  j["seed"] = seed;
  j["mask"] = mask_path;
  j["geo"] = {{"lat_min", geo.lat_min}, {"lat_max", geo.lat_max}, {"lon_min", geo.lon_min},
              {"lon_max", geo.lon_max}, {"cell_area", geo.cell_area}};
  if (field_synthetic) {
    j["field"] = {{"type", "synthetic"},
                  {"seed", field_spec.seed},
                  {"n_peaks", field_spec.n_peaks},
                  {"peak_width_range", {field_spec.peak_width_min, field_spec.peak_width_max}},
                  {"amplitude_range", {field_spec.amplitude_min, field_spec.amplitude_max}},
                  {"normalize", field_spec.normalize}};
  } else {
    j["field"] = {{"type", "map"}, {"path", field_map_path}};
  }
  j["env"] = env_name(env);
  j["noise_std"] = noise_std;
  j["gp"] = {{"lengthscale", gp.lengthscale}, {"signal_std", gp.signal_std},
             {"noise_std", gp.noise_std}};
  j["trash_items"] = trash_items;
  j["vision_radius"] = vision_radius;
  j["view_radius"] = view_radius;
  j["planner"] = planner_name(planner);
  j["xi"] = xi;
  j["mode"] = planner == PlannerKind::Greedy ? "sequential" : "target";
  j["n_vehicles"] = n_vehicles;
  j["initial_positions"] = initial_positions;
  j["max_distance"] = max_distance;
  j["level"] = level_name(level);
  j["backend"] = {{"tick_dt", backend.tick_dt},
                  {"reach_tolerance", backend.reach_tolerance},
                  {"gps_noise_std", backend.gps_noise_std},
                  {"speed_limit", backend.speed_limit},
                  {"state_period_ticks", backend.state_period_ticks}};
  j["broker"] = {{"host", broker_host}, {"port", broker_port}};
  j["remote"] = {{"vehicle_id_prefix", remote.vehicle_id_prefix},
                 {"ack_timeout_base", remote.ack_timeout_base},
                 {"max_retries", remote.max_retries}};
  j["max_steps"] = max_steps;
  j["output_root"] = output_root;
  j["write_trace"] = write_trace;
  return j;
}

std::string ScenarioConfig::run_id() const {
  // FNV-1a over the normalized recipe
  const std::string text = normalized().dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%08x-seed%llu", static_cast<unsigned>(h & 0xffffffffu),
                static_cast<unsigned long long>(seed));
  return buf;
}

namespace {

class Reader {
 public:
  Reader(const json& j, std::vector<std::string>& errors) : j_(j), errors_(errors) {}

  template <typename T>
  void get(const char* key, T& out, bool required = false) {
    auto it = j_.find(key);
    if (it == j_.end()) {
      if (required) errors_.push_back(std::string(key) + ": missing required field");
      return;
    }
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      errors_.push_back(std::string(key) + ": wrong type");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw() const { return j_; }

 private:
  const json& j_;
  std::vector<std::string>& errors_;
};

}  // namespace

ValidationResult parse_scenario(const json& j) {
  ValidationResult res;
  auto& errors = res.errors;
  if (!j.is_object()) {
    errors.push_back("config: not a JSON object");
    return res;
  }
  ScenarioConfig c;
  Reader r(j, errors);

  if (!r.has("seed")) errors.push_back("seed: missing required field (no wall-clock defaults)");
  r.get("seed", c.seed);
  r.get("mask", c.mask_path, true);

  if (r.has("geo")) {
    Reader g(j.at("geo"), errors);
    g.get("lat_min", c.geo.lat_min);
    g.get("lat_max", c.geo.lat_max);
    g.get("lon_min", c.geo.lon_min);
    g.get("lon_max", c.geo.lon_max);
    g.get("cell_area", c.geo.cell_area);
  }
  if (c.geo.cell_area <= 0.0) errors.push_back("geo.cell_area: must be positive");
  if (c.geo.lat_max == c.geo.lat_min && c.geo.lat_max == 0.0) {
    // degenerate default box: synthesize a small one so georeferencing works
    c.geo.lat_min = 0.0;
    c.geo.lat_max = 0.01;
    c.geo.lon_min = 0.0;
    c.geo.lon_max = 0.01;
  }

  if (r.has("field")) {
    Reader f(j.at("field"), errors);
    std::string type = "synthetic";
    f.get("type", type);
    if (type == "synthetic") {
      c.field_synthetic = true;
      c.field_spec.seed = c.seed;  // default: mission seed
      f.get("seed", c.field_spec.seed);
      f.get("n_peaks", c.field_spec.n_peaks);
      std::vector<double> range;
      if (f.has("peak_width_range")) {
        f.get("peak_width_range", range);
        if (range.size() == 2) {
          c.field_spec.peak_width_min = range[0];
          c.field_spec.peak_width_max = range[1];
        } else {
          errors.push_back("field.peak_width_range: expected [min, max]");
        }
      }
      range.clear();
      if (f.has("amplitude_range")) {
        f.get("amplitude_range", range);
        if (range.size() == 2) {
          c.field_spec.amplitude_min = range[0];
          c.field_spec.amplitude_max = range[1];
        } else {
          errors.push_back("field.amplitude_range: expected [min, max]");
        }
      }
      f.get("normalize", c.field_spec.normalize);
      try {
        c.field_spec.validate();
      } catch (const std::exception& e) {
        errors.push_back(std::string("field: ") + e.what());
      }
    } else if (type == "map") {
      c.field_synthetic = false;
      f.get("path", c.field_map_path, true);
    } else {
      errors.push_back("field.type: must be 'synthetic' or 'map'");
    }
  } else {
    c.field_spec.seed = c.seed;
  }

  std::string env = "gp";
  r.get("env", env);
  if (env == "gp")
    c.env = EnvKind::Gp;
  else if (env == "trash")
    c.env = EnvKind::Trash;
  else if (env == "oil")
    c.env = EnvKind::Oil;
  else
    errors.push_back("env: must be one of gp, trash, oil");

  r.get("noise_std", c.noise_std);
  if (c.noise_std < 0.0) errors.push_back("noise_std: must be >= 0");
  if (r.has("gp")) {
    Reader g(j.at("gp"), errors);
    g.get("lengthscale", c.gp.lengthscale);
    g.get("signal_std", c.gp.signal_std);
    g.get("noise_std", c.gp.noise_std);
    try {
      c.gp.validate();
    } catch (const std::exception& e) {
      errors.push_back(std::string("gp: ") + e.what());
    }
  }
  r.get("trash_items", c.trash_items);
  r.get("vision_radius", c.vision_radius);
  r.get("view_radius", c.view_radius);

  std::string planner = "greedy";
  r.get("planner", planner, true);
  if (planner == "greedy")
    c.planner = PlannerKind::Greedy;
  else if (planner == "ei")
    c.planner = PlannerKind::ExpectedImprovement;
  else if (planner == "flooding")
    c.planner = PlannerKind::Flooding;
  else
    errors.push_back("planner: must be one of greedy, ei, flooding");
  r.get("xi", c.xi);
  if (c.xi < 0.0) errors.push_back("xi: must be >= 0");

  if (r.has("mode")) {
    std::string mode;
    r.get("mode", mode);
    const std::string forced = (c.planner == PlannerKind::Greedy) ? "sequential" : "target";
    if (mode != forced)
      errors.push_back("mode: planner '" + planner + "' requires mode '" + forced + "'");
  }
  if ((c.planner == PlannerKind::Greedy || c.planner == PlannerKind::ExpectedImprovement) &&
      c.env != EnvKind::Gp)
    errors.push_back("planner: greedy/ei require the gp environment");

  r.get("n_vehicles", c.n_vehicles);
  if (c.n_vehicles < 1) errors.push_back("n_vehicles: must be >= 1");
  r.get("initial_positions", c.initial_positions);
  r.get("max_distance", c.max_distance);
  if (c.max_distance < 0.0) errors.push_back("max_distance: must be >= 0");

  std::string level = "local";
  r.get("level", level);
  if (level == "local")
    c.level = ExecutionLevel::Local;
  else if (level == "remote")
    c.level = ExecutionLevel::Remote;
  else
    errors.push_back("level: must be 'local' or 'remote'");

  if (r.has("backend")) {
    Reader b(j.at("backend"), errors);
    b.get("tick_dt", c.backend.tick_dt);
    b.get("reach_tolerance", c.backend.reach_tolerance);
    b.get("gps_noise_std", c.backend.gps_noise_std);
    b.get("speed_limit", c.backend.speed_limit);
    b.get("state_period_ticks", c.backend.state_period_ticks);
    try {
      c.backend.validate();
    } catch (const std::exception& e) {
      errors.push_back(std::string("backend: ") + e.what());
    }
  }
  if (r.has("broker")) {
    Reader b(j.at("broker"), errors);
    b.get("host", c.broker_host);
    b.get("port", c.broker_port);
  }
  if (r.has("remote")) {
    Reader b(j.at("remote"), errors);
    b.get("vehicle_id_prefix", c.remote.vehicle_id_prefix);
    b.get("ack_timeout_base", c.remote.ack_timeout_base);
    b.get("max_retries", c.remote.max_retries);
  }
  c.remote.speed_limit = c.backend.speed_limit;
  c.remote.pump_dt = c.backend.tick_dt;

  r.get("max_steps", c.max_steps);
  if (c.max_steps < 1) errors.push_back("max_steps: must be >= 1");
  r.get("output_root", c.output_root);
  r.get("write_trace", c.write_trace);

  // file-level checks (only when structurally sound so far)
  if (errors.empty()) {
    if (!std::filesystem::exists(c.mask_path))
      errors.push_back("mask: file not found: " + c.mask_path);
    if (!c.field_synthetic && !std::filesystem::exists(c.field_map_path))
      errors.push_back("field.path: file not found: " + c.field_map_path);
  }
  if (errors.empty()) {
    try {
      const auto mask = OccupancyMask::from_file(c.mask_path);
      c.geo.rows = mask.rows;
      c.geo.cols = mask.cols;
      const auto g = GridGraph::build_from_mask(mask, c.geo);
      if (c.initial_positions.empty()) {
        // default start: central node of the map
        const auto [lat, lon] = c.geo.cell_center(mask.rows / 2, mask.cols / 2);
        c.initial_positions.assign(c.n_vehicles, g.latlon_to_node(lat, lon));
      }
      if (static_cast<int>(c.initial_positions.size()) != c.n_vehicles)
        errors.push_back("initial_positions: size must equal n_vehicles");
      for (NodeId n : c.initial_positions)
        if (!g.valid(n)) errors.push_back("initial_positions: node out of range");
    } catch (const std::exception& e) {
      errors.push_back(std::string("mask: ") + e.what());
    }
  }

  if (errors.empty()) res.config = std::move(c);
  return res;
}

ValidationResult load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {{}, {"config: cannot open " + path}};
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) return {{}, {"config: invalid JSON in " + path}};
  return parse_scenario(j);
}

}  // namespace ipp
