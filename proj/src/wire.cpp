#include "ipp/wire.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace ipp {

using nlohmann::json;

std::string to_string(MsgKind k) {
  switch (k) {
    case MsgKind::Goto: return "goto";
    case MsgKind::Ack: return "ack";
    case MsgKind::State: return "state";
    case MsgKind::Measurement: return "measurement";
    case MsgKind::Error: return "error";
  }
  return "?";
}

std::optional<MsgKind> msg_kind_from_string(const std::string& s) {
  if (s == "goto") return MsgKind::Goto;
  if (s == "ack") return MsgKind::Ack;
  if (s == "state") return MsgKind::State;
  if (s == "measurement") return MsgKind::Measurement;
  if (s == "error") return MsgKind::Error;
  return std::nullopt;
}

std::string codec_encode(const WireMessage& m) {
  json j;
  j["kind"] = to_string(m.kind);
  j["vehicle"] = m.vehicle_id;
  j["seq"] = m.seq;
  switch (m.kind) {
    case MsgKind::Goto:
      j["target_node"] = m.target_node;
      j["lat"] = m.lat;
      j["lon"] = m.lon;
      break;
    case MsgKind::Ack:
      j["acked_seq"] = m.acked_seq;
      j["reached"] = m.reached;
      j["sim_time"] = m.sim_time;
      break;
    case MsgKind::State:
      j["lat"] = m.lat;
      j["lon"] = m.lon;
      j["sim_time"] = m.sim_time;
      break;
    case MsgKind::Measurement:
      j["node"] = m.node;
      j["value"] = m.value;
      j["param"] = m.param;
      j["goto_seq"] = m.goto_seq;
      break;
    case MsgKind::Error:
      j["acked_seq"] = m.acked_seq;
      j["error"] = m.error;
      break;
  }
  return j.dump();
}

namespace {

template <typename T>
bool read_field(const json& j, const char* name, T& out, std::string* error) {
  auto it = j.find(name);
  if (it == j.end()) {
    if (error) *error = std::string("missing field '") + name + "'";
    return false;
  }
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    if (error) *error = std::string("bad type for field '") + name + "'";
    return false;
  }
  return true;
}

}  // namespace

std::optional<WireMessage> codec_decode(const std::string& bytes, std::string* error) {
  json j = json::parse(bytes, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    if (error) *error = "not a JSON object";
    return std::nullopt;
  }
  WireMessage m;
  std::string kind;
  if (!read_field(j, "kind", kind, error)) return std::nullopt;
  const auto k = msg_kind_from_string(kind);
  if (!k) {
    if (error) *error = "unknown kind '" + kind + "'";
    return std::nullopt;
  }
  m.kind = *k;
  if (!read_field(j, "vehicle", m.vehicle_id, error)) return std::nullopt;
  if (!read_field(j, "seq", m.seq, error)) return std::nullopt;
  switch (m.kind) {
    case MsgKind::Goto:
      if (!read_field(j, "target_node", m.target_node, error)) return std::nullopt;
      if (!read_field(j, "lat", m.lat, error)) return std::nullopt;
      if (!read_field(j, "lon", m.lon, error)) return std::nullopt;
      break;
    case MsgKind::Ack:
      if (!read_field(j, "acked_seq", m.acked_seq, error)) return std::nullopt;
      if (!read_field(j, "reached", m.reached, error)) return std::nullopt;
      if (!read_field(j, "sim_time", m.sim_time, error)) return std::nullopt;
      break;
    case MsgKind::State:
      if (!read_field(j, "lat", m.lat, error)) return std::nullopt;
      if (!read_field(j, "lon", m.lon, error)) return std::nullopt;
      if (!read_field(j, "sim_time", m.sim_time, error)) return std::nullopt;
      break;
    case MsgKind::Measurement:
      if (!read_field(j, "node", m.node, error)) return std::nullopt;
      if (!read_field(j, "value", m.value, error)) return std::nullopt;
      if (!read_field(j, "param", m.param, error)) return std::nullopt;
      if (!read_field(j, "goto_seq", m.goto_seq, error)) return std::nullopt;
      break;
    case MsgKind::Error:
      if (!read_field(j, "acked_seq", m.acked_seq, error)) return std::nullopt;
      if (!read_field(j, "error", m.error, error)) return std::nullopt;
      break;
  }
  return m;
}

void Topics::validate_vehicle_id(const std::string& vehicle_id) {
  if (vehicle_id.empty() || vehicle_id.find('/') != std::string::npos ||
      vehicle_id.find('+') != std::string::npos || vehicle_id.find('#') != std::string::npos)
    throw std::invalid_argument("invalid vehicle id '" + vehicle_id + "'");
}

std::string Topics::cmd(const std::string& v) { return "fleet/" + v + "/cmd"; }
std::string Topics::ack(const std::string& v) { return "fleet/" + v + "/ack"; }
std::string Topics::state(const std::string& v) { return "fleet/" + v + "/state"; }
std::string Topics::measurement(const std::string& v) { return "fleet/" + v + "/measurement"; }

}  // namespace ipp
