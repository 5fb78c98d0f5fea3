#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ipp/grid_graph.hpp"

namespace ipp {

enum class MsgKind { Goto, Ack, State, Measurement, Error };

std::string to_string(MsgKind k);
std::optional<MsgKind> msg_kind_from_string(const std::string& s);

/// One message on the fleet topics. `seq` increases per (vehicle, kind)
/// stream; only the fields of the message's kind are meaningful.
struct WireMessage {
  MsgKind kind = MsgKind::State;
  std::string vehicle_id;
  std::uint64_t seq = 0;

  // goto
  NodeId target_node = kInvalidNode;
  double lat = 0.0, lon = 0.0;

  // ack / error
  std::uint64_t acked_seq = 0;
  bool reached = false;
  std::string error;

  // measurement
  NodeId node = kInvalidNode;
  double value = 0.0;
  std::string param;
  std::uint64_t goto_seq = 0;

  // state / ack
  double sim_time = 0.0;

  bool operator==(const WireMessage&) const = default;
};

/// Self-describing single-line JSON encoding; decode of unknown fields is
/// tolerated and never throws.
std::string codec_encode(const WireMessage& msg);
/// Returns nullopt on malformed input and fills `error` with the offending
/// field or parse position.
std::optional<WireMessage> codec_decode(const std::string& bytes, std::string* error = nullptr);

/// Topic schema: fleet/{vehicle_id}/{cmd|ack|state|measurement}.
struct Topics {
  static std::string cmd(const std::string& vehicle_id);
  static std::string ack(const std::string& vehicle_id);
  static std::string state(const std::string& vehicle_id);
  static std::string measurement(const std::string& vehicle_id);
  /// vehicle ids must not contain topic separators
  static void validate_vehicle_id(const std::string& vehicle_id);
};

}  // namespace ipp
