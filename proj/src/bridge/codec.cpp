// Copyright 2026 The platoonsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "platoonsim/bridge/codec.hpp"

#include <json.hpp>

namespace platoonsim::bridge {

using json = nlohmann::ordered_json;

namespace {

json vehicle_to_json(const VehicleState& v) {
  json j;
  // Field order is part of the wire contract; do not reorder.
  j["id"] = v.id;
  j["kind"] = to_string(v.kind);
  j["position_m"] = v.position_m;
  j["speed_mps"] = v.speed_mps;
  j["accel_mps2"] = v.accel_mps2;
  j["length_m"] = v.length_m;
  j["lane"] = v.lane;
  if (v.platoon_id) {
    j["platoon_id"] = *v.platoon_id;
  } else {
    j["platoon_id"] = nullptr;
  }
  j["platoon_state"] = to_string(v.platoon_state);
  j["control_mode"] = to_string(v.control_mode);
  if (v.position_in_platoon) {
    j["position_in_platoon"] = *v.position_in_platoon;
  } else {
    j["position_in_platoon"] = nullptr;
  }
  return j;
}

double require_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw CodecError(kErrMalformed, std::string("missing number field ") + key);
  }
  return j[key].get<double>();
}

int require_int(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw CodecError(kErrMalformed,
                     std::string("missing integer field ") + key);
  }
  return j[key].get<int>();
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw CodecError(kErrMalformed, std::string("missing string field ") + key);
  }
  return j[key].get<std::string>();
}

VehicleState vehicle_from_json(const json& j) {
  VehicleState v;
  try {
    v.id = require_string(j, "id");
    v.kind = vehicle_kind_from_string(require_string(j, "kind"));
    v.position_m = require_number(j, "position_m");
    v.speed_mps = require_number(j, "speed_mps");
    v.accel_mps2 = require_number(j, "accel_mps2");
    v.length_m = require_number(j, "length_m");
    v.lane = require_int(j, "lane");
    if (j.contains("platoon_id") && !j["platoon_id"].is_null()) {
      v.platoon_id = j["platoon_id"].get<std::string>();
    }
    v.platoon_state = platoon_state_from_string(
        require_string(j, "platoon_state"));
    v.control_mode = control_mode_from_string(
        require_string(j, "control_mode"));
    if (j.contains("position_in_platoon") &&
        !j["position_in_platoon"].is_null()) {
      v.position_in_platoon = j["position_in_platoon"].get<int>();
    }
  } catch (const std::invalid_argument& e) {
    throw CodecError(kErrMalformed, e.what());
  }
  return v;
}

json command_to_json(const CommandRecord& c) {
  json j;
  j["vehicle_id"] = c.vehicle_id;
  j["accel_cmd_mps2"] = c.accel_cmd_mps2;
  j["issued_at_s"] = c.issued_at_s;
  return j;
}

CommandRecord command_from_json(const json& j) {
  CommandRecord c;
  c.vehicle_id = require_string(j, "vehicle_id");
  c.accel_cmd_mps2 = require_number(j, "accel_cmd_mps2");
  c.issued_at_s = require_number(j, "issued_at_s");
  return c;
}

struct EncodeVisitor {
  json& j;

  void operator()(const Hello& m) const {
    j["protocol_version"] = m.protocol_version;
    j["dt_s"] = m.dt_s;
  }
  void operator()(const HelloAck& m) const {
    j["protocol_version"] = m.protocol_version;
  }
  void operator()(const QueryState& m) const { j["t_s"] = m.t_s; }
  void operator()(const State& m) const {
    j["t_s"] = m.t_s;
    json vs = json::array();
    for (const auto& v : m.vehicles) vs.push_back(vehicle_to_json(v));
    j["vehicles"] = std::move(vs);
  }
  void operator()(const Apply& m) const {
    j["t_s"] = m.t_s;
    json cs = json::array();
    for (const auto& c : m.commands) cs.push_back(command_to_json(c));
    j["commands"] = std::move(cs);
  }
  void operator()(const Step& m) const { j["dt_s"] = m.dt_s; }
  void operator()(const Stepped& m) const { j["t_s"] = m.t_s; }
  void operator()(const Event& m) const {
    j["kind"] = m.kind;
    j["at_time_s"] = m.insertion.at_time_s;
    j["target_platoon_id"] = m.insertion.target_platoon_id;
    j["insert_after_index"] = m.insertion.insert_after_index;
    j["intruder_speed_mps"] = m.insertion.intruder_speed_mps;
    j["intruder_length_m"] = m.insertion.intruder_length_m;
  }
  void operator()(const Error& m) const {
    j["code"] = m.code;
    j["detail"] = m.detail;
  }
  void operator()(const Bye&) const {}
};

}  // namespace

std::string tag_of(const Payload& payload) {
  struct V {
    std::string operator()(const Hello&) const { return "HELLO"; }
    std::string operator()(const HelloAck&) const { return "HELLO_ACK"; }
    std::string operator()(const QueryState&) const { return "QUERY_STATE"; }
    std::string operator()(const State&) const { return "STATE"; }
    std::string operator()(const Apply&) const { return "APPLY"; }
    std::string operator()(const Step&) const { return "STEP"; }
    std::string operator()(const Stepped&) const { return "STEPPED"; }
    std::string operator()(const Event&) const { return "EVENT"; }
    std::string operator()(const Error&) const { return "ERROR"; }
    std::string operator()(const Bye&) const { return "BYE"; }
  };
  return std::visit(V{}, payload);
}

std::string encode(const Message& message) {
  json j;
  j["seq"] = message.seq;
  j["tag"] = tag_of(message.payload);
  std::visit(EncodeVisitor{j}, message.payload);
  return j.dump();
}

Message decode(const std::string& payload) {
  json j = json::parse(payload, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw CodecError(kErrMalformed, "payload is not a JSON object");
  }
  Message m;
  if (!j.contains("seq") || !j["seq"].is_number_unsigned()) {
    throw CodecError(kErrMalformed, "missing seq");
  }
  m.seq = j["seq"].get<std::uint64_t>();
  const std::string tag = require_string(j, "tag");

  if (tag == "HELLO") {
    Hello p;
    p.protocol_version = require_string(j, "protocol_version");
    p.dt_s = require_number(j, "dt_s");
    m.payload = p;
  } else if (tag == "HELLO_ACK") {
    HelloAck p;
    p.protocol_version = require_string(j, "protocol_version");
    m.payload = p;
  } else if (tag == "QUERY_STATE") {
    m.payload = QueryState{require_number(j, "t_s")};
  } else if (tag == "STATE") {
    State p;
    p.t_s = require_number(j, "t_s");
    if (!j.contains("vehicles") || !j["vehicles"].is_array()) {
      throw CodecError(kErrMalformed, "STATE without vehicles array");
    }
    for (const auto& vj : j["vehicles"]) {
      p.vehicles.push_back(vehicle_from_json(vj));
    }
    m.payload = std::move(p);
  } else if (tag == "APPLY") {
    Apply p;
    p.t_s = require_number(j, "t_s");
    if (!j.contains("commands") || !j["commands"].is_array()) {
      throw CodecError(kErrMalformed, "APPLY without commands array");
    }
    for (const auto& cj : j["commands"]) {
      p.commands.push_back(command_from_json(cj));
    }
    m.payload = std::move(p);
  } else if (tag == "STEP") {
    m.payload = Step{require_number(j, "dt_s")};
  } else if (tag == "STEPPED") {
    m.payload = Stepped{require_number(j, "t_s")};
  } else if (tag == "EVENT") {
    Event p;
    p.kind = require_string(j, "kind");
    if (p.kind != "insert_vehicle") {
      throw CodecError(kErrMalformed, "unknown event kind " + p.kind);
    }
    p.insertion.at_time_s = require_number(j, "at_time_s");
    p.insertion.target_platoon_id = require_string(j, "target_platoon_id");
    p.insertion.insert_after_index = require_int(j, "insert_after_index");
    p.insertion.intruder_speed_mps = require_number(j, "intruder_speed_mps");
    p.insertion.intruder_length_m = require_number(j, "intruder_length_m");
    m.payload = std::move(p);
  } else if (tag == "ERROR") {
    Error p;
    p.code = require_string(j, "code");
    p.detail = require_string(j, "detail");
    m.payload = std::move(p);
  } else if (tag == "BYE") {
    m.payload = Bye{};
  } else {
    throw CodecError(kErrUnknownTag, "unknown message tag " + tag);
  }
  return m;
}

std::string frame(const std::string& payload) {
  if (payload.size() > kMaxFrameBytes) {
    throw CodecError(kErrOversize, "frame payload exceeds 16 MiB");
  }
  const auto n = static_cast<std::uint32_t>(payload.size());
  std::string out;
  out.reserve(payload.size() + 4);
  out.push_back(static_cast<char>((n >> 24) & 0xff));
  out.push_back(static_cast<char>((n >> 16) & 0xff));
  out.push_back(static_cast<char>((n >> 8) & 0xff));
  out.push_back(static_cast<char>(n & 0xff));
  out += payload;
  return out;
}

bool unframe(const std::string& buffer, std::size_t& offset,
             std::string& payload_out) {
  if (buffer.size() - offset < 4) return false;
  const auto b = [&](std::size_t i) {
    return static_cast<std::uint32_t>(
        static_cast<unsigned char>(buffer[offset + i]));
  };
  const std::uint32_t n = (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
  if (n > kMaxFrameBytes) {
    throw CodecError(kErrOversize, "frame length exceeds 16 MiB");
  }
  if (buffer.size() - offset - 4 < n) return false;
  payload_out = buffer.substr(offset + 4, n);
  offset += 4 + n;
  return true;
}

}  // namespace platoonsim::bridge
