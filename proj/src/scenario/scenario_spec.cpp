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

#include "platoonsim/scenario/scenario_spec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "platoonsim/authority/authority.hpp"
#include "platoonsim/scenario/toml_lite.hpp"

namespace platoonsim::scenario {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::ostringstream os;
  os << issues.size() << " scenario issue(s)";
  for (const auto& i : issues) os << "\n  - " << i;
  return os.str();
}

/// Collects validation issues with file locations attached.
class Issues {
 public:
  explicit Issues(std::string origin) : origin_(std::move(origin)) {}

  void add(int line, const std::string& msg) {
    std::ostringstream os;
    os << origin_;
    if (line > 0) os << ":" << line;
    os << ": " << msg;
    list_.push_back(os.str());
  }

  bool empty() const { return list_.empty(); }
  std::vector<std::string> take() { return std::move(list_); }

 private:
  std::string origin_;
  std::vector<std::string> list_;
};

class TableReader {
 public:
  TableReader(const TomlTable* table, Issues& issues)
      : table_(table), issues_(issues) {}

  bool present() const { return table_ != nullptr; }
  int line() const { return table_ ? table_->line : 0; }

  double number(const std::string& key, double fallback) {
    const TomlValue* v = find_tracked(key);
    if (!v) return fallback;
    if (v->kind != TomlValue::Kind::Number) {
      issues_.add(v->line, "'" + key + "' must be a number");
      return fallback;
    }
    return v->num;
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const TomlValue* v = find_tracked(key);
    if (!v) return fallback;
    if (v->kind != TomlValue::Kind::String) {
      issues_.add(v->line, "'" + key + "' must be a string");
      return fallback;
    }
    return v->str;
  }

  bool has(const std::string& key) const {
    return table_ && table_->find(key) != nullptr;
  }

  int value_line(const std::string& key) const {
    const TomlValue* v = table_ ? table_->find(key) : nullptr;
    return v ? v->line : line();
  }

  /// Reports keys nobody consumed — usually typos.
  void report_unknown_keys() {
    if (!table_) return;
    for (const auto& [key, value] : table_->values) {
      if (!used_.count(key)) {
        issues_.add(value.line, "unknown key '" + key + "'");
      }
    }
  }

 private:
  const TomlValue* find_tracked(const std::string& key) {
    if (!table_) return nullptr;
    used_.insert(key);
    return table_->find(key);
  }

  const TomlTable* table_;
  Issues& issues_;
  std::set<std::string> used_;
};

}  // namespace

ScenarioValidationError::ScenarioValidationError(
    std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

std::int64_t ScenarioSpec::step_count() const {
  return authority::grid_steps_ceil(horizon_s, dt_s);
}

bool ScenarioSpec::platoon_preformed() const {
  return platoon.size() >= 2 && !std::holds_alternative<JoinManeuver>(maneuver);
}

authority::ATEventKind at_event_kind_from_string(const std::string& s) {
  using K = authority::ATEventKind;
  if (s == "system_fault") return K::SystemFault;
  if (s == "leader_emergency_brake") return K::LeaderEmergencyBrake;
  if (s == "odd_exit") return K::OddExit;
  if (s == "driver_takeover") return K::DriverTakeoverRequest;
  if (s == "driver_activation") return K::DriverActivationRequest;
  throw std::invalid_argument("unknown authority event kind: " + s);
}

std::string to_string(authority::ATEventKind kind) {
  using K = authority::ATEventKind;
  switch (kind) {
    case K::SystemFault:
      return "system_fault";
    case K::LeaderEmergencyBrake:
      return "leader_emergency_brake";
    case K::OddExit:
      return "odd_exit";
    case K::DriverTakeoverRequest:
      return "driver_takeover";
    case K::DriverActivationRequest:
      return "driver_activation";
  }
  return "?";
}

ScenarioSpec parse_scenario_text(const std::string& text,
                                 const std::string& origin) {
  Issues issues(origin);
  TomlDocument doc;
  try {
    doc = parse_toml(text);
  } catch (const TomlParseError& e) {
    issues.add(e.line(), e.what());
    throw ScenarioValidationError(issues.take());
  }

  ScenarioSpec spec;
  {
    TableReader scen(doc.table("scenario"), issues);
    spec.name = scen.string("name", origin);
    scen.report_unknown_keys();
  }
  {
    TableReader run(doc.table("run"), issues);
    spec.dt_s = run.number("dt_s", spec.dt_s);
    spec.horizon_s = run.number("horizon_s", spec.horizon_s);
    spec.seed = static_cast<std::uint64_t>(
        run.number("seed", static_cast<double>(spec.seed)));
    if (spec.dt_s <= 0.0) {
      issues.add(run.value_line("dt_s"), "dt_s must be > 0");
      spec.dt_s = 0.1;
    }
    if (spec.horizon_s <= 0.0) {
      issues.add(run.value_line("horizon_s"), "horizon_s must be > 0");
    } else {
      const double steps = spec.horizon_s / spec.dt_s;
      if (std::abs(steps - std::round(steps)) > 1e-6) {
        issues.add(run.value_line("horizon_s"),
                   "horizon_s must be a multiple of dt_s");
      }
    }
    run.report_unknown_keys();
  }
  {
    TableReader cor(doc.table("corridor"), issues);
    spec.corridor.length_m = cor.number("length_m", spec.corridor.length_m);
    spec.corridor.speed_limit_mps =
        cor.number("speed_limit_mps", spec.corridor.speed_limit_mps);
    spec.corridor.lane_count = static_cast<int>(
        cor.number("lane_count", spec.corridor.lane_count));
    if (spec.corridor.length_m <= 0.0) {
      issues.add(cor.value_line("length_m"), "corridor length_m must be > 0");
    }
    if (spec.corridor.speed_limit_mps <= 0.0) {
      issues.add(cor.value_line("speed_limit_mps"),
                 "speed_limit_mps must be > 0");
    }
    if (spec.corridor.lane_count < 1) {
      issues.add(cor.value_line("lane_count"), "lane_count must be >= 1");
    }
    cor.report_unknown_keys();
  }
  {
    TableReader dem(doc.table("demand"), issues);
    spec.demand.arrival_rate_veh_per_h =
        dem.number("arrival_rate_veh_per_h", 0.0);
    spec.demand.truck_fraction = dem.number("truck_fraction", 0.0);
    spec.demand.entry_speed_mps = dem.number("entry_speed_mps", 30.0);
    if (spec.demand.arrival_rate_veh_per_h < 0.0) {
      issues.add(dem.value_line("arrival_rate_veh_per_h"),
                 "arrival_rate_veh_per_h must be >= 0");
    }
    if (spec.demand.truck_fraction < 0.0 ||
        spec.demand.truck_fraction > 1.0) {
      issues.add(dem.value_line("truck_fraction"),
                 "truck_fraction must lie in [0, 1]");
    }
    dem.report_unknown_keys();
  }

  auto platoons = doc.arrays.find("platoon");
  if (platoons != doc.arrays.end()) {
    std::set<std::string> ids;
    int index = 0;
    for (const auto& table : platoons->second) {
      TableReader tr(&table, issues);
      PlatoonMemberSpec m;
      m.id = tr.string("id", "T" + std::to_string(index));
      m.params.brand = tr.string("brand", m.params.brand);
      m.params.mass_kg = tr.number("mass_kg", m.params.mass_kg);
      m.params.engine_power_kw =
          tr.number("engine_power_kw", m.params.engine_power_kw);
      m.params.max_accel_mps2 =
          tr.number("max_accel_mps2", m.params.max_accel_mps2);
      m.params.max_decel_mps2 =
          tr.number("max_decel_mps2", m.params.max_decel_mps2);
      m.params.desired_speed_mps =
          tr.number("desired_speed_mps", m.params.desired_speed_mps);
      m.position_m = tr.number("position_m", 0.0);
      m.speed_mps = tr.number("speed_mps", m.params.desired_speed_mps);
      m.length_m = tr.number("length_m", m.length_m);
      m.params.previous_speed_mps = m.speed_mps;

      if (!ids.insert(m.id).second) {
        issues.add(tr.line(), "duplicate platoon member id '" + m.id + "'");
      }
      if (!(m.params.max_decel_mps2 < 0.0 && m.params.max_accel_mps2 > 0.0)) {
        issues.add(tr.line(), m.id + ": needs max_decel < 0 < max_accel");
      }
      if (m.params.mass_kg <= 0.0) {
        issues.add(tr.value_line("mass_kg"), m.id + ": mass_kg must be > 0");
      }
      if (m.params.engine_power_kw <= 0.0) {
        issues.add(tr.value_line("engine_power_kw"),
                   m.id + ": engine_power_kw must be > 0");
      }
      if (m.length_m <= 0.0) {
        issues.add(tr.value_line("length_m"), m.id + ": length_m must be > 0");
      }
      if (m.speed_mps < 0.0) {
        issues.add(tr.value_line("speed_mps"), m.id + ": speed_mps must be >= 0");
      }
      tr.report_unknown_keys();
      spec.platoon.push_back(std::move(m));
      ++index;
    }
    for (std::size_t i = 0; i + 1 < spec.platoon.size(); ++i) {
      if (spec.platoon[i].position_m <= spec.platoon[i + 1].position_m) {
        issues.add(platoons->second[i + 1].line,
                   "platoon order: positions must strictly decrease "
                   "(leader first)");
        break;
      }
    }
  }

  {
    TableReader man(doc.table("maneuver"), issues);
    const std::string type = man.string("type", "none");
    if (type == "none") {
      spec.maneuver = NoManeuver{};
    } else if (type == "stop_and_go") {
      StopAndGoManeuver m;
      m.cruise_speed_mps = man.number("cruise_speed_mps", m.cruise_speed_mps);
      m.decel_mag_mps2 = man.number("decel_mag_mps2", m.decel_mag_mps2);
      m.dwell_s = man.number("dwell_s", m.dwell_s);
      m.brake_at_s = man.number("brake_at_s", m.brake_at_s);
      if (m.decel_mag_mps2 <= 0.0) {
        issues.add(man.value_line("decel_mag_mps2"),
                   "decel_mag_mps2 must be > 0");
      }
      spec.maneuver = m;
    } else if (type == "cut_in") {
      CutInManeuver m;
      m.event.at_time_s = man.number("at_time_s", 20.0);
      m.event.target_platoon_id =
          man.string("target_platoon_id", kInitialPlatoonId);
      m.event.insert_after_index =
          static_cast<int>(man.number("insert_after_index", 0));
      m.event.intruder_speed_mps = man.number("intruder_speed_mps", 30.0);
      m.event.intruder_length_m = man.number("intruder_length_m", 4.5);
      if (m.event.at_time_s < 0.0) {
        issues.add(man.value_line("at_time_s"), "at_time_s must be >= 0");
      }
      if (m.event.insert_after_index < 0) {
        issues.add(man.value_line("insert_after_index"),
                   "insert_after_index must be >= 0");
      }
      spec.maneuver = m;
    } else if (type == "join") {
      spec.maneuver = JoinManeuver{};
    } else if (type == "split") {
      SplitManeuver m;
      m.at_time_s = man.number("at_time_s", 0.0);
      m.index = static_cast<int>(man.number("index", 0));
      if (m.index < 0) {
        issues.add(man.value_line("index"), "split index must be >= 0");
      }
      spec.maneuver = m;
    } else {
      issues.add(man.value_line("type"), "unknown maneuver type '" + type + "'");
    }
    man.report_unknown_keys();
  }

  {
    TableReader ctl(doc.table("controller"), issues);
    auto& c = spec.controller;
    c.d0_m = ctl.number("d0_m", c.d0_m);
    c.kp_per_s2 = ctl.number("kp_per_s2", c.kp_per_s2);
    c.kv_per_s = ctl.number("kv_per_s", c.kv_per_s);
    c.k_free_per_s = ctl.number("k_free_per_s", c.k_free_per_s);
    c.k_ff = ctl.number("k_ff", c.k_ff);
    c.sensor_range_m = ctl.number("sensor_range_m", c.sensor_range_m);
    c.gap_noise_half_width_m =
        ctl.number("gap_noise_half_width_m", c.gap_noise_half_width_m);
    if (c.d0_m <= 0.0) issues.add(ctl.value_line("d0_m"), "d0_m must be > 0");
    if (c.kp_per_s2 <= 0.0 || c.kv_per_s <= 0.0 || c.k_free_per_s <= 0.0) {
      issues.add(ctl.line(), "controller gains must be > 0");
    }
    if (c.sensor_range_m <= 0.0) {
      issues.add(ctl.value_line("sensor_range_m"),
                 "sensor_range_m must be > 0");
    }
    ctl.report_unknown_keys();
  }

  {
    TableReader tac(doc.table("tactical"), issues);
    auto& t = spec.tactical;
    t.t_platoon_s = tac.number("t_platoon_s", t.t_platoon_s);
    t.t_split_s = tac.number("t_split_s", t.t_split_s);
    t.t_standalone_s = tac.number("t_standalone_s", t.t_standalone_s);
    t.join_activation_gap_m =
        tac.number("join_activation_gap_m", t.join_activation_gap_m);
    t.join_abandon_gap_m =
        tac.number("join_abandon_gap_m", t.join_abandon_gap_m);
    t.join_pos_tol_m = tac.number("join_pos_tol_m", t.join_pos_tol_m);
    t.join_speed_tol_mps =
        tac.number("join_speed_tol_mps", t.join_speed_tol_mps);
    t.split_complete_time_gap_s =
        tac.number("split_complete_time_gap_s", t.split_complete_time_gap_s);
    t.cutin_patience_s = tac.number("cutin_patience_s", t.cutin_patience_s);
    t.dv_approach_mps = tac.number("dv_approach_mps", t.dv_approach_mps);
    t.max_platoon_length =
        static_cast<int>(tac.number("max_platoon_length", t.max_platoon_length));
    // Keep the join-completion spacing guard aligned with the controller.
    t.d0_m = tac.number("d0_m", spec.controller.d0_m);
    if (t.t_platoon_s <= 0.0 || t.t_split_s <= 0.0 || t.t_standalone_s <= 0.0) {
      issues.add(tac.line(), "tactical time gaps must be > 0");
    }
    if (t.max_platoon_length < 1) {
      issues.add(tac.value_line("max_platoon_length"),
                 "max_platoon_length must be >= 1");
    }
    tac.report_unknown_keys();
  }

  {
    TableReader aut(doc.table("authority"), issues);
    auto& a = spec.authority;
    a.reaction_time_s = aut.number("reaction_time_s", a.reaction_time_s);
    a.min_inactive_time_s =
        aut.number("min_inactive_time_s", a.min_inactive_time_s);
    a.p_activate_per_s = aut.number("p_activate_per_s", a.p_activate_per_s);
    a.p_deactivate_per_s =
        aut.number("p_deactivate_per_s", a.p_deactivate_per_s);
    if (a.reaction_time_s < 0.0 || a.min_inactive_time_s < 0.0 ||
        a.p_activate_per_s < 0.0 || a.p_deactivate_per_s < 0.0) {
      issues.add(aut.line(), "authority values must be >= 0");
    }
    aut.report_unknown_keys();
  }

  auto at_events = doc.arrays.find("at_events");
  if (at_events != doc.arrays.end()) {
    for (const auto& table : at_events->second) {
      TableReader tr(&table, issues);
      ScriptedATEvent ev;
      ev.t_s = tr.number("t_s", 0.0);
      ev.vehicle_id = tr.string("vehicle", "");
      const std::string kind = tr.string("kind", "system_fault");
      try {
        ev.kind = at_event_kind_from_string(kind);
      } catch (const std::invalid_argument& e) {
        issues.add(tr.value_line("kind"), e.what());
      }
      if (ev.t_s < 0.0) {
        issues.add(tr.value_line("t_s"), "event t_s must be >= 0");
      }
      const bool known = std::any_of(
          spec.platoon.begin(), spec.platoon.end(),
          [&](const PlatoonMemberSpec& m) { return m.id == ev.vehicle_id; });
      if (!known) {
        issues.add(tr.value_line("vehicle"),
                   "at_event vehicle '" + ev.vehicle_id +
                       "' is not a platoon member");
      }
      tr.report_unknown_keys();
      spec.at_events.push_back(std::move(ev));
    }
  }

  for (const auto& [name, table] : doc.tables) {
    static const std::set<std::string> known = {
        "scenario", "run", "corridor", "demand",
        "maneuver", "controller", "tactical", "authority"};
    if (!known.count(name)) {
      issues.add(table.line, "unknown section [" + name + "]");
    }
  }
  for (const auto& [name, tables] : doc.arrays) {
    if (name != "platoon" && name != "at_events") {
      issues.add(tables.front().line, "unknown section [[" + name + "]]");
    }
  }
  if (!doc.root.values.empty()) {
    issues.add(doc.root.values.begin()->second.line,
               "keys must live inside a section");
  }

  if (!issues.empty()) {
    throw ScenarioValidationError(issues.take());
  }
  return spec;
}

ScenarioSpec load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioValidationError({path + ": cannot open file"});
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

std::unique_ptr<ReferenceSimulator> make_reference_simulator(
    const ScenarioSpec& spec) {
  ReferenceSimulatorConfig cfg;
  cfg.corridor = spec.corridor;
  cfg.demand = spec.demand;
  cfg.dt_s = spec.dt_s;
  cfg.seed = spec.seed;

  const bool preformed = spec.platoon_preformed();
  int index = 0;
  for (const auto& m : spec.platoon) {
    VehicleSpawn s;
    s.state.id = m.id;
    s.state.kind = VehicleKind::Truck;
    s.state.lane = spec.platoon_lane;
    s.state.position_m = m.position_m;
    s.state.speed_mps = m.speed_mps;
    s.state.length_m = m.length_m;
    s.state.control_mode = ControlMode::Automated;
    if (preformed) {
      s.state.platoon_id = kInitialPlatoonId;
      s.state.position_in_platoon = index;
      s.state.platoon_state = PlatoonState::Platooning;
    }
    s.max_accel_mps2 = m.params.max_accel_mps2;
    s.max_decel_mps2 = m.params.max_decel_mps2;
    s.desired_speed_mps = m.params.desired_speed_mps;
    // Manual fallback (authority handovers) drives the truck with the IDM,
    // bounded by the same brand limits.
    s.idm.max_accel_mps2 = std::min(1.4, m.params.max_accel_mps2);
    s.idm.comfortable_decel_mps2 = std::min(2.0, -m.params.max_decel_mps2);
    s.commandable = true;
    cfg.initial_vehicles.push_back(std::move(s));
    ++index;
  }
  return std::make_unique<ReferenceSimulator>(std::move(cfg));
}

}  // namespace platoonsim::scenario
