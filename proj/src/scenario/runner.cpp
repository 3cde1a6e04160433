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

#include "platoonsim/scenario/runner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "platoonsim/authority/authority.hpp"
#include "platoonsim/core/ops.hpp"
#include "platoonsim/operational/controller.hpp"
#include "platoonsim/tactical/tactical.hpp"

namespace platoonsim::scenario {

namespace {

using authority::ATState;
using tactical::TacticalEvent;
using tactical::TacticalEventKind;

struct Membership {
  std::string platoon_id;
  int index = 0;
};

/// Runner-side platoon bookkeeping. The traffic platform only ever sees
/// spawn-time membership; everything live (joins, splits, re-parenting)
/// lives here and is overlaid onto working snapshots.
class PlatoonRegistry {
 public:
  void seed(const std::string& platoon_id,
            const std::vector<std::string>& member_ids) {
    platoons_[platoon_id] = member_ids;
    for (std::size_t i = 0; i < member_ids.size(); ++i) {
      members_[member_ids[i]] = {platoon_id, static_cast<int>(i)};
    }
  }

  std::optional<Membership> membership(const std::string& id) const {
    auto it = members_.find(id);
    if (it == members_.end()) return std::nullopt;
    return it->second;
  }

  int size(const std::string& platoon_id) const {
    auto it = platoons_.find(platoon_id);
    return it == platoons_.end() ? 0 : static_cast<int>(it->second.size());
  }

  std::optional<std::string> member_at(const std::string& platoon_id,
                                       int index) const {
    auto it = platoons_.find(platoon_id);
    if (it == platoons_.end()) return std::nullopt;
    if (index < 0 || index >= static_cast<int>(it->second.size())) {
      return std::nullopt;
    }
    return it->second[static_cast<std::size_t>(index)];
  }

  /// Gives a platoonless truck a fresh platoon with itself at index 0.
  std::string ensure_leader(const std::string& id) {
    if (auto m = membership(id)) return m->platoon_id;
    const std::string pid = mint_id();
    seed(pid, {id});
    return pid;
  }

  void append(const std::string& id, const std::string& platoon_id) {
    auto& members = platoons_[platoon_id];
    members.push_back(id);
    members_[id] = {platoon_id, static_cast<int>(members.size()) - 1};
  }

  /// Strips one member (join abandoned). Only sensible for the tail.
  void remove(const std::string& id) {
    auto m = membership(id);
    if (!m) return;
    auto& members = platoons_[m->platoon_id];
    members.erase(std::remove(members.begin(), members.end(), id),
                  members.end());
    members_.erase(id);
    reindex(m->platoon_id);
    if (members.empty()) platoons_.erase(m->platoon_id);
  }

  /// Split completion: `id` leaves its platoon and takes everything behind
  /// it along as a new platoon led by itself. The front part keeps the old
  /// platoon id and indices.
  void detach_with_tail(const std::string& id) {
    auto m = membership(id);
    if (!m) return;
    auto& members = platoons_[m->platoon_id];
    const auto at = std::find(members.begin(), members.end(), id);
    if (at == members.end()) return;
    std::vector<std::string> detached(at, members.end());
    members.erase(at, members.end());
    if (members.empty()) platoons_.erase(m->platoon_id);

    members_.erase(id);
    if (detached.size() > 1) {
      const std::string pid = mint_id();
      seed(pid, detached);
    } else {
      // No tail: the detached truck is simply platoonless now.
    }
  }

  /// Dissolves formations that shrank to a lone StandAlone member.
  void dissolve_lone(
      const std::function<PlatoonState(const std::string&)>& state_of) {
    std::vector<std::string> drop;
    for (const auto& [pid, members] : platoons_) {
      if (members.size() == 1 &&
          state_of(members.front()) == PlatoonState::StandAlone) {
        drop.push_back(pid);
      }
    }
    for (const auto& pid : drop) {
      members_.erase(platoons_[pid].front());
      platoons_.erase(pid);
    }
  }

 private:
  void reindex(const std::string& platoon_id) {
    auto it = platoons_.find(platoon_id);
    if (it == platoons_.end()) return;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      members_[it->second[i]] = {platoon_id, static_cast<int>(i)};
    }
  }

  std::string mint_id() { return "P" + std::to_string(next_id_++); }

  std::map<std::string, std::vector<std::string>> platoons_;
  std::map<std::string, Membership> members_;
  int next_id_ = 1;  // P0 is the pre-formed platoon
};

struct TruckRuntime {
  PlatoonMemberSpec spec;
  PlatoonState state = PlatoonState::StandAlone;
  double state_entered_s = 0.0;
  ATState at;
  Rng at_rng{0};
  std::optional<CommandRecord> last_command;
};

/// Leader forcing schedule of the stop-and-go maneuver; phases advance on
/// the observed leader speed, not precomputed times.
class StopAndGoForcer {
 public:
  explicit StopAndGoForcer(const StopAndGoManeuver& m) : m_(m) {}

  std::optional<double> force(double t, double leader_speed, double dt) {
    switch (phase_) {
      case Phase::PreCruise:
        if (t >= m_.brake_at_s) {
          phase_ = Phase::Braking;
          return force(t, leader_speed, dt);
        }
        return std::nullopt;
      case Phase::Braking:
        if (leader_speed <= 0.0) {
          phase_ = Phase::Dwell;
          dwell_until_ = t + m_.dwell_s;
          return 0.0;
        }
        return -m_.decel_mag_mps2;
      case Phase::Dwell:
        if (t >= dwell_until_) {
          phase_ = Phase::Recover;
          return force(t, leader_speed, dt);
        }
        return 0.0;
      case Phase::Recover:
        if (leader_speed >= m_.cruise_speed_mps) {
          phase_ = Phase::Done;
          return std::nullopt;
        }
        // Last ramp step lands exactly on cruise speed.
        return std::min(m_.decel_mag_mps2,
                        (m_.cruise_speed_mps - leader_speed) / dt);
      case Phase::Done:
        return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  enum class Phase { PreCruise, Braking, Dwell, Recover, Done };
  StopAndGoManeuver m_;
  Phase phase_ = Phase::PreCruise;
  double dwell_until_ = 0.0;
};

std::optional<double> record_gap(const Snapshot& snap,
                                 const VehicleState& ego) {
  const VehicleState* leader = nullptr;
  for (const auto& v : snap.vehicles) {
    if (v.id == ego.id || v.lane != ego.lane) continue;
    if (v.position_m <= ego.position_m) continue;
    if (!leader || v.position_m < leader->position_m) leader = &v;
  }
  if (!leader) return std::nullopt;
  return gap(*leader, ego);
}

}  // namespace

RunResult run(const ScenarioSpec& spec, SimulatorHandle& handle,
              const RunHooks& hooks) {
  RunResult result;
  auto log = [&](const std::string& line) { result.log.push_back(line); };

  // Per-truck runtime state, in spec order (determinism contract).
  std::vector<TruckRuntime> trucks;
  PlatoonRegistry registry;
  const Rng scenario_rng(spec.seed);
  {
    const bool preformed = spec.platoon_preformed();
    std::vector<std::string> member_ids;
    for (const auto& m : spec.platoon) {
      TruckRuntime rt;
      rt.spec = m;
      rt.state =
          preformed ? PlatoonState::Platooning : PlatoonState::StandAlone;
      rt.at.mode = ControlMode::Automated;
      rt.at_rng = scenario_rng.fork("authority").fork(m.id);
      trucks.push_back(std::move(rt));
      member_ids.push_back(m.id);
    }
    if (preformed) registry.seed(kInitialPlatoonId, member_ids);
  }
  auto truck_by_id = [&](const std::string& id) -> TruckRuntime* {
    for (auto& t : trucks) {
      if (t.spec.id == id) return &t;
    }
    return nullptr;
  };
  auto mutable_vehicle = [](Snapshot& snap,
                            const std::string& id) -> VehicleState* {
    for (auto& v : snap.vehicles) {
      if (v.id == id) return &v;
    }
    return nullptr;
  };

  // Maneuver setup.
  std::optional<StopAndGoForcer> stop_and_go;
  std::optional<SplitManeuver> split;
  if (const auto* m = std::get_if<StopAndGoManeuver>(&spec.maneuver)) {
    stop_and_go.emplace(*m);
  } else if (const auto* c = std::get_if<CutInManeuver>(&spec.maneuver)) {
    handle.inject_event(c->event);
  } else if (const auto* s = std::get_if<SplitManeuver>(&spec.maneuver)) {
    split = *s;
  }

  const double dt = spec.dt_s;
  const std::int64_t steps = spec.step_count();
  const std::string leader_id =
      spec.platoon.empty() ? std::string() : spec.platoon.front().id;

  for (std::int64_t n = 0; n < steps; ++n) {
    const double t = static_cast<double>(n) * dt;

    // (1) Query the traffic state and overlay runner-side platoon
    // bookkeeping; the raw snapshot keeps spawn-time membership only.
    Snapshot working;
    try {
      working = handle.query_state(t);
    } catch (const SimError& e) {
      result.aborted = true;
      result.abort_reason = e.what();
      log(std::string("abort at t=") + std::to_string(t) + ": " + e.what());
      return result;
    }
    for (auto& v : working.vehicles) {
      if (const TruckRuntime* rt = truck_by_id(v.id)) {
        v.platoon_state = rt->state;
        v.control_mode = rt->at.mode;
        if (auto m = registry.membership(v.id)) {
          v.platoon_id = m->platoon_id;
          v.position_in_platoon = m->index;
        } else {
          v.platoon_id.reset();
          v.position_in_platoon.reset();
        }
      }
    }

    // (2) Authority tick per truck; the resulting mode routes control for
    // this step.
    std::map<std::string, bool> hold_command;
    for (auto& rt : trucks) {
      std::vector<authority::ATEvent> events;
      for (const auto& ev : spec.at_events) {
        if (ev.vehicle_id == rt.spec.id &&
            authority::grid_steps_ceil(ev.t_s, dt) == n) {
          events.push_back({ev.kind, t});
        }
      }
      const auto tick =
          authority::tick(rt.at, events, rt.at_rng, t, dt, spec.authority);
      if (tick.state.mode != rt.at.mode) {
        log("t=" + std::to_string(t) + " " + rt.spec.id + " authority -> " +
            to_string(tick.state.mode));
      }
      rt.at = tick.state;
      hold_command[rt.spec.id] = tick.hold_last_command;
      if (VehicleState* v = mutable_vehicle(working, rt.spec.id)) {
        v->control_mode = tick.mode_for_step;
      }
    }

    // (3) Tactical + operational control per automated truck, all reading
    // the same frozen working snapshot. Membership edits are staged and
    // applied afterwards.
    std::vector<CommandRecord> commands;
    std::vector<std::function<void()>> membership_ops;
    for (auto& rt : trucks) {
      if (!working.find(rt.spec.id)) continue;  // left the corridor
      if (rt.at.mode != ControlMode::Automated) continue;
      if (hold_command[rt.spec.id]) {
        if (rt.last_command) {
          commands.push_back({rt.spec.id, rt.last_command->accel_cmd_mps2, t});
        }
        continue;
      }

      const VehicleState& ego = *working.find(rt.spec.id);
      const auto front = tactical::front_gap_scan(working, rt.spec.id);
      const auto rear =
          tactical::rear_gap_scan(working, rt.spec.id, spec.tactical);

      std::vector<TacticalEvent> events;
      if (split && split->at_time_s >= 0 &&
          authority::grid_steps_ceil(split->at_time_s, dt) == n) {
        const auto target =
            registry.member_at(kInitialPlatoonId, split->index);
        if (target && *target == rt.spec.id) {
          events.push_back({TacticalEventKind::DriverLeaveRequest, t});
          log("t=" + std::to_string(t) + " split: leave request to " +
              rt.spec.id);
        }
      }

      const PlatoonState proposed = tactical::classify(
          ego, front, rear, events, t - rt.state_entered_s, spec.tactical);
      const PlatoonState next = tactical::transition(rt.state, proposed);
      if (next != proposed) {
        log("t=" + std::to_string(t) + " " + rt.spec.id +
            " illegal transition suppressed: " + to_string(rt.state) +
            " -> " + to_string(proposed));
      }
      if (next != rt.state) {
        const PlatoonState prev = rt.state;
        const std::string id = rt.spec.id;
        const std::string front_leader_id =
            front.immediate_leader ? front.immediate_leader->id : "";
        const bool front_leader_in_platoon =
            front.immediate_leader && front.immediate_leader->platoon_id;
        const std::string front_leader_pid =
            front_leader_in_platoon ? *front.immediate_leader->platoon_id
                                    : "";
        membership_ops.push_back([=, &registry]() {
          if (prev == PlatoonState::StandAlone &&
              next == PlatoonState::Joining && !registry.membership(id)) {
            // Join target: an existing platoon's tail or a lone truck.
            if (!front_leader_id.empty()) {
              const std::string pid =
                  front_leader_in_platoon
                      ? front_leader_pid
                      : registry.ensure_leader(front_leader_id);
              registry.append(id, pid);
            }
          } else if (prev == PlatoonState::Joining &&
                     next == PlatoonState::StandAlone) {
            registry.remove(id);
          } else if (next == PlatoonState::StandAlone &&
                     (prev == PlatoonState::FrontSplit ||
                      prev == PlatoonState::BackSplit)) {
            registry.detach_with_tail(id);
          }
        });
        rt.state = next;
        rt.state_entered_s = t;
        log("t=" + std::to_string(t) + " " + rt.spec.id + " " +
            to_string(prev) + " -> " + to_string(next));
      }

      const auto decision =
          tactical::decide(rt.state, front, rt.spec.params.desired_speed_mps,
                           spec.tactical);
      commands.push_back(operational::control_step(
          working, rt.spec.id, decision, rt.spec.params, spec.controller, t));
      rt.last_command = commands.back();
    }
    for (auto& op : membership_ops) op();
    registry.dissolve_lone([&](const std::string& id) {
      const TruckRuntime* rt = truck_by_id(id);
      return rt ? rt->state : PlatoonState::StandAlone;
    });

    // (4) Scripted maneuver forcing on the platoon leader.
    std::optional<double> forced;
    if (hooks.leader_override) {
      forced = hooks.leader_override(t, working);
    } else if (stop_and_go) {
      const VehicleState* leader = working.find(leader_id);
      if (leader) forced = stop_and_go->force(t, leader->speed_mps, dt);
    }
    if (forced) {
      TruckRuntime* leader = truck_by_id(leader_id);
      if (leader && leader->at.mode == ControlMode::Automated) {
        bool replaced = false;
        for (auto& c : commands) {
          if (c.vehicle_id == leader_id) {
            c.accel_cmd_mps2 = *forced;
            replaced = true;
          }
        }
        if (!replaced) commands.push_back({leader_id, *forced, t});
        leader->last_command = CommandRecord{leader_id, *forced, t};
      } else {
        log("t=" + std::to_string(t) +
            " maneuver forcing skipped: leader not automated");
      }
    }

    if (hooks.command_observer) hooks.command_observer(t, commands);

    // (5)+(6) Push commands back and advance the platform one step.
    try {
      handle.apply_commands(commands);
      handle.step(dt);
    } catch (const SimError& e) {
      result.aborted = true;
      result.abort_reason = e.what();
      log(std::string("abort at t=") + std::to_string(t) + ": " + e.what());
      return result;
    }

    // (7) Record the working view of this step, ordered by vehicle id.
    std::vector<TrajectoryRecord> rows;
    rows.reserve(working.vehicles.size());
    for (const auto& v : working.vehicles) {
      TrajectoryRecord r;
      r.t_s = t;
      r.vehicle_id = v.id;
      r.position_m = v.position_m;
      r.speed_mps = v.speed_mps;
      r.accel_mps2 = v.accel_mps2;
      r.gap_m = record_gap(working, v);
      if (r.gap_m) r.time_gap_s = time_gap_from(*r.gap_m, v.speed_mps);
      r.platoon_state = v.platoon_state;
      r.control_mode = v.control_mode;
      rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end(),
              [](const TrajectoryRecord& a, const TrajectoryRecord& b) {
                return a.vehicle_id < b.vehicle_id;
              });
    result.records.insert(result.records.end(), rows.begin(), rows.end());

    // Cache this step's speed as "previous speed" for the next control
    // evaluation (power-limited acceleration bound).
    for (auto& rt : trucks) {
      if (const VehicleState* v = working.find(rt.spec.id)) {
        rt.spec.params.previous_speed_mps = v->speed_mps;
      }
    }
  }

  return result;
}

}  // namespace platoonsim::scenario
