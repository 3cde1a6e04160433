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

#include "platoonsim/sim/reference_simulator.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "platoonsim/core/ops.hpp"

namespace platoonsim {

namespace {

std::string fmt_time(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

}  // namespace

ReferenceSimulator::ReferenceSimulator(ReferenceSimulatorConfig config)
    : cfg_(std::move(config)),
      demand_rng_(Rng(cfg_.seed).fork("demand")),
      lane_rng_(Rng(cfg_.seed).fork("lane")) {
  clock_.dt_s = cfg_.dt_s;
  clock_.step_index = 0;
  for (const auto& spawn : cfg_.initial_vehicles) {
    SimVehicle v;
    v.state = spawn.state;
    v.max_accel = spawn.max_accel_mps2;
    v.max_decel = spawn.max_decel_mps2;
    v.idm = spawn.idm;
    v.desired_speed = spawn.desired_speed_mps;
    v.commandable = spawn.commandable;
    vehicles_.push_back(std::move(v));
  }
  sort_population();
}

void ReferenceSimulator::sort_population() {
  std::stable_sort(vehicles_.begin(), vehicles_.end(),
                   [](const SimVehicle& a, const SimVehicle& b) {
                     if (a.state.lane != b.state.lane)
                       return a.state.lane < b.state.lane;
                     return a.state.position_m > b.state.position_m;
                   });
}

const ReferenceSimulator::SimVehicle* ReferenceSimulator::leader_in_lane(
    std::size_t idx) const {
  // Population is sorted lane asc / position desc, so the nearest vehicle
  // ahead in the same lane is the previous entry with the same lane.
  if (idx == 0) return nullptr;
  const auto& me = vehicles_[idx];
  const auto& prev = vehicles_[idx - 1];
  if (prev.state.lane != me.state.lane) return nullptr;
  return &prev;
}

Snapshot ReferenceSimulator::query_state(double t_s) {
  if (t_s != clock_.t_s()) {
    throw SimError(SimErrorCode::ClockMismatch,
                   "query_state at t=" + fmt_time(t_s) +
                       " but simulator clock is t=" + fmt_time(clock_.t_s()));
  }
  Snapshot snap;
  snap.clock = clock_;
  snap.vehicles.reserve(vehicles_.size());
  for (const auto& v : vehicles_) snap.vehicles.push_back(v.state);
  return snap;
}

void ReferenceSimulator::apply_commands(
    const std::vector<CommandRecord>& commands) {
  for (const auto& cmd : commands) {
    SimVehicle* target = nullptr;
    for (auto& v : vehicles_) {
      if (v.state.id == cmd.vehicle_id) {
        target = &v;
        break;
      }
    }
    if (!target) {
      throw SimError(SimErrorCode::UnknownVehicle,
                     "command for unknown vehicle " + cmd.vehicle_id);
    }
    if (!target->commandable ||
        target->state.control_mode != ControlMode::Automated) {
      throw SimError(SimErrorCode::ManualVehicle,
                     "command for human-driven vehicle " + cmd.vehicle_id);
    }
    if (!std::isfinite(cmd.accel_cmd_mps2)) {
      throw SimError(SimErrorCode::InvalidState,
                     "non-finite command for " + cmd.vehicle_id);
    }
    target->has_command = true;
    target->command_accel = cmd.accel_cmd_mps2;
  }
}

void ReferenceSimulator::motion_update() {
  const double dt = clock_.dt_s;
  // Accelerations are chosen from the frozen pre-step state, then every
  // vehicle integrates, so update order cannot leak between vehicles.
  std::vector<double> accel(vehicles_.size());
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    const auto& v = vehicles_[i];
    double a;
    if (v.has_command) {
      a = v.command_accel;
    } else {
      const SimVehicle* lead = leader_in_lane(i);
      std::optional<double> g, lv;
      if (lead) {
        g = gap(lead->state, v.state);
        lv = lead->state.speed_mps;
      }
      a = idm_accel(v.state.speed_mps, v.desired_speed, g, lv, v.idm);
    }
    accel[i] = std::clamp(a, v.max_decel, v.max_accel);
  }
  for (std::size_t i = 0; i < vehicles_.size(); ++i) {
    auto& v = vehicles_[i];
    const double a = accel[i];
    const double vel = v.state.speed_mps;
    double next_speed = vel + a * dt;
    if (next_speed < 0.0) {
      // Stops inside the step: advance to the exact stop point rather than
      // letting the position formula run the vehicle backwards.
      v.state.position_m += (a < 0.0) ? (vel * vel) / (-2.0 * a) : 0.0;
      next_speed = 0.0;
    } else {
      v.state.position_m += vel * dt + 0.5 * a * dt * dt;
    }
    v.state.speed_mps = next_speed;
    v.state.accel_mps2 = a;
    v.has_command = false;
  }
}

void ReferenceSimulator::remove_exited() {
  auto it = std::remove_if(vehicles_.begin(), vehicles_.end(),
                           [&](const SimVehicle& v) {
                             return v.state.position_m - v.state.length_m >
                                    cfg_.corridor.length_m;
                           });
  exited_ += static_cast<std::int64_t>(std::distance(it, vehicles_.end()));
  vehicles_.erase(it, vehicles_.end());
}

void ReferenceSimulator::run_due_insertions(double new_t) {
  auto due = std::partition(pending_insertions_.begin(),
                            pending_insertions_.end(),
                            [&](const InsertionEvent& e) {
                              return e.at_time_s > new_t;
                            });
  std::vector<InsertionEvent> fire(due, pending_insertions_.end());
  pending_insertions_.erase(due, pending_insertions_.end());

  for (const auto& ev : fire) {
    // Locate platoon members by the membership recorded in vehicle state.
    std::vector<const SimVehicle*> members;
    for (const auto& v : vehicles_) {
      if (v.state.platoon_id && *v.state.platoon_id == ev.target_platoon_id) {
        members.push_back(&v);
      }
    }
    std::sort(members.begin(), members.end(),
              [](const SimVehicle* a, const SimVehicle* b) {
                return a->state.position_in_platoon.value_or(0) <
                       b->state.position_in_platoon.value_or(0);
              });
    const int i = ev.insert_after_index;
    if (static_cast<int>(members.size()) < i + 2) {
      std::cerr << "[sim] insertion event at t=" << ev.at_time_s
                << " dropped: platoon " << ev.target_platoon_id
                << " missing or too short\n";
      continue;
    }
    const VehicleState& ahead = members[static_cast<std::size_t>(i)]->state;
    const VehicleState& behind =
        members[static_cast<std::size_t>(i) + 1]->state;
    const double clearance_mid =
        ((ahead.position_m - ahead.length_m) + behind.position_m) / 2.0;

    SimVehicle car;
    car.state.id = "cutin_" + std::to_string(insertion_serial_++);
    car.state.kind = VehicleKind::Car;
    car.state.lane = ahead.lane;
    car.state.length_m = ev.intruder_length_m;
    car.state.position_m = clearance_mid + ev.intruder_length_m / 2.0;
    car.state.speed_mps = ev.intruder_speed_mps;
    car.state.control_mode = ControlMode::Manual;
    car.max_accel = cfg_.car_max_accel_mps2;
    car.max_decel = cfg_.car_max_decel_mps2;
    car.idm = cfg_.car_idm;
    car.desired_speed = cfg_.corridor.speed_limit_mps;
    car.commandable = false;
    vehicles_.push_back(std::move(car));
    ++inserted_;
  }
  if (!fire.empty()) sort_population();
}

bool ReferenceSimulator::entry_clear(int lane, double spawn_pos,
                                     double entry_speed,
                                     double* out_gap) const {
  double nearest = cfg_.corridor.length_m * 2.0;
  const SimVehicle* nearest_v = nullptr;
  for (const auto& v : vehicles_) {
    if (v.state.lane != lane) continue;
    if (v.state.position_m - v.state.length_m < spawn_pos) return false;
    const double g = v.state.position_m - v.state.length_m - spawn_pos;
    if (g < nearest) {
      nearest = g;
      nearest_v = &v;
    }
  }
  if (out_gap) *out_gap = nearest;
  if (!nearest_v) return true;
  const double min_gap = cfg_.car_idm.jam_distance_m +
                         entry_speed * cfg_.car_idm.desired_time_headway_s;
  return nearest >= min_gap;
}

void ReferenceSimulator::spawn_from_demand() {
  const double mean =
      cfg_.demand.arrival_rate_veh_per_h * clock_.dt_s / 3600.0;
  arrival_queue_ += static_cast<std::size_t>(demand_rng_.poisson(mean));
  // Blocked arrivals wait; one spawn attempt per lane draw per step keeps
  // entry spacing controlled by the car-following minimum gap.
  while (arrival_queue_ > 0) {
    const int lane = static_cast<int>(
        lane_rng_.below(static_cast<std::uint64_t>(cfg_.corridor.lane_count)));
    const bool is_truck = demand_rng_.bernoulli(cfg_.demand.truck_fraction);
    const double length = is_truck ? 18.0 : cfg_.car_length_m;
    const double spawn_pos = length;  // rear bumper at x = 0
    if (!entry_clear(lane, spawn_pos, cfg_.demand.entry_speed_mps, nullptr)) {
      break;
    }
    SimVehicle v;
    v.state.id = "veh_" + std::to_string(spawn_serial_++);
    v.state.kind = is_truck ? VehicleKind::Truck : VehicleKind::Car;
    v.state.lane = lane;
    v.state.length_m = length;
    v.state.position_m = spawn_pos;
    v.state.speed_mps = cfg_.demand.entry_speed_mps;
    v.state.control_mode = ControlMode::Manual;
    v.idm = cfg_.car_idm;
    v.max_accel = cfg_.car_max_accel_mps2;
    v.max_decel = cfg_.car_max_decel_mps2;
    v.desired_speed = cfg_.corridor.speed_limit_mps;
    v.commandable = false;
    vehicles_.push_back(std::move(v));
    ++spawned_;
    --arrival_queue_;
    sort_population();
  }
}

SimClock ReferenceSimulator::step(double dt_s) {
  if (dt_s != clock_.dt_s) {
    throw SimError(SimErrorCode::BadStepSize,
                   "step dt=" + fmt_time(dt_s) + " but configured dt=" +
                       fmt_time(clock_.dt_s));
  }
  motion_update();
  remove_exited();
  clock_.step_index += 1;
  run_due_insertions(clock_.t_s());
  spawn_from_demand();
  sort_population();
  return clock_;
}

void ReferenceSimulator::inject_event(const InsertionEvent& event) {
  pending_insertions_.push_back(event);
}

}  // namespace platoonsim
