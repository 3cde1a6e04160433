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

#pragma once

#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "platoonsim/core/rng.hpp"
#include "platoonsim/core/types.hpp"
#include "platoonsim/sim/corridor.hpp"
#include "platoonsim/sim/idm.hpp"
#include "platoonsim/sim/simulator_handle.hpp"

namespace platoonsim {

/// How one vehicle is seeded into the simulator at t = 0.
struct VehicleSpawn {
  VehicleState state;
  // Bounds the motion update clips every acceleration to.
  double max_accel_mps2 = 2.0;
  double max_decel_mps2 = -6.0;
  // Car-following behaviour when the vehicle is not externally commanded.
  IdmParams idm;
  double desired_speed_mps = 30.0;
  // True for automation-equipped trucks that may receive commands.
  bool commandable = false;
};

struct ReferenceSimulatorConfig {
  Corridor corridor;
  DemandProfile demand;
  double dt_s = 0.1;
  std::uint64_t seed = 0;
  std::vector<VehicleSpawn> initial_vehicles;
  IdmParams car_idm;  // applied to demand-generated cars
  double car_length_m = 4.5;
  double car_max_accel_mps2 = 2.0;
  double car_max_decel_mps2 = -6.0;
};

/// In-process stand-in for an external traffic platform: one corridor,
/// human-driven vehicles advanced by the IDM, Poisson demand with a blocked
/// -arrival queue, and scripted cut-in insertions. Implements the same
/// query/apply/step contract the bridge exposes remotely.
class ReferenceSimulator : public SimulatorHandle {
 public:
  explicit ReferenceSimulator(ReferenceSimulatorConfig config);

  Snapshot query_state(double t_s) override;
  void apply_commands(const std::vector<CommandRecord>& commands) override;
  SimClock step(double dt_s) override;
  void inject_event(const InsertionEvent& event) override;

  SimClock clock() const override { return clock_; }

  /// Vehicles created minus vehicles that left at the corridor end, since
  /// t = 0; used by conservation checks.
  std::int64_t spawned_count() const { return spawned_; }
  std::int64_t inserted_count() const { return inserted_; }
  std::int64_t exited_count() const { return exited_; }
  std::size_t queued_arrivals() const { return arrival_queue_; }

 private:
  struct SimVehicle {
    VehicleState state;
    double max_accel;
    double max_decel;
    IdmParams idm;
    double desired_speed;
    bool commandable;
    bool has_command = false;
    double command_accel = 0.0;
  };

  void sort_population();
  const SimVehicle* leader_in_lane(std::size_t idx) const;
  void motion_update();
  void remove_exited();
  void run_due_insertions(double new_t);
  void spawn_from_demand();
  bool entry_clear(int lane, double spawn_pos, double entry_speed,
                   double* out_gap) const;

  ReferenceSimulatorConfig cfg_;
  SimClock clock_;
  std::vector<SimVehicle> vehicles_;  // sorted: lane asc, position desc
  std::vector<InsertionEvent> pending_insertions_;
  Rng demand_rng_;
  Rng lane_rng_;
  std::size_t arrival_queue_ = 0;
  std::int64_t spawn_serial_ = 0;
  std::int64_t insertion_serial_ = 0;
  std::int64_t spawned_ = 0;
  std::int64_t inserted_ = 0;
  std::int64_t exited_ = 0;
};

}  // namespace platoonsim
