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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "platoonsim/scenario/scenario_spec.hpp"
#include "platoonsim/sim/simulator_handle.hpp"

namespace platoonsim::scenario {

/// One trajectory row. gap_m / time_gap_s refer to the nearest same-lane
/// vehicle ahead and are absent for a lane's frontmost vehicle.
struct TrajectoryRecord {
  double t_s = 0.0;
  std::string vehicle_id;
  double position_m = 0.0;
  double speed_mps = 0.0;
  double accel_mps2 = 0.0;
  std::optional<double> gap_m;
  std::optional<double> time_gap_s;
  PlatoonState platoon_state = PlatoonState::StandAlone;
  ControlMode control_mode = ControlMode::Manual;

  bool operator==(const TrajectoryRecord&) const = default;
};

/// Test/diagnostic taps into the loop. leader_override injects a forced
/// acceleration for the platoon leader (the built-in maneuver forcing uses
/// the same path); command_observer sees exactly what apply_commands gets.
struct RunHooks {
  std::function<std::optional<double>(double t_s, const Snapshot& working)>
      leader_override;
  std::function<void(double t_s, const std::vector<CommandRecord>&)>
      command_observer;
};

struct RunResult {
  std::vector<TrajectoryRecord> records;
  bool aborted = false;
  std::string abort_reason;
  /// Suppressed illegal transitions and other loop diagnostics.
  std::vector<std::string> log;
};

/// Runs the integration loop against a fresh handle for the spec's horizon:
/// query -> authority tick -> tactical/operational per automated truck ->
/// maneuver forcing -> apply -> step -> record. Co-simulation faults abort
/// the run with the partial log kept.
RunResult run(const ScenarioSpec& spec, SimulatorHandle& handle,
              const RunHooks& hooks = {});

}  // namespace platoonsim::scenario
