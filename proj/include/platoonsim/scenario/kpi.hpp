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

#include <map>
#include <string>
#include <vector>

#include "platoonsim/scenario/runner.hpp"
#include "platoonsim/scenario/scenario_spec.hpp"

namespace platoonsim::scenario {

/// Traffic-flow performance indicators over one trajectory log. Steady
/// -state statistics use the post-formation window (from the first instant
/// every platoon truck is simultaneously Platooning); maneuver durations
/// use the full horizon.
struct KpiReport {
  struct PerVehicle {
    std::string id;
    // Headway stats are over the vehicle's gap to its immediate leader and
    // stay zero for a lane's frontmost vehicle.
    double headway_mean_m = 0.0;
    double headway_std_m = 0.0;
    double speed_std_mps = 0.0;
    double accel_std_mps2 = 0.0;
    double peak_speed_deviation_mps = 0.0;  // vs the vehicle's initial speed
  };

  std::vector<PerVehicle> per_vehicle;  // platoon trucks, log order
  double min_gap_m = 0.0;               // across the whole run, all vehicles
  int collision_count = 0;              // gap >= 0 -> gap < 0 transitions
  std::map<std::string, double> maneuver_durations_s;
  double formation_complete_t_s = -1.0;  // -1 when never complete
};

KpiReport compute_kpis(const std::vector<TrajectoryRecord>& records,
                       const ScenarioSpec& spec);

std::string format_kpi_report(const KpiReport& report);

}  // namespace platoonsim::scenario
