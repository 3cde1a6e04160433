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

#include <string>

namespace platoonsim {

/// Single straight road section; lanes are integer indices with no lateral
/// dynamics.
struct Corridor {
  double length_m = 25000.0;
  double speed_limit_mps = 36.0;
  int lane_count = 1;
};

struct DemandProfile {
  double arrival_rate_veh_per_h = 0.0;
  double truck_fraction = 0.0;
  double entry_speed_mps = 30.0;
};

/// Scripted cut-in: at at_time_s a car materializes midway between the
/// platoon members at insert_after_index and insert_after_index + 1.
struct InsertionEvent {
  double at_time_s = 0.0;
  std::string target_platoon_id;
  int insert_after_index = 0;
  double intruder_speed_mps = 30.0;
  double intruder_length_m = 4.5;

  bool operator==(const InsertionEvent&) const = default;
};

}  // namespace platoonsim
