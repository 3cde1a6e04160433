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

#include <algorithm>
#include <cmath>
#include <optional>

namespace platoonsim {

/// Intelligent Driver Model parameters for human-driven vehicles.
struct IdmParams {
  double desired_time_headway_s = 1.2;
  double max_accel_mps2 = 1.4;
  double comfortable_decel_mps2 = 2.0;
  double jam_distance_m = 2.0;
  double exponent = 4.0;
};

/// IDM acceleration. gap_m/leader_speed absent means free road.
inline double idm_accel(double speed_mps, double desired_speed_mps,
                        std::optional<double> gap_m,
                        std::optional<double> leader_speed_mps,
                        const IdmParams& p) {
  const double v = std::max(speed_mps, 0.0);
  const double v0 = std::max(desired_speed_mps, 0.1);
  double interaction = 0.0;
  if (gap_m && leader_speed_mps) {
    const double dv = v - *leader_speed_mps;  // positive while closing
    const double s_star =
        p.jam_distance_m +
        std::max(0.0, v * p.desired_time_headway_s +
                          v * dv / (2.0 * std::sqrt(p.max_accel_mps2 *
                                                    p.comfortable_decel_mps2)));
    const double s = std::max(*gap_m, 0.01);
    interaction = (s_star / s) * (s_star / s);
  }
  return p.max_accel_mps2 *
         (1.0 - std::pow(v / v0, p.exponent) - interaction);
}

}  // namespace platoonsim
