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

#include "platoonsim/operational/controller.hpp"

#include <algorithm>
#include <cmath>

#include "platoonsim/core/ops.hpp"

namespace platoonsim::operational {

double desired_spacing(double target_time_gap_s, double ego_speed_mps,
                       const ControllerConfig& config) {
  return config.d0_m + target_time_gap_s * ego_speed_mps;
}

namespace {

SensorReading sense_impl(const Snapshot& snapshot, const std::string& ego_id,
                         const ControllerConfig& config, Rng* noise_rng) {
  const VehicleState* ego = snapshot.find(ego_id);
  if (!ego) {
    throw SimError(SimErrorCode::UnknownVehicle, "sense: unknown ego " + ego_id);
  }
  SensorReading r;
  r.ego_speed_mps = ego->speed_mps;

  const VehicleState* leader = nullptr;
  for (const auto& v : snapshot.vehicles) {
    if (v.id == ego->id || v.lane != ego->lane) continue;
    if (v.position_m <= ego->position_m) continue;
    if (!leader || v.position_m < leader->position_m) leader = &v;
  }
  if (!leader) return r;

  double g = std::max(0.0, gap(*leader, *ego));
  if (g > config.sensor_range_m) return r;
  if (noise_rng && config.gap_noise_half_width_m > 0.0) {
    g = std::max(0.0, g + noise_rng->uniform(-config.gap_noise_half_width_m,
                                             config.gap_noise_half_width_m));
  }
  r.measured_gap_m = g;
  r.leader_speed_mps = leader->speed_mps;
  r.leader_accel_mps2 = leader->accel_mps2;
  return r;
}

}  // namespace

SensorReading sense(const Snapshot& snapshot, const std::string& ego_id,
                    const ControllerConfig& config) {
  return sense_impl(snapshot, ego_id, config, nullptr);
}

SensorReading sense(const Snapshot& snapshot, const std::string& ego_id,
                    const ControllerConfig& config, Rng& noise_rng) {
  return sense_impl(snapshot, ego_id, config, &noise_rng);
}

double effective_max_accel(const TruckParameters& params) {
  const double v = std::max(params.previous_speed_mps, 1.0);
  const double power_cap = params.engine_power_kw * 1000.0 /
                           (params.mass_kg * v);
  return std::min(params.max_accel_mps2, power_cap);
}

ControlOutput compute_accel(const SensorReading& reading,
                            const tactical::TacticalDecision& decision,
                            const TruckParameters& params,
                            const ControllerConfig& config) {
  ControlOutput out;
  double a_raw;
  if (reading.measured_gap_m) {
    const double spacing_error =
        *reading.measured_gap_m -
        desired_spacing(decision.target_time_gap_s, reading.ego_speed_mps,
                        config);
    const double closing =
        reading.leader_speed_mps.value_or(reading.ego_speed_mps) -
        reading.ego_speed_mps;
    a_raw = config.kp_per_s2 * spacing_error + config.kv_per_s * closing;
    if (config.k_ff > 0.0 && reading.leader_accel_mps2) {
      a_raw += config.k_ff * *reading.leader_accel_mps2;
    }
    out.mode = ControlLawMode::GapFollowing;
  } else {
    a_raw = config.k_free_per_s *
            (decision.target_speed_mps - reading.ego_speed_mps);
    out.mode = ControlLawMode::SpeedTracking;
  }
  const double hi = effective_max_accel(params);
  const double lo = params.max_decel_mps2;
  out.accel_mps2 = std::clamp(a_raw, lo, hi);
  out.saturated = out.accel_mps2 != a_raw;
  return out;
}

CommandRecord control_step(const Snapshot& snapshot, const std::string& ego_id,
                           const tactical::TacticalDecision& decision,
                           const TruckParameters& params,
                           const ControllerConfig& config, double now_s) {
  const VehicleState* ego = snapshot.find(ego_id);
  if (!ego) {
    throw SimError(SimErrorCode::UnknownVehicle,
                   "control_step: unknown ego " + ego_id);
  }
  if (ego->control_mode != ControlMode::Automated) {
    throw SimError(SimErrorCode::ManualVehicle,
                   "control_step on human-driven vehicle " + ego_id);
  }
  const SensorReading reading = sense(snapshot, ego_id, config);
  const ControlOutput out = compute_accel(reading, decision, params, config);
  return CommandRecord{ego_id, out.accel_mps2, now_s};
}

}  // namespace platoonsim::operational
