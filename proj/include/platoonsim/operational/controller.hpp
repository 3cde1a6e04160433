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

#include <optional>
#include <string>

#include "platoonsim/core/rng.hpp"
#include "platoonsim/core/types.hpp"
#include "platoonsim/tactical/tactical.hpp"

namespace platoonsim::operational {

/// Constant-time-gap ACC configuration. The feed-forward gain k_ff turns
/// the law into a communication-fed CACC when nonzero; it defaults to off.
struct ControllerConfig {
  double d0_m = 5.0;             // standstill spacing
  double kp_per_s2 = 0.2;        // spacing-error gain
  double kv_per_s = 0.7;         // relative-speed gain
  double k_free_per_s = 0.4;     // speed tracking gain without a leader
  double k_ff = 0.0;             // leader-acceleration feed-forward
  double sensor_range_m = 150.0;
  double gap_noise_half_width_m = 0.0;  // 0 disables the noise hook
};

struct SensorReading {
  double ego_speed_mps = 0.0;
  std::optional<double> measured_gap_m;
  std::optional<double> leader_speed_mps;
  std::optional<double> leader_accel_mps2;
};

enum class ControlLawMode { GapFollowing, SpeedTracking };

struct ControlOutput {
  double accel_mps2 = 0.0;
  bool saturated = false;
  ControlLawMode mode = ControlLawMode::SpeedTracking;
};

/// d0 + T * v: the space headway realizing a time-gap setpoint.
double desired_spacing(double target_time_gap_s, double ego_speed_mps,
                       const ControllerConfig& config);

/// Virtual forward sensor: nearest same-lane vehicle ahead, reported only
/// inside sensor_range_m. Noise-free; the overload with an Rng applies the
/// configured uniform gap noise.
SensorReading sense(const Snapshot& snapshot, const std::string& ego_id,
                    const ControllerConfig& config);
SensorReading sense(const Snapshot& snapshot, const std::string& ego_id,
                    const ControllerConfig& config, Rng& noise_rng);

/// Acceleration ceiling available at the current operating point: the
/// brand's static bound tightened by engine power (P = m a v) evaluated at
/// the previous-step speed.
double effective_max_accel(const TruckParameters& params);

ControlOutput compute_accel(const SensorReading& reading,
                            const tactical::TacticalDecision& decision,
                            const TruckParameters& params,
                            const ControllerConfig& config);

/// sense -> desired_spacing -> compute_accel, stamped with now_s. The ego
/// must currently be under automated control.
CommandRecord control_step(const Snapshot& snapshot, const std::string& ego_id,
                           const tactical::TacticalDecision& decision,
                           const TruckParameters& params,
                           const ControllerConfig& config, double now_s);

}  // namespace platoonsim::operational
