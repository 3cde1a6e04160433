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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace platoonsim {

/// Standard gravity, used wherever scenario parameters are written as
/// fractions of g (e.g. a = g/80).
inline constexpr double kGravity = 9.80665;

enum class VehicleKind { Truck, Car };

enum class ControlMode { Manual, Automated };

/// Discrete tactical state of an ego truck.
enum class PlatoonState {
  StandAlone,
  Joining,
  Platooning,
  FrontSplit,
  BackSplit,
  CutIn,
};

inline constexpr int kPlatoonStateCount = 6;

std::string to_string(VehicleKind k);
std::string to_string(ControlMode m);
std::string to_string(PlatoonState s);

VehicleKind vehicle_kind_from_string(const std::string& s);
ControlMode control_mode_from_string(const std::string& s);
PlatoonState platoon_state_from_string(const std::string& s);

/// One vehicle's kinematic and platoon-membership snapshot. This is the
/// record exchanged with traffic simulators, so field meanings are part of
/// the wire contract (see bridge/codec.hpp).
///
/// position_m is the front bumper; a vehicle occupies
/// [position_m - length_m, position_m] on its lane.
struct VehicleState {
  std::string id;
  VehicleKind kind = VehicleKind::Car;
  double position_m = 0.0;
  double speed_mps = 0.0;
  double accel_mps2 = 0.0;
  double length_m = 4.5;
  int lane = 0;
  std::optional<std::string> platoon_id;
  PlatoonState platoon_state = PlatoonState::StandAlone;
  ControlMode control_mode = ControlMode::Manual;
  std::optional<int> position_in_platoon;

  bool operator==(const VehicleState&) const = default;
};

/// Per-brand truck statics plus the previous-step speed, which the
/// operational layer needs for the power-limited acceleration bound.
struct TruckParameters {
  std::string brand = "generic";
  double mass_kg = 40000.0;
  double engine_power_kw = 450.0;
  double max_accel_mps2 = 1.0;
  double max_decel_mps2 = -3.0;
  double desired_speed_mps = 32.0;
  double previous_speed_mps = 0.0;

  bool operator==(const TruckParameters&) const = default;
};

/// Fixed-step simulation clock. t_s is always step_index * dt_s, so two
/// clocks advanced by the same number of steps compare bit-equal.
struct SimClock {
  double dt_s = 0.1;
  std::int64_t step_index = 0;

  double t_s() const { return static_cast<double>(step_index) * dt_s; }
};

struct CommandRecord {
  std::string vehicle_id;
  double accel_cmd_mps2 = 0.0;
  double issued_at_s = 0.0;

  bool operator==(const CommandRecord&) const = default;
};

/// Vehicle population at one instant, ordered by (lane, descending
/// position_m).
struct Snapshot {
  SimClock clock;
  std::vector<VehicleState> vehicles;

  const VehicleState* find(const std::string& id) const;
};

/// Error category carried by SimError; the bridge maps these onto wire
/// ERROR codes.
enum class SimErrorCode {
  ClockMismatch,
  UnknownVehicle,
  ManualVehicle,
  BadStepSize,
  InvalidState,
  CoSimFault,
};

class SimError : public std::runtime_error {
 public:
  SimError(SimErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  SimErrorCode code() const { return code_; }

 private:
  SimErrorCode code_;
};

}  // namespace platoonsim
