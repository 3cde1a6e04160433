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
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "platoonsim/authority/authority.hpp"
#include "platoonsim/core/types.hpp"
#include "platoonsim/operational/controller.hpp"
#include "platoonsim/sim/corridor.hpp"
#include "platoonsim/sim/reference_simulator.hpp"
#include "platoonsim/tactical/tactical.hpp"

namespace platoonsim::scenario {

/// platoon_id given to a platoon that is pre-formed at t = 0.
inline constexpr char kInitialPlatoonId[] = "P0";

struct PlatoonMemberSpec {
  std::string id;
  TruckParameters params;
  double position_m = 0.0;
  double speed_mps = 0.0;
  double length_m = 18.0;
};

/// Leader brakes at constant decel to a stop, dwells, then accelerates back
/// to cruise with the same magnitude.
struct StopAndGoManeuver {
  double cruise_speed_mps = 32.0;
  double decel_mag_mps2 = kGravity / 80.0;
  double dwell_s = 10.0;
  double brake_at_s = 30.0;
};

struct CutInManeuver {
  InsertionEvent event;
};

/// Trucks spawn StandAlone at their listed positions and form the platoon
/// through the tactical layer.
struct JoinManeuver {};

/// The member at `index` detaches (with its tail) at `at_time_s`.
struct SplitManeuver {
  double at_time_s = 0.0;
  int index = 0;
};

struct NoManeuver {};

using Maneuver = std::variant<NoManeuver, StopAndGoManeuver, CutInManeuver,
                              JoinManeuver, SplitManeuver>;

struct ScriptedATEvent {
  double t_s = 0.0;
  std::string vehicle_id;
  authority::ATEventKind kind = authority::ATEventKind::SystemFault;
};

struct ScenarioSpec {
  std::string name = "scenario";
  Corridor corridor;
  double dt_s = 0.1;
  double horizon_s = 60.0;
  std::uint64_t seed = 0;
  DemandProfile demand;
  int platoon_lane = 0;
  std::vector<PlatoonMemberSpec> platoon;  // leader first
  Maneuver maneuver = NoManeuver{};
  operational::ControllerConfig controller;
  tactical::TacticalConfig tactical;
  authority::ATConfig authority;
  std::vector<ScriptedATEvent> at_events;

  std::int64_t step_count() const;
  bool platoon_preformed() const;
};

/// Carries every violation found, not just the first.
class ScenarioValidationError : public std::runtime_error {
 public:
  explicit ScenarioValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Parses and fully validates a scenario file; missing controller /
/// tactical / authority sections fall back to defaults.
ScenarioSpec load_scenario(const std::string& path);

ScenarioSpec parse_scenario_text(const std::string& text,
                                 const std::string& origin);

/// Seeds a reference simulator with the scenario's corridor, demand and
/// platoon population.
std::unique_ptr<ReferenceSimulator> make_reference_simulator(
    const ScenarioSpec& spec);

authority::ATEventKind at_event_kind_from_string(const std::string& s);
std::string to_string(authority::ATEventKind kind);

}  // namespace platoonsim::scenario
