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
#include <limits>
#include <optional>
#include <vector>

#include "platoonsim/core/types.hpp"

namespace platoonsim::tactical {

/// Guards and setpoints of the platooning state machine. The paper's state
/// set is fixed; the guard values here are configuration.
struct TacticalConfig {
  double t_platoon_s = 1.6;          // ACC setpoint while platooning
  double t_split_s = 3.0;            // gap opened during splits / cut-ins
  double t_standalone_s = 1.6;       // plain ACC setpoint when alone
  double d0_m = 5.0;                 // standstill spacing (kept equal to the
                                     // operational controller's d0)
  double join_activation_gap_m = 100.0;
  double join_abandon_gap_m = 150.0;
  double join_pos_tol_m = 2.0;
  double join_speed_tol_mps = 0.5;
  double split_complete_time_gap_s = 3.0;
  double cutin_patience_s = 30.0;    // CutIn -> BackSplit after this long
  double dv_approach_mps = 2.0;      // closing-speed surplus while joining
  int max_platoon_length = 7;
};

/// Downstream context: the nearest vehicle ahead of the ego on its lane.
/// gap_m is +inf when there is no leader.
struct FrontGapInfo {
  std::optional<VehicleState> immediate_leader;
  bool leader_is_platoon_member = false;  // member of the ego's own platoon;
                                          // for a platoonless ego, member of
                                          // any platoon
  std::optional<TruckParameters> leader_truck_params;
  double gap_m = std::numeric_limits<double>::infinity();
  double relative_speed_mps = 0.0;  // leader speed - ego speed
};

/// Upstream/platoon context. position_in_platoon is the ego's index for a
/// member, or the index the ego would take if it appended to the platoon
/// directly ahead (0 when there is nothing to join). platoon_total_size
/// counts all current members of the ego's platoon (1 when platoonless).
struct RearGapInfo {
  int platoon_length_so_far = 1;
  int position_in_platoon = 0;
  int max_platoon_length = 7;
  std::optional<VehicleState> immediate_follower;
  int platoon_total_size = 1;
};

enum class TacticalEventKind {
  EmergencyStop,
  DriverLeaveRequest,
  CutInDetected,
  CutInCleared,
  LeaderLost,
  JoinOpportunity,
  SplitComplete,
};

struct TacticalEvent {
  TacticalEventKind kind;
  double observed_at_s = 0.0;
};

/// Time-gap/speed setpoints handed to the operational layer.
struct TacticalDecision {
  double target_time_gap_s = 1.6;
  double target_speed_mps = 0.0;
  PlatoonState new_state = PlatoonState::StandAlone;
};

using TruckParamsLookup =
    std::function<std::optional<TruckParameters>(const std::string& id)>;

FrontGapInfo front_gap_scan(const Snapshot& snapshot,
                            const std::string& ego_id,
                            const TruckParamsLookup& lookup = nullptr);

RearGapInfo rear_gap_scan(const Snapshot& snapshot, const std::string& ego_id,
                          const TacticalConfig& config);

/// Proposes the next platoon state from the frozen per-step context.
/// Pure function; age_in_state_s is how long the ego has been in its
/// current state (drives the cut-in patience guard).
PlatoonState classify(const VehicleState& ego, const FrontGapInfo& front,
                      const RearGapInfo& rear,
                      const std::vector<TacticalEvent>& events,
                      double age_in_state_s, const TacticalConfig& config);

/// Edge filter of the state machine: returns `proposed` if
/// (current, proposed) is an allowed edge (identities included), otherwise
/// `current`. Illegal proposals are suppressed, never fatal.
PlatoonState transition(PlatoonState current, PlatoonState proposed);

bool transition_allowed(PlatoonState current, PlatoonState proposed);

TacticalDecision decide(PlatoonState state, const FrontGapInfo& front,
                        double ego_desired_speed_mps,
                        const TacticalConfig& config);

}  // namespace platoonsim::tactical
