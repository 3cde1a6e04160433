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

#include "platoonsim/tactical/tactical.hpp"

#include <algorithm>
#include <cmath>

#include "platoonsim/core/ops.hpp"

namespace platoonsim::tactical {

namespace {

const VehicleState* find_or_throw(const Snapshot& snapshot,
                                  const std::string& ego_id) {
  const VehicleState* ego = snapshot.find(ego_id);
  if (!ego) {
    throw SimError(SimErrorCode::UnknownVehicle,
                   "tactical scan: unknown ego " + ego_id);
  }
  return ego;
}

bool has_event(const std::vector<TacticalEvent>& events,
               TacticalEventKind kind) {
  return std::any_of(events.begin(), events.end(),
                     [&](const TacticalEvent& e) { return e.kind == kind; });
}

int platoon_size(const Snapshot& snapshot, const std::string& platoon_id) {
  int n = 0;
  for (const auto& v : snapshot.vehicles) {
    if (v.platoon_id && *v.platoon_id == platoon_id) ++n;
  }
  return n;
}

}  // namespace

FrontGapInfo front_gap_scan(const Snapshot& snapshot,
                            const std::string& ego_id,
                            const TruckParamsLookup& lookup) {
  const VehicleState* ego = find_or_throw(snapshot, ego_id);

  const VehicleState* leader = nullptr;
  for (const auto& v : snapshot.vehicles) {
    if (v.id == ego->id || v.lane != ego->lane) continue;
    if (v.position_m <= ego->position_m) continue;
    if (!leader || v.position_m < leader->position_m) leader = &v;
  }

  FrontGapInfo info;
  if (!leader) return info;
  info.immediate_leader = *leader;
  info.gap_m = std::max(0.0, gap(*leader, *ego));
  info.relative_speed_mps = leader->speed_mps - ego->speed_mps;
  if (ego->platoon_id) {
    info.leader_is_platoon_member =
        leader->platoon_id && *leader->platoon_id == *ego->platoon_id;
  } else {
    info.leader_is_platoon_member = leader->platoon_id.has_value();
  }
  if (lookup && leader->kind == VehicleKind::Truck) {
    info.leader_truck_params = lookup(leader->id);
  }
  return info;
}

RearGapInfo rear_gap_scan(const Snapshot& snapshot, const std::string& ego_id,
                          const TacticalConfig& config) {
  const VehicleState* ego = find_or_throw(snapshot, ego_id);

  RearGapInfo info;
  info.max_platoon_length = config.max_platoon_length;

  if (ego->platoon_id && ego->position_in_platoon) {
    info.position_in_platoon = *ego->position_in_platoon;
    info.platoon_length_so_far = info.position_in_platoon + 1;
    info.platoon_total_size = platoon_size(snapshot, *ego->platoon_id);
  } else {
    // Would-be position when trailing a platoon tail; otherwise a chain of
    // one (the ego itself).
    const VehicleState* leader = nullptr;
    for (const auto& v : snapshot.vehicles) {
      if (v.id == ego->id || v.lane != ego->lane) continue;
      if (v.position_m <= ego->position_m) continue;
      if (!leader || v.position_m < leader->position_m) leader = &v;
    }
    if (leader && leader->platoon_id && leader->position_in_platoon &&
        *leader->position_in_platoon ==
            platoon_size(snapshot, *leader->platoon_id) - 1) {
      info.position_in_platoon = *leader->position_in_platoon + 1;
      info.platoon_length_so_far = info.position_in_platoon + 1;
    }
  }

  const VehicleState* follower = nullptr;
  for (const auto& v : snapshot.vehicles) {
    if (v.id == ego->id || v.lane != ego->lane) continue;
    if (v.position_m >= ego->position_m) continue;
    if (!follower || v.position_m > follower->position_m) follower = &v;
  }
  if (follower) info.immediate_follower = *follower;

  return info;
}

namespace {

PlatoonState detach_target(PlatoonState current) {
  switch (current) {
    case PlatoonState::Platooning:
      return PlatoonState::FrontSplit;
    case PlatoonState::CutIn:
      return PlatoonState::BackSplit;
    case PlatoonState::Joining:
      return PlatoonState::StandAlone;
    default:
      return current;
  }
}

bool split_done(const VehicleState& ego, const FrontGapInfo& front,
                const TacticalConfig& cfg) {
  if (!front.immediate_leader) return true;
  return time_gap_from(front.gap_m, ego.speed_mps) >=
         cfg.split_complete_time_gap_s;
}

bool join_target_ok(const FrontGapInfo& front, const RearGapInfo& rear,
                    const TacticalConfig& cfg) {
  if (!front.immediate_leader) return false;
  if (front.immediate_leader->kind != VehicleKind::Truck) return false;
  if (front.gap_m >= cfg.join_activation_gap_m) return false;
  if (front.leader_is_platoon_member) {
    // Appending to an existing platoon: only behind its tail, and only
    // below the length cap. rear.position_in_platoon is the would-be index.
    return rear.position_in_platoon >= 1 &&
           rear.position_in_platoon < cfg.max_platoon_length;
  }
  // A lone truck ahead seeds a fresh two-truck formation.
  return cfg.max_platoon_length >= 2;
}

}  // namespace

PlatoonState classify(const VehicleState& ego, const FrontGapInfo& front,
                      const RearGapInfo& rear,
                      const std::vector<TacticalEvent>& events,
                      double age_in_state_s, const TacticalConfig& config) {
  const PlatoonState cur = ego.platoon_state;

  // Event priority: EmergencyStop > DriverLeaveRequest > cut-in handling >
  // join opportunities.
  if (has_event(events, TacticalEventKind::EmergencyStop) ||
      has_event(events, TacticalEventKind::DriverLeaveRequest)) {
    return detach_target(cur);
  }

  switch (cur) {
    case PlatoonState::StandAlone: {
      // A detached member that kept its tail is the leader of a platoon in
      // formation; it converges through Joining.
      if (ego.platoon_id && ego.position_in_platoon &&
          *ego.position_in_platoon == 0 && rear.platoon_total_size >= 2) {
        return PlatoonState::Joining;
      }
      if (join_target_ok(front, rear, config) ||
          (has_event(events, TacticalEventKind::JoinOpportunity) &&
           front.immediate_leader)) {
        return PlatoonState::Joining;
      }
      return PlatoonState::StandAlone;
    }

    case PlatoonState::Joining: {
      if (ego.position_in_platoon && *ego.position_in_platoon == 0) {
        // Leader of a forming platoon: done once the first joiner behind
        // has locked in.
        if (rear.platoon_total_size <= 1) return PlatoonState::StandAlone;
        if (rear.immediate_follower && rear.immediate_follower->platoon_id &&
            ego.platoon_id &&
            *rear.immediate_follower->platoon_id == *ego.platoon_id &&
            rear.immediate_follower->platoon_state ==
                PlatoonState::Platooning) {
          return PlatoonState::Platooning;
        }
        return PlatoonState::Joining;
      }
      if (has_event(events, TacticalEventKind::LeaderLost) ||
          !front.immediate_leader ||
          front.immediate_leader->kind != VehicleKind::Truck ||
          front.gap_m >= config.join_abandon_gap_m) {
        return PlatoonState::StandAlone;
      }
      const double desired =
          config.d0_m + config.t_platoon_s * ego.speed_mps;
      if (std::abs(front.gap_m - desired) < config.join_pos_tol_m &&
          std::abs(front.relative_speed_mps) < config.join_speed_tol_mps) {
        return PlatoonState::Platooning;
      }
      return PlatoonState::Joining;
    }

    case PlatoonState::Platooning: {
      const int idx = ego.position_in_platoon.value_or(0);
      if (idx == 0) {
        // Platoon leader. A vehicle ahead of the whole platoon is ordinary
        // traffic, not a cut-in.
        if (rear.platoon_total_size <= 1) return PlatoonState::BackSplit;
        return PlatoonState::Platooning;
      }
      if (has_event(events, TacticalEventKind::CutInDetected)) {
        return PlatoonState::CutIn;
      }
      if (!front.immediate_leader ||
          has_event(events, TacticalEventKind::LeaderLost)) {
        return PlatoonState::FrontSplit;
      }
      if (!front.leader_is_platoon_member) return PlatoonState::CutIn;
      return PlatoonState::Platooning;
    }

    case PlatoonState::CutIn: {
      if (has_event(events, TacticalEventKind::CutInCleared) ||
          !front.immediate_leader || front.leader_is_platoon_member) {
        return PlatoonState::Platooning;
      }
      if (age_in_state_s >= config.cutin_patience_s) {
        return PlatoonState::BackSplit;
      }
      return PlatoonState::CutIn;
    }

    case PlatoonState::FrontSplit: {
      if (has_event(events, TacticalEventKind::SplitComplete) ||
          split_done(ego, front, config)) {
        return PlatoonState::StandAlone;
      }
      return PlatoonState::FrontSplit;
    }

    case PlatoonState::BackSplit: {
      if (has_event(events, TacticalEventKind::SplitComplete) ||
          split_done(ego, front, config)) {
        return PlatoonState::StandAlone;
      }
      return PlatoonState::BackSplit;
    }
  }
  return cur;
}

bool transition_allowed(PlatoonState current, PlatoonState proposed) {
  if (current == proposed) return true;
  using S = PlatoonState;
  switch (current) {
    case S::StandAlone:
      return proposed == S::Joining;
    case S::Joining:
      return proposed == S::Platooning || proposed == S::StandAlone;
    case S::Platooning:
      return proposed == S::CutIn || proposed == S::FrontSplit ||
             proposed == S::BackSplit;
    case S::CutIn:
      return proposed == S::Platooning || proposed == S::BackSplit;
    case S::FrontSplit:
      return proposed == S::StandAlone;
    case S::BackSplit:
      return proposed == S::StandAlone;
  }
  return false;
}

PlatoonState transition(PlatoonState current, PlatoonState proposed) {
  return transition_allowed(current, proposed) ? proposed : current;
}

TacticalDecision decide(PlatoonState state, const FrontGapInfo& front,
                        double ego_desired_speed_mps,
                        const TacticalConfig& config) {
  const double leader_speed = front.immediate_leader
                                  ? front.immediate_leader->speed_mps
                                  : ego_desired_speed_mps;
  TacticalDecision d;
  d.new_state = state;
  switch (state) {
    case PlatoonState::Platooning:
      d.target_time_gap_s = config.t_platoon_s;
      d.target_speed_mps = leader_speed;
      break;
    case PlatoonState::Joining:
      d.target_time_gap_s = config.t_platoon_s;
      d.target_speed_mps = std::min(leader_speed + config.dv_approach_mps,
                                    ego_desired_speed_mps);
      break;
    case PlatoonState::FrontSplit:
    case PlatoonState::BackSplit:
    case PlatoonState::CutIn:
      d.target_time_gap_s = config.t_split_s;
      d.target_speed_mps = leader_speed;
      break;
    case PlatoonState::StandAlone:
      d.target_time_gap_s = config.t_standalone_s;
      d.target_speed_mps = ego_desired_speed_mps;
      break;
  }
  return d;
}

}  // namespace platoonsim::tactical
