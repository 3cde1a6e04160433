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
#include <vector>

#include "platoonsim/core/types.hpp"

namespace platoonsim {

/// Speed floor used when converting a distance gap to a time gap, so the
/// time gap stays finite while stopped.
inline constexpr double kTimeGapSpeedFloor = 0.1;

/// Bumper-to-bumper clearance, leader rear to follower front.
/// Callers must pass leader.position_m >= follower.position_m; a result
/// <= 0 means the pair is touching or overlapping (a collision state).
double gap(const VehicleState& leader, const VehicleState& follower);

/// gap() divided by the follower speed, floored at kTimeGapSpeedFloor.
double time_gap(const VehicleState& leader, const VehicleState& follower);

double time_gap_from(double gap_m, double follower_speed_mps);

enum class ViolationKind {
  Overlap,
  NegativeSpeed,
  DuplicateId,
  PlatoonIndexGap,
};

struct SnapshotViolation {
  ViolationKind kind;
  std::string detail;
};

std::string to_string(ViolationKind k);

/// Integrity check over one snapshot. Reports every violation found:
/// same-lane overlaps, negative speeds, duplicate ids, and platoon index
/// inconsistencies (missing/duplicated position_in_platoon inside one
/// platoon_id, or membership fields that disagree). Never throws.
std::vector<SnapshotViolation> validate_snapshot(
    const std::vector<VehicleState>& vehicles);

inline bool snapshot_ok(const std::vector<VehicleState>& vehicles) {
  return validate_snapshot(vehicles).empty();
}

}  // namespace platoonsim
