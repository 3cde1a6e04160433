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

#include "platoonsim/core/ops.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace platoonsim {

double gap(const VehicleState& leader, const VehicleState& follower) {
  return leader.position_m - leader.length_m - follower.position_m;
}

double time_gap(const VehicleState& leader, const VehicleState& follower) {
  return time_gap_from(gap(leader, follower), follower.speed_mps);
}

double time_gap_from(double gap_m, double follower_speed_mps) {
  return gap_m / std::max(follower_speed_mps, kTimeGapSpeedFloor);
}

std::string to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::Overlap:
      return "overlap";
    case ViolationKind::NegativeSpeed:
      return "negative speed";
    case ViolationKind::DuplicateId:
      return "duplicate id";
    case ViolationKind::PlatoonIndexGap:
      return "platoon index gap";
  }
  return "?";
}

namespace {

std::string describe(ViolationKind k, const std::string& detail) {
  return to_string(k) + ": " + detail;
}

}  // namespace

std::vector<SnapshotViolation> validate_snapshot(
    const std::vector<VehicleState>& vehicles) {
  std::vector<SnapshotViolation> out;
  auto add = [&](ViolationKind k, const std::string& detail) {
    out.push_back({k, describe(k, detail)});
  };

  std::set<std::string> seen;
  for (const auto& v : vehicles) {
    if (!seen.insert(v.id).second) {
      add(ViolationKind::DuplicateId, v.id);
    }
    if (v.speed_mps < 0.0) {
      std::ostringstream os;
      os << v.id << " speed " << v.speed_mps;
      add(ViolationKind::NegativeSpeed, os.str());
    }
  }

  // Overlaps between consecutive vehicles on the same lane.
  std::map<int, std::vector<const VehicleState*>> by_lane;
  for (const auto& v : vehicles) by_lane[v.lane].push_back(&v);
  for (auto& [lane, vs] : by_lane) {
    std::stable_sort(vs.begin(), vs.end(),
                     [](const VehicleState* a, const VehicleState* b) {
                       return a->position_m > b->position_m;
                     });
    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
      double g = gap(*vs[i], *vs[i + 1]);
      if (g < 0.0) {
        std::ostringstream os;
        os << vs[i]->id << " <- " << vs[i + 1]->id << " lane " << lane
           << " gap " << g;
        add(ViolationKind::Overlap, os.str());
      }
    }
  }

  // Platoon membership consistency: both membership fields present or
  // absent together, and indices within one platoon_id forming 0..n-1.
  std::map<std::string, std::vector<int>> indices;
  for (const auto& v : vehicles) {
    if (v.platoon_id.has_value() != v.position_in_platoon.has_value()) {
      add(ViolationKind::PlatoonIndexGap,
          v.id + " platoon_id/position_in_platoon mismatch");
      continue;
    }
    if (v.platoon_id) {
      indices[*v.platoon_id].push_back(*v.position_in_platoon);
    }
  }
  for (auto& [pid, idx] : indices) {
    std::sort(idx.begin(), idx.end());
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] != static_cast<int>(i)) {
        std::ostringstream os;
        os << "platoon " << pid << " indices not contiguous";
        add(ViolationKind::PlatoonIndexGap, os.str());
        break;
      }
    }
  }

  return out;
}

}  // namespace platoonsim
