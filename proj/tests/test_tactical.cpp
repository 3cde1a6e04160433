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

#include <doctest.h>

#include <algorithm>

#include "platoonsim/core/rng.hpp"
#include "platoonsim/tactical/tactical.hpp"

using namespace platoonsim;
using namespace platoonsim::tactical;

namespace {

VehicleState truck(std::string id, double pos, double speed = 32.0) {
  VehicleState v;
  v.id = std::move(id);
  v.kind = VehicleKind::Truck;
  v.position_m = pos;
  v.speed_mps = speed;
  v.length_m = 18.0;
  v.control_mode = ControlMode::Automated;
  return v;
}

VehicleState car(std::string id, double pos, double speed = 30.0) {
  VehicleState v;
  v.id = std::move(id);
  v.kind = VehicleKind::Car;
  v.position_m = pos;
  v.speed_mps = speed;
  v.length_m = 4.5;
  return v;
}

VehicleState member(std::string id, double pos, int index,
                    const std::string& pid = "P0") {
  VehicleState v = truck(std::move(id), pos);
  v.platoon_id = pid;
  v.position_in_platoon = index;
  v.platoon_state = PlatoonState::Platooning;
  return v;
}

Snapshot snap_of(std::vector<VehicleState> vehicles) {
  Snapshot s;
  s.vehicles = std::move(vehicles);
  std::sort(s.vehicles.begin(), s.vehicles.end(),
            [](const VehicleState& a, const VehicleState& b) {
              return a.position_m > b.position_m;
            });
  return s;
}

}  // namespace

TEST_CASE("front gap scan finds the nearest vehicle ahead") {
  auto snap = snap_of({truck("ego", 0.0), truck("near", 56.2 + 18.0),
                       truck("far", 120.0 + 18.0)});
  const auto info = front_gap_scan(snap, "ego");
  REQUIRE(info.immediate_leader.has_value());
  CHECK(info.immediate_leader->id == "near");
  CHECK(info.gap_m == doctest::Approx(56.2));
}

TEST_CASE("front gap scan: frontmost vehicle has no leader") {
  auto snap = snap_of({truck("ego", 100.0), truck("behind", 20.0)});
  const auto info = front_gap_scan(snap, "ego");
  CHECK(!info.immediate_leader.has_value());
  CHECK(std::isinf(info.gap_m));
}

TEST_CASE("front gap scan picks a car over a farther platoon truck") {
  // Scan result must not depend on snapshot ordering.
  std::vector<VehicleState> base{truck("ego", 0.0), car("car", 40.0),
                                 member("m", 90.0, 0)};
  std::sort(base.begin(), base.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  do {
    Snapshot s;
    s.vehicles = base;
    const auto info = front_gap_scan(s, "ego");
    REQUIRE(info.immediate_leader.has_value());
    CHECK(info.immediate_leader->id == "car");
    CHECK(!info.leader_is_platoon_member);
  } while (std::next_permutation(
      base.begin(), base.end(),
      [](const auto& a, const auto& b) { return a.id < b.id; }));
}

TEST_CASE("front gap scan throws on an unknown ego") {
  auto snap = snap_of({truck("a", 0.0)});
  CHECK_THROWS_AS(front_gap_scan(snap, "ghost"), SimError);
}

TEST_CASE("rear gap scan: member position and chain length") {
  TacticalConfig cfg;
  auto snap = snap_of(
      {member("L", 200.0, 0), member("F1", 125.8, 1), member("F2", 51.6, 2)});
  const auto info = rear_gap_scan(snap, "F2", cfg);
  CHECK(info.position_in_platoon == 2);
  CHECK(info.platoon_length_so_far == 3);
  CHECK(info.platoon_total_size == 3);
  CHECK(!info.immediate_follower.has_value());
}

TEST_CASE("rear gap scan: standalone ego is a chain of one") {
  TacticalConfig cfg;
  auto snap = snap_of({truck("ego", 100.0)});
  const auto info = rear_gap_scan(snap, "ego", cfg);
  CHECK(info.position_in_platoon == 0);
  CHECK(info.platoon_length_so_far == 1);
  CHECK(info.platoon_total_size == 1);
}

TEST_CASE("rear gap scan: trailing candidate sees the cap boundary") {
  TacticalConfig cfg;
  cfg.max_platoon_length = 7;
  for (int size = 1; size <= 8; ++size) {
    std::vector<VehicleState> vehicles;
    double pos = 1000.0;
    for (int i = 0; i < size; ++i) {
      vehicles.push_back(member("m" + std::to_string(i), pos, i));
      pos -= 74.2;
    }
    vehicles.push_back(truck("cand", pos));
    auto snap = snap_of(vehicles);
    const auto info = rear_gap_scan(snap, "cand", cfg);
    // Would-be index equals the current platoon size; the cap comparison
    // signals when the platoon is full.
    CHECK(info.position_in_platoon == size);
    const bool may_join = info.position_in_platoon < cfg.max_platoon_length;
    CHECK(may_join == (size < 7));
  }
}

TEST_CASE("classify: platooning ego behind a foreign car proposes CutIn") {
  TacticalConfig cfg;
  auto ego = member("ego", 0.0, 1);
  auto snap = snap_of({ego, car("intruder", 30.0), member("L", 90.0, 0)});
  const auto front = front_gap_scan(snap, "ego");
  const auto rear = rear_gap_scan(snap, "ego", cfg);
  CHECK(classify(ego, front, rear, {}, 0.0, cfg) == PlatoonState::CutIn);
}

TEST_CASE("classify: join activation gap sweep") {
  TacticalConfig cfg;
  for (double g = 1.0; g < 200.0; g += 1.0) {
    auto ego = truck("ego", 0.0);
    auto leader = member("tail", g + 18.0, 0);
    auto snap = snap_of({ego, leader});
    const auto front = front_gap_scan(snap, "ego");
    const auto rear = rear_gap_scan(snap, "ego", cfg);
    const auto state = classify(ego, front, rear, {}, 0.0, cfg);
    if (g < cfg.join_activation_gap_m) {
      CHECK(state == PlatoonState::Joining);
    } else {
      CHECK(state == PlatoonState::StandAlone);
    }
  }
}

TEST_CASE("classify: no joining onto a full platoon") {
  TacticalConfig cfg;
  cfg.max_platoon_length = 2;
  auto ego = truck("ego", 0.0);
  auto snap = snap_of({ego, member("m1", 80.0, 1), member("m0", 160.0, 0)});
  const auto front = front_gap_scan(snap, "ego");
  const auto rear = rear_gap_scan(snap, "ego", cfg);
  CHECK(classify(ego, front, rear, {}, 0.0, cfg) == PlatoonState::StandAlone);
}

TEST_CASE("classify: emergency stop forces a controlled detach") {
  TacticalConfig cfg;
  auto ego = member("ego", 0.0, 1);
  auto snap = snap_of({ego, member("L", 74.2, 0)});
  const auto front = front_gap_scan(snap, "ego");
  const auto rear = rear_gap_scan(snap, "ego", cfg);
  std::vector<TacticalEvent> events{{TacticalEventKind::EmergencyStop, 0.0}};
  CHECK(classify(ego, front, rear, events, 0.0, cfg) ==
        PlatoonState::FrontSplit);
}

TEST_CASE("classify: cut-in resolution and patience") {
  TacticalConfig cfg;
  auto ego = member("ego", 0.0, 1);
  ego.platoon_state = PlatoonState::CutIn;

  SUBCASE("intruder gone, platoon mate ahead again") {
    auto snap = snap_of({ego, member("L", 74.2, 0)});
    const auto front = front_gap_scan(snap, "ego");
    const auto rear = rear_gap_scan(snap, "ego", cfg);
    CHECK(classify(ego, front, rear, {}, 5.0, cfg) ==
          PlatoonState::Platooning);
  }
  SUBCASE("intruder persists past patience") {
    auto snap = snap_of({ego, car("intruder", 40.0), member("L", 120.0, 0)});
    const auto front = front_gap_scan(snap, "ego");
    const auto rear = rear_gap_scan(snap, "ego", cfg);
    CHECK(classify(ego, front, rear, {}, 29.9, cfg) == PlatoonState::CutIn);
    CHECK(classify(ego, front, rear, {}, 30.0, cfg) ==
          PlatoonState::BackSplit);
  }
}

TEST_CASE("classify and transition are pure") {
  TacticalConfig cfg;
  auto ego = member("ego", 0.0, 1);
  auto snap = snap_of({ego, car("c", 30.0), member("L", 100.0, 0)});
  const auto front = front_gap_scan(snap, "ego");
  const auto rear = rear_gap_scan(snap, "ego", cfg);
  const auto first = classify(ego, front, rear, {}, 1.0, cfg);
  for (int i = 0; i < 100; ++i) {
    CHECK(classify(ego, front, rear, {}, 1.0, cfg) == first);
    CHECK(transition(PlatoonState::Joining, PlatoonState::Platooning) ==
          PlatoonState::Platooning);
  }
}

TEST_CASE("transition accepts exactly the allowed edge set") {
  using S = PlatoonState;
  const std::vector<std::pair<S, S>> allowed = {
      {S::StandAlone, S::Joining},   {S::Joining, S::Platooning},
      {S::Joining, S::StandAlone},   {S::Platooning, S::CutIn},
      {S::Platooning, S::FrontSplit}, {S::Platooning, S::BackSplit},
      {S::CutIn, S::Platooning},     {S::CutIn, S::BackSplit},
      {S::FrontSplit, S::StandAlone}, {S::BackSplit, S::StandAlone}};

  int accepted_non_identity = 0;
  int accepted_identity = 0;
  int suppressed = 0;
  for (int a = 0; a < kPlatoonStateCount; ++a) {
    for (int b = 0; b < kPlatoonStateCount; ++b) {
      const S cur = static_cast<S>(a);
      const S prop = static_cast<S>(b);
      const S out = transition(cur, prop);
      if (cur == prop) {
        CHECK(out == cur);
        ++accepted_identity;
        continue;
      }
      const bool listed =
          std::find(allowed.begin(), allowed.end(),
                    std::make_pair(cur, prop)) != allowed.end();
      if (listed) {
        CHECK(out == prop);
        ++accepted_non_identity;
      } else {
        CHECK(out == cur);
        ++suppressed;
      }
    }
  }
  CHECK(accepted_identity == 6);
  CHECK(accepted_non_identity == 10);
  CHECK(suppressed == 20);

  // Spot checks straight from the edge list.
  CHECK(transition(S::StandAlone, S::Joining) == S::Joining);
  CHECK(transition(S::StandAlone, S::Platooning) == S::StandAlone);
  CHECK(transition(S::CutIn, S::StandAlone) == S::CutIn);
}

TEST_CASE("decide emits the configured setpoints") {
  TacticalConfig cfg;
  auto snap = snap_of({truck("ego", 0.0), member("L", 74.2, 0)});
  const auto front = front_gap_scan(snap, "ego");

  SUBCASE("platooning tracks the leader at the platoon time gap") {
    const auto d = decide(PlatoonState::Platooning, front, 32.0, cfg);
    CHECK(d.target_time_gap_s == 1.6);
    CHECK(d.target_speed_mps == 32.0);
    CHECK(d.new_state == PlatoonState::Platooning);
  }
  SUBCASE("cut-in opens the split gap") {
    const auto d = decide(PlatoonState::CutIn, front, 32.0, cfg);
    CHECK(d.target_time_gap_s == 3.0);
  }
  SUBCASE("standalone cruises at the desired speed") {
    FrontGapInfo empty;
    const auto d = decide(PlatoonState::StandAlone, empty, 31.0, cfg);
    CHECK(d.target_speed_mps == 31.0);
    CHECK(d.target_time_gap_s == 1.6);
  }
  SUBCASE("joining approaches with bounded surplus") {
    const auto d = decide(PlatoonState::Joining, front, 40.0, cfg);
    CHECK(d.target_speed_mps == 34.0);  // leader 32 + 2
  }
  SUBCASE("default setpoints form a closed set") {
    for (int s = 0; s < kPlatoonStateCount; ++s) {
      const auto d = decide(static_cast<PlatoonState>(s), front, 32.0, cfg);
      CHECK((d.target_time_gap_s == 1.6 || d.target_time_gap_s == 3.0));
    }
  }
}
