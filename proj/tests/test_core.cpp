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

#include "platoonsim/core/ops.hpp"
#include "platoonsim/core/rng.hpp"
#include "platoonsim/core/types.hpp"

using namespace platoonsim;

namespace {

VehicleState make_vehicle(std::string id, double pos, double len = 18.0,
                          double speed = 32.0, int lane = 0) {
  VehicleState v;
  v.id = std::move(id);
  v.kind = VehicleKind::Truck;
  v.position_m = pos;
  v.length_m = len;
  v.speed_mps = speed;
  v.lane = lane;
  return v;
}

}  // namespace

TEST_CASE("gap is bumper-to-bumper clearance") {
  CHECK(gap(make_vehicle("a", 100.0, 18.0), make_vehicle("b", 30.0)) ==
        doctest::Approx(52.0));
  CHECK(gap(make_vehicle("a", 18.0, 18.0), make_vehicle("b", 0.0)) ==
        doctest::Approx(0.0));
  // Zero-length leader at the desired spacing d0 + T v = 5 + 1.6 * 32.
  const double spacing = 5.0 + 1.6 * 32.0;
  CHECK(spacing == doctest::Approx(56.2));
  CHECK(gap(make_vehicle("a", spacing, 0.0), make_vehicle("b", 0.0)) ==
        doctest::Approx(56.2));
}

TEST_CASE("time gap divides by speed with a standstill floor") {
  auto leader = make_vehicle("a", 51.2 + 18.0, 18.0);
  auto follower = make_vehicle("b", 0.0, 18.0, 32.0);
  CHECK(time_gap(leader, follower) == doctest::Approx(1.6));

  follower.speed_mps = 0.0;
  auto close_leader = make_vehicle("a", 28.0, 18.0);
  CHECK(time_gap(close_leader, follower) == doctest::Approx(100.0));

  auto touching = make_vehicle("a", 18.0, 18.0);
  CHECK(time_gap(touching, follower) == doctest::Approx(0.0));
}

TEST_CASE("time gap is monotone in gap for fixed speed") {
  double prev = -1.0;
  for (double g = 0.0; g < 200.0; g += 3.7) {
    const double tg = time_gap_from(g, 17.0);
    CHECK(tg >= prev);
    prev = tg;
  }
}

TEST_CASE("validate_snapshot accepts a well-formed pair") {
  std::vector<VehicleState> snap{make_vehicle("a", 100.0),
                                 make_vehicle("b", 30.0)};
  CHECK(validate_snapshot(snap).empty());
}

TEST_CASE("validate_snapshot reports overlap") {
  // Follower front bumper past the leader's rear bumper.
  std::vector<VehicleState> snap{make_vehicle("a", 100.0),
                                 make_vehicle("b", 90.0)};
  const auto violations = validate_snapshot(snap);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == ViolationKind::Overlap);
}

TEST_CASE("validate_snapshot reports negative speed and duplicate ids") {
  auto a = make_vehicle("a", 100.0);
  auto b = make_vehicle("a", 30.0);
  b.speed_mps = -1.0;
  const auto violations = validate_snapshot({a, b});
  CHECK(violations.size() == 2);
  CHECK(std::any_of(violations.begin(), violations.end(), [](const auto& v) {
    return v.kind == ViolationKind::DuplicateId;
  }));
  CHECK(std::any_of(violations.begin(), violations.end(), [](const auto& v) {
    return v.kind == ViolationKind::NegativeSpeed;
  }));
}

TEST_CASE("validate_snapshot reports platoon index gaps") {
  auto a = make_vehicle("a", 200.0);
  auto b = make_vehicle("b", 100.0);
  a.platoon_id = "P0";
  a.position_in_platoon = 0;
  b.platoon_id = "P0";
  b.position_in_platoon = 2;  // index 1 missing
  const auto violations = validate_snapshot({a, b});
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].kind == ViolationKind::PlatoonIndexGap);
}

TEST_CASE("accepted snapshots have non-negative consecutive gaps") {
  Rng rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<VehicleState> snap;
    double pos = 0.0;
    const int n = 2 + static_cast<int>(rng.below(8));
    for (int i = n; i-- > 0;) {
      pos += 20.0 + rng.uniform(0.0, 80.0);
      auto v = make_vehicle("v" + std::to_string(i), pos);
      v.speed_mps = rng.uniform(0.0, 40.0);
      snap.push_back(std::move(v));
    }
    std::reverse(snap.begin(), snap.end());  // descending position
    if (!validate_snapshot(snap).empty()) continue;
    for (std::size_t i = 0; i + 1 < snap.size(); ++i) {
      CHECK(gap(snap[i], snap[i + 1]) >= 0.0);
    }
  }
}

TEST_CASE("platoon state names round-trip") {
  for (int i = 0; i < kPlatoonStateCount; ++i) {
    const auto s = static_cast<PlatoonState>(i);
    CHECK(platoon_state_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS(platoon_state_from_string("Nope"), std::invalid_argument);
}

TEST_CASE("clock time is an exact multiple of dt") {
  SimClock clock;
  clock.dt_s = 0.1;
  clock.step_index = 115;
  CHECK(clock.t_s() == 115 * 0.1);
  clock.step_index = 0;
  CHECK(clock.t_s() == 0.0);
}

TEST_CASE("rng streams are deterministic and fork-independent") {
  Rng a(99), b(99);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  Rng base(99);
  Rng f1 = base.fork("demand");
  Rng f2 = base.fork("lane");
  int same = 0;
  for (int i = 0; i < 1000; ++i) {
    if (f1.next_u64() == f2.next_u64()) ++same;
  }
  CHECK(same == 0);
}

TEST_CASE("poisson sampling matches its mean") {
  Rng rng(7);
  const double mean = 0.1;
  const int steps = 100000;
  long total = 0;
  for (int i = 0; i < steps; ++i) total += rng.poisson(mean);
  // 3 sigma of a Poisson(10000) total.
  CHECK(std::abs(static_cast<double>(total) - 10000.0) < 300.0);
  CHECK(Rng(1).poisson(0.0) == 0);
}

TEST_CASE("uniform01 stays in range") {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
