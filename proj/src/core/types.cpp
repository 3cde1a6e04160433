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

#include "platoonsim/core/types.hpp"

namespace platoonsim {

std::string to_string(VehicleKind k) {
  return k == VehicleKind::Truck ? "Truck" : "Car";
}

std::string to_string(ControlMode m) {
  return m == ControlMode::Manual ? "Manual" : "Automated";
}

std::string to_string(PlatoonState s) {
  switch (s) {
    case PlatoonState::StandAlone:
      return "StandAlone";
    case PlatoonState::Joining:
      return "Joining";
    case PlatoonState::Platooning:
      return "Platooning";
    case PlatoonState::FrontSplit:
      return "FrontSplit";
    case PlatoonState::BackSplit:
      return "BackSplit";
    case PlatoonState::CutIn:
      return "CutIn";
  }
  return "StandAlone";
}

VehicleKind vehicle_kind_from_string(const std::string& s) {
  if (s == "Truck") return VehicleKind::Truck;
  if (s == "Car") return VehicleKind::Car;
  throw std::invalid_argument("unknown vehicle kind: " + s);
}

ControlMode control_mode_from_string(const std::string& s) {
  if (s == "Manual") return ControlMode::Manual;
  if (s == "Automated") return ControlMode::Automated;
  throw std::invalid_argument("unknown control mode: " + s);
}

PlatoonState platoon_state_from_string(const std::string& s) {
  if (s == "StandAlone") return PlatoonState::StandAlone;
  if (s == "Joining") return PlatoonState::Joining;
  if (s == "Platooning") return PlatoonState::Platooning;
  if (s == "FrontSplit") return PlatoonState::FrontSplit;
  if (s == "BackSplit") return PlatoonState::BackSplit;
  if (s == "CutIn") return PlatoonState::CutIn;
  throw std::invalid_argument("unknown platoon state: " + s);
}

const VehicleState* Snapshot::find(const std::string& id) const {
  for (const auto& v : vehicles) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

}  // namespace platoonsim
