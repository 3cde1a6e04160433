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

#include <vector>

#include "platoonsim/core/types.hpp"
#include "platoonsim/sim/corridor.hpp"

namespace platoonsim {

/// Uniform adapter contract over a traffic platform: the in-process
/// reference simulator and the remote bridge client both satisfy it, so the
/// integration loop cannot tell them apart.
///
/// step() strictly advances the clock by one fixed dt; query_state() is
/// side-effect-free and must be called with the simulator's current time.
/// Not callable from two threads simultaneously.
class SimulatorHandle {
 public:
  virtual ~SimulatorHandle() = default;

  virtual Snapshot query_state(double t_s) = 0;
  virtual void apply_commands(const std::vector<CommandRecord>& commands) = 0;
  virtual SimClock step(double dt_s) = 0;
  virtual void inject_event(const InsertionEvent& event) = 0;

  virtual SimClock clock() const = 0;
};

}  // namespace platoonsim
