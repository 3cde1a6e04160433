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

#include <optional>
#include <vector>

#include "platoonsim/core/rng.hpp"
#include "platoonsim/core/types.hpp"

namespace platoonsim::authority {

struct ATConfig {
  double reaction_time_s = 1.5;      // automated -> manual handover delay
  double min_inactive_time_s = 10.0; // lockout after the driver takes over
  double p_activate_per_s = 0.0;     // discretionary manual -> automated
  double p_deactivate_per_s = 0.0;   // discretionary automated -> manual
};

enum class ATEventKind {
  SystemFault,
  LeaderEmergencyBrake,
  OddExit,
  DriverTakeoverRequest,
  DriverActivationRequest,
};

struct ATEvent {
  ATEventKind kind;
  double observed_at_s = 0.0;
};

/// Which decision path produced a mandatory decision; recorded for audit.
enum class DecisionPath { SystemInitiated, DriverInitiated };

struct MandatoryDecision {
  ControlMode target;
  DecisionPath path;
};

struct PendingTransition {
  ControlMode target;
  double due_time_s = 0.0;
};

struct ATState {
  ControlMode mode = ControlMode::Automated;
  std::optional<PendingTransition> pending;
  double inactive_until_s = 0.0;
};

/// Mandatory decision layer: parallel system-initiated and driver-initiated
/// paths merged by priority (system wins). Empty when nothing applies or
/// the winning target equals the current mode.
std::optional<MandatoryDecision> mandatory_decide(
    const std::vector<ATEvent>& events, const ATState& state);

/// Discretionary layer, consulted only when the mandatory layer was silent.
/// Bernoulli per step with the configured rates; activation proposals are
/// suppressed during the post-takeover lockout.
std::optional<ControlMode> discretionary_decide(const ATState& state, Rng& rng,
                                                double t_s, double dt_s,
                                                const ATConfig& config);

struct ConstraintResult {
  ATState state;
  bool accepted = false;
};

/// Transition-constraint layer. Automated->Manual is scheduled
/// reaction_time later (rounded up to the step grid); Manual->Automated is
/// realized immediately unless the lockout rejects it.
ConstraintResult apply_constraints(ControlMode target_mode,
                                   const ATState& state, double t_s,
                                   double dt_s, const ATConfig& config);

struct TickResult {
  ATState state;
  ControlMode mode_for_step = ControlMode::Automated;
  /// True while a scheduled Manual handover is outstanding: the truck stays
  /// automated and holds its last command instead of computing a new one.
  bool hold_last_command = false;
  std::optional<DecisionPath> decision_path;  // set when a mandatory decision
                                              // fired this tick
};

/// One per-truck evaluation per step, run before tactical/operational
/// control. Realizes due transitions first; otherwise mandatory, then
/// discretionary, then the constraint layer.
TickResult tick(const ATState& state, const std::vector<ATEvent>& events,
                Rng& rng, double t_s, double dt_s, const ATConfig& config);

/// Number of whole steps covering at least `seconds` (grid round-up with a
/// tolerance for values that are already an exact multiple of dt).
std::int64_t grid_steps_ceil(double seconds, double dt_s);

}  // namespace platoonsim::authority
