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

#include "platoonsim/authority/authority.hpp"

#include <algorithm>
#include <cmath>

namespace platoonsim::authority {

namespace {

bool is_system_event(ATEventKind k) {
  return k == ATEventKind::SystemFault ||
         k == ATEventKind::LeaderEmergencyBrake || k == ATEventKind::OddExit;
}

constexpr double kGridTol = 1e-9;

}  // namespace

std::int64_t grid_steps_ceil(double seconds, double dt_s) {
  const double ratio = seconds / dt_s;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) < kGridTol * std::max(1.0, std::abs(ratio))) {
    return static_cast<std::int64_t>(rounded);
  }
  return static_cast<std::int64_t>(std::ceil(ratio));
}

std::optional<MandatoryDecision> mandatory_decide(
    const std::vector<ATEvent>& events, const ATState& state) {
  bool system_manual = false;
  bool driver_manual = false;
  bool driver_automated = false;
  for (const auto& e : events) {
    if (is_system_event(e.kind)) system_manual = true;
    if (e.kind == ATEventKind::DriverTakeoverRequest) driver_manual = true;
    if (e.kind == ATEventKind::DriverActivationRequest) driver_automated = true;
  }

  std::optional<MandatoryDecision> decision;
  // Priority: system-initiated > driver takeover > driver activation. Any
  // request for Manual outranks a simultaneous activation request.
  if (system_manual) {
    decision = MandatoryDecision{ControlMode::Manual,
                                 DecisionPath::SystemInitiated};
  } else if (driver_manual) {
    decision = MandatoryDecision{ControlMode::Manual,
                                 DecisionPath::DriverInitiated};
  } else if (driver_automated) {
    decision = MandatoryDecision{ControlMode::Automated,
                                 DecisionPath::DriverInitiated};
  }
  if (decision && decision->target == state.mode) return std::nullopt;
  return decision;
}

std::optional<ControlMode> discretionary_decide(const ATState& state, Rng& rng,
                                                double t_s, double dt_s,
                                                const ATConfig& config) {
  if (state.mode == ControlMode::Manual) {
    if (config.p_activate_per_s <= 0.0) return std::nullopt;
    const bool propose = rng.bernoulli(config.p_activate_per_s * dt_s);
    if (!propose) return std::nullopt;
    if (t_s < state.inactive_until_s) return std::nullopt;  // lockout
    return ControlMode::Automated;
  }
  if (config.p_deactivate_per_s <= 0.0) return std::nullopt;
  if (rng.bernoulli(config.p_deactivate_per_s * dt_s)) {
    return ControlMode::Manual;
  }
  return std::nullopt;
}

ConstraintResult apply_constraints(ControlMode target_mode,
                                   const ATState& state, double t_s,
                                   double dt_s, const ATConfig& config) {
  ConstraintResult result{state, false};
  if (target_mode == state.mode) return result;

  if (target_mode == ControlMode::Manual) {
    const std::int64_t now_step = grid_steps_ceil(t_s, dt_s);
    const std::int64_t delay_steps =
        grid_steps_ceil(config.reaction_time_s, dt_s);
    const double due =
        static_cast<double>(now_step + delay_steps) * dt_s;
    result.state.pending = PendingTransition{ControlMode::Manual, due};
    result.accepted = true;
    return result;
  }

  // Manual -> Automated: no reaction delay, but the lockout can reject it.
  if (t_s < state.inactive_until_s - kGridTol) {
    return result;  // rejected, state unchanged
  }
  result.state.mode = ControlMode::Automated;
  result.state.pending.reset();
  result.accepted = true;
  return result;
}

TickResult tick(const ATState& state, const std::vector<ATEvent>& events,
                Rng& rng, double t_s, double dt_s, const ATConfig& config) {
  TickResult r;
  r.state = state;

  if (state.pending) {
    if (t_s >= state.pending->due_time_s - kGridTol) {
      r.state.mode = state.pending->target;
      r.state.pending.reset();
      if (r.state.mode == ControlMode::Manual) {
        r.state.inactive_until_s = t_s + config.min_inactive_time_s;
      }
      r.mode_for_step = r.state.mode;
      return r;
    }
    // Handover scheduled but not due: stay automated, hold the last valid
    // command, and ignore new proposals until realization.
    r.mode_for_step = state.mode;
    r.hold_last_command = state.pending->target == ControlMode::Manual;
    return r;
  }

  std::optional<ControlMode> target;
  if (auto m = mandatory_decide(events, state)) {
    target = m->target;
    r.decision_path = m->path;
  } else if (auto d = discretionary_decide(state, rng, t_s, dt_s, config)) {
    target = *d;
  }

  if (target) {
    auto applied = apply_constraints(*target, r.state, t_s, dt_s, config);
    r.state = applied.state;
  }
  r.mode_for_step = r.state.mode;
  r.hold_last_command =
      r.state.pending && r.state.pending->target == ControlMode::Manual;
  return r;
}

}  // namespace platoonsim::authority
