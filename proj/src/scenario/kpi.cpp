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

#include "platoonsim/scenario/kpi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "platoonsim/core/ops.hpp"

namespace platoonsim::scenario {

namespace {

struct Series {
  std::vector<double> t;
  std::vector<double> speed;
  std::vector<double> accel;
  std::vector<std::optional<double>> gap;
  std::vector<PlatoonState> state;
};

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

}  // namespace

KpiReport compute_kpis(const std::vector<TrajectoryRecord>& records,
                       const ScenarioSpec& spec) {
  if (records.empty()) {
    throw SimError(SimErrorCode::InvalidState,
                   "cannot compute KPIs on an empty trajectory");
  }

  // Per-vehicle time series, preserving record order (sorted by t already).
  std::map<std::string, Series> series;
  for (const auto& r : records) {
    auto& s = series[r.vehicle_id];
    s.t.push_back(r.t_s);
    s.speed.push_back(r.speed_mps);
    s.accel.push_back(r.accel_mps2);
    s.gap.push_back(r.gap_m);
    s.state.push_back(r.platoon_state);
  }

  KpiReport report;

  // Collisions and global minimum gap: transitions into gap < 0 per
  // vehicle, minimum over every recorded gap.
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& [id, s] : series) {
    bool was_negative = false;
    for (const auto& g : s.gap) {
      if (!g) {
        was_negative = false;
        continue;
      }
      min_gap = std::min(min_gap, *g);
      if (*g < 0.0 && !was_negative) ++report.collision_count;
      was_negative = *g < 0.0;
    }
  }
  report.min_gap_m = std::isfinite(min_gap) ? min_gap : 0.0;

  // Formation time: first t where every spec truck present is Platooning.
  std::set<std::string> truck_ids;
  for (const auto& m : spec.platoon) truck_ids.insert(m.id);
  if (!truck_ids.empty()) {
    std::map<double, int> platooning_at;
    std::map<double, int> present_at;
    for (const auto& r : records) {
      if (!truck_ids.count(r.vehicle_id)) continue;
      present_at[r.t_s] += 1;
      if (r.platoon_state == PlatoonState::Platooning) {
        platooning_at[r.t_s] += 1;
      }
    }
    for (const auto& [t, count] : platooning_at) {
      if (count == present_at[t] &&
          count == static_cast<int>(truck_ids.size())) {
        report.formation_complete_t_s = t;
        break;
      }
    }
  }

  const double window_start =
      report.formation_complete_t_s >= 0.0 ? report.formation_complete_t_s
                                           : records.front().t_s;

  for (const auto& m : spec.platoon) {
    auto it = series.find(m.id);
    if (it == series.end()) continue;
    const Series& s = it->second;
    KpiReport::PerVehicle pv;
    pv.id = m.id;
    std::vector<double> gaps, speeds, accels;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      if (s.t[i] < window_start) continue;
      if (s.gap[i]) gaps.push_back(*s.gap[i]);
      speeds.push_back(s.speed[i]);
      accels.push_back(s.accel[i]);
    }
    pv.headway_mean_m = mean(gaps);
    pv.headway_std_m = stddev(gaps);
    pv.speed_std_mps = stddev(speeds);
    pv.accel_std_mps2 = stddev(accels);
    double peak = 0.0;
    for (double v : s.speed) peak = std::max(peak, std::abs(v - m.speed_mps));
    pv.peak_speed_deviation_mps = peak;
    report.per_vehicle.push_back(std::move(pv));
  }

  // Maneuver durations.
  auto first_state_time = [&](const std::string& id,
                              PlatoonState state) -> std::optional<double> {
    auto it = series.find(id);
    if (it == series.end()) return std::nullopt;
    const Series& s = it->second;
    for (std::size_t i = 0; i < s.t.size(); ++i) {
      if (s.state[i] == state) return s.t[i];
    }
    return std::nullopt;
  };

  if (std::holds_alternative<JoinManeuver>(spec.maneuver)) {
    // Join duration: first Platooning minus first Joining, worst truck.
    double worst = 0.0;
    bool any = false;
    for (const auto& m : spec.platoon) {
      const auto j = first_state_time(m.id, PlatoonState::Joining);
      const auto p = first_state_time(m.id, PlatoonState::Platooning);
      if (j && p && *p >= *j) {
        worst = std::max(worst, *p - *j);
        any = true;
      }
    }
    if (any) report.maneuver_durations_s["join"] = worst;
  } else if (const auto* sp = std::get_if<SplitManeuver>(&spec.maneuver)) {
    if (sp->index >= 0 && sp->index < static_cast<int>(spec.platoon.size())) {
      const std::string& id =
          spec.platoon[static_cast<std::size_t>(sp->index)].id;
      // First StandAlone sample after the split command.
      auto it = series.find(id);
      if (it != series.end()) {
        for (std::size_t i = 0; i < it->second.t.size(); ++i) {
          if (it->second.t[i] >= sp->at_time_s &&
              it->second.state[i] == PlatoonState::StandAlone) {
            report.maneuver_durations_s["split"] =
                it->second.t[i] - sp->at_time_s;
            break;
          }
        }
      }
    }
  } else if (const auto* sg = std::get_if<StopAndGoManeuver>(&spec.maneuver)) {
    // Disturbance duration: from braking start until every follower's
    // achieved time gap (net of standstill spacing) is back within 5% of
    // the platooning setpoint for good.
    const double t_gap = spec.tactical.t_platoon_s;
    const double band = 0.05 * t_gap;
    double last_outside = sg->brake_at_s;
    for (std::size_t k = 1; k < spec.platoon.size(); ++k) {
      auto it = series.find(spec.platoon[k].id);
      if (it == series.end()) continue;
      const Series& s = it->second;
      for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (s.t[i] < sg->brake_at_s || !s.gap[i]) continue;
        const double achieved =
            (*s.gap[i] - spec.controller.d0_m) /
            std::max(s.speed[i], kTimeGapSpeedFloor);
        if (std::abs(achieved - t_gap) > band) {
          last_outside = std::max(last_outside, s.t[i]);
        }
      }
    }
    report.maneuver_durations_s["stop_and_go"] = last_outside - sg->brake_at_s;
  } else if (const auto* ci = std::get_if<CutInManeuver>(&spec.maneuver)) {
    // Settling time: last instant any platoon truck still accelerates
    // noticeably after the insertion.
    double last_active = ci->event.at_time_s;
    for (const auto& m : spec.platoon) {
      auto it = series.find(m.id);
      if (it == series.end()) continue;
      const Series& s = it->second;
      for (std::size_t i = 0; i < s.t.size(); ++i) {
        if (s.t[i] >= ci->event.at_time_s && std::abs(s.accel[i]) > 0.02) {
          last_active = std::max(last_active, s.t[i]);
        }
      }
    }
    report.maneuver_durations_s["cut_in"] = last_active - ci->event.at_time_s;
  }

  return report;
}

std::string format_kpi_report(const KpiReport& report) {
  std::ostringstream os;
  os << "collisions: " << report.collision_count << "\n";
  os << "min gap [m]: " << report.min_gap_m << "\n";
  if (report.formation_complete_t_s >= 0.0) {
    os << "platoon formed at [s]: " << report.formation_complete_t_s << "\n";
  }
  for (const auto& [name, dur] : report.maneuver_durations_s) {
    os << "maneuver '" << name << "' duration [s]: " << dur << "\n";
  }
  for (const auto& pv : report.per_vehicle) {
    os << pv.id << ": headway mean " << pv.headway_mean_m << " m, std "
       << pv.headway_std_m << " m; speed std " << pv.speed_std_mps
       << " m/s; accel std " << pv.accel_std_mps2 << " m/s^2; peak |dv| "
       << pv.peak_speed_deviation_mps << " m/s\n";
  }
  return os.str();
}

}  // namespace platoonsim::scenario
