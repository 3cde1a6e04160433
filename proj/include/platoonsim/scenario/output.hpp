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

#include <limits>
#include <string>
#include <vector>

#include "platoonsim/scenario/runner.hpp"

namespace platoonsim::scenario {

inline constexpr char kCsvHeader[] =
    "t_s,vehicle_id,position_m,speed_mps,accel_mps2,gap_m,time_gap_s,"
    "platoon_state,control_mode";

/// Writes the trajectory CSV with the fixed header above. Doubles use the
/// shortest representation that parses back bit-equal, so a written file
/// re-read with read_csv() reproduces the records exactly.
void write_csv(const std::vector<TrajectoryRecord>& records,
               const std::string& path);

std::vector<TrajectoryRecord> read_csv(const std::string& path);

struct PlotOptions {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
};

/// Emits the four scenario panels as SVG files into out_dir:
/// position.svg, speed.svg, accel.svg beside headway.svg (gap of the
/// platoon's second vehicle to its leader). Plotted vehicles are those that
/// ever platoon plus any cut-in intruders.
void emit_plots(const std::vector<TrajectoryRecord>& records,
                const std::string& out_dir, const PlotOptions& options = {});

}  // namespace platoonsim::scenario
