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

#include "platoonsim/scenario/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace platoonsim::scenario {

namespace {

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
  throw SimError(SimErrorCode::InvalidState, path + ": " + what);
}

std::string format_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return "0";
  return std::string(buf, ptr);
}

double parse_double(const std::string& s, const std::string& path) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    io_fail(path, "bad number '" + s + "'");
  }
  return x;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_csv(const std::vector<TrajectoryRecord>& records,
               const std::string& path) {
  if (records.empty()) {
    io_fail(path, "refusing to write an empty trajectory");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open for writing");
  out << kCsvHeader << "\n";
  for (const auto& r : records) {
    out << format_double(r.t_s) << ',' << r.vehicle_id << ','
        << format_double(r.position_m) << ',' << format_double(r.speed_mps)
        << ',' << format_double(r.accel_mps2) << ','
        << (r.gap_m ? format_double(*r.gap_m) : "") << ','
        << (r.time_gap_s ? format_double(*r.time_gap_s) : "") << ','
        << to_string(r.platoon_state) << ',' << to_string(r.control_mode)
        << "\n";
  }
  if (!out) io_fail(path, "write failed");
}

std::vector<TrajectoryRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) io_fail(path, "cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) io_fail(path, "empty file");
  if (line != kCsvHeader) io_fail(path, "unexpected CSV header");

  std::vector<TrajectoryRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split_csv_line(line);
    if (cols.size() != 9) io_fail(path, "expected 9 columns");
    TrajectoryRecord r;
    r.t_s = parse_double(cols[0], path);
    r.vehicle_id = cols[1];
    r.position_m = parse_double(cols[2], path);
    r.speed_mps = parse_double(cols[3], path);
    r.accel_mps2 = parse_double(cols[4], path);
    if (!cols[5].empty()) r.gap_m = parse_double(cols[5], path);
    if (!cols[6].empty()) r.time_gap_s = parse_double(cols[6], path);
    try {
      r.platoon_state = platoon_state_from_string(cols[7]);
      r.control_mode = control_mode_from_string(cols[8]);
    } catch (const std::invalid_argument& e) {
      io_fail(path, e.what());
    }
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

struct PlotSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;
};

/// Minimal polyline SVG panel writer: axes, ticks, legend, one polyline per
/// series.
void write_svg_panel(const std::string& path, const std::string& title,
                     const std::string& y_label,
                     const std::vector<PlotSeries>& series) {
  constexpr double kW = 840, kH = 560;
  constexpr double kL = 70, kR = 20, kT = 40, kB = 50;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin) || xmax <= xmin) {
    xmin = 0;
    xmax = 1;
  }
  if (!std::isfinite(ymin)) {
    ymin = 0;
    ymax = 1;
  }
  if (ymax - ymin < 1e-9) {
    ymin -= 0.5;
    ymax += 0.5;
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }

  auto px = [&](double x) {
    return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR);
  };
  auto py = [&](double y) {
    return kH - kB - (y - ymin) / (ymax - ymin) * (kH - kT - kB);
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) io_fail(path, "cannot open for writing");
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kW
      << "' height='" << kH << "' viewBox='0 0 " << kW << " " << kH
      << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << kW / 2 << "' y='24' text-anchor='middle' "
      << "font-family='sans-serif' font-size='16'>" << title << "</text>\n";

  // Axes with 5 ticks each.
  out << "<g stroke='black' stroke-width='1'>\n";
  out << "<line x1='" << kL << "' y1='" << kH - kB << "' x2='" << kW - kR
      << "' y2='" << kH - kB << "'/>\n";
  out << "<line x1='" << kL << "' y1='" << kT << "' x2='" << kL << "' y2='"
      << kH - kB << "'/>\n";
  out << "</g>\n";
  out << "<g font-family='sans-serif' font-size='11' fill='black'>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    std::ostringstream xs, ys;
    xs.precision(5);
    ys.precision(5);
    xs << fx;
    ys << fy;
    out << "<line x1='" << px(fx) << "' y1='" << kH - kB << "' x2='" << px(fx)
        << "' y2='" << kH - kB + 5 << "' stroke='black'/>\n";
    out << "<text x='" << px(fx) << "' y='" << kH - kB + 18
        << "' text-anchor='middle'>" << xs.str() << "</text>\n";
    out << "<line x1='" << kL - 5 << "' y1='" << py(fy) << "' x2='" << kL
        << "' y2='" << py(fy) << "' stroke='black'/>\n";
    out << "<text x='" << kL - 8 << "' y='" << py(fy) + 4
        << "' text-anchor='end'>" << ys.str() << "</text>\n";
  }
  out << "<text x='" << (kL + kW - kR) / 2 << "' y='" << kH - 12
      << "' text-anchor='middle'>time [s]</text>\n";
  out << "<text x='16' y='" << (kT + kH - kB) / 2
      << "' text-anchor='middle' transform='rotate(-90 16 "
      << (kT + kH - kB) / 2 << ")'>" << y_label << "</text>\n";
  out << "</g>\n";

  for (const auto& s : series) {
    if (s.points.empty()) continue;
    out << "<polyline fill='none' stroke='" << s.color
        << "' stroke-width='1.5' points='";
    for (const auto& [x, y] : s.points) {
      out << px(x) << ',' << py(y) << ' ';
    }
    out << "'/>\n";
  }

  double ly = kT + 8;
  for (const auto& s : series) {
    out << "<line x1='" << kW - kR - 130 << "' y1='" << ly << "' x2='"
        << kW - kR - 105 << "' y2='" << ly << "' stroke='" << s.color
        << "' stroke-width='2'/>\n";
    out << "<text x='" << kW - kR - 100 << "' y='" << ly + 4
        << "' font-family='sans-serif' font-size='12'>" << s.label
        << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
  if (!out) io_fail(path, "write failed");
}

}  // namespace

void emit_plots(const std::vector<TrajectoryRecord>& records,
                const std::string& out_dir, const PlotOptions& options) {
  if (records.empty()) {
    io_fail(out_dir, "refusing to plot an empty trajectory");
  }
  std::filesystem::create_directories(out_dir);

  // Plotted set: vehicles that ever report platoon membership activity plus
  // cut-in intruders; background demand traffic stays out of the panels.
  std::set<std::string> plotted;
  for (const auto& r : records) {
    if (r.platoon_state != PlatoonState::StandAlone ||
        r.vehicle_id.rfind("cutin_", 0) == 0) {
      plotted.insert(r.vehicle_id);
    }
  }
  if (plotted.empty()) {
    for (const auto& r : records) plotted.insert(r.vehicle_id);
  }

  // Stable ordering: by first-seen position, leader first; intruders last.
  std::vector<std::string> order;
  {
    std::map<std::string, double> first_pos;
    for (const auto& r : records) {
      if (plotted.count(r.vehicle_id) && !first_pos.count(r.vehicle_id)) {
        first_pos[r.vehicle_id] = r.position_m;
      }
    }
    for (const auto& [id, pos] : first_pos) order.push_back(id);
    std::sort(order.begin(), order.end(),
              [&](const std::string& a, const std::string& b) {
                const bool ca = a.rfind("cutin_", 0) == 0;
                const bool cb = b.rfind("cutin_", 0) == 0;
                if (ca != cb) return cb;
                return first_pos[a] > first_pos[b];
              });
  }

  static const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c",
                                   "#e0a800", "#9467bd", "#17becf"};
  auto color_of = [&](std::size_t i, const std::string& id) -> std::string {
    if (id.rfind("cutin_", 0) == 0) return "#000000";
    return kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
  };

  auto in_window = [&](double t) { return t >= options.t0 && t <= options.t1; };

  std::vector<PlotSeries> pos, speed, accel, headway;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::string& id = order[i];
    PlotSeries p{id, color_of(i, id), {}};
    PlotSeries v = p, a = p;
    for (const auto& r : records) {
      if (r.vehicle_id != id || !in_window(r.t_s)) continue;
      p.points.emplace_back(r.t_s, r.position_m);
      v.points.emplace_back(r.t_s, r.speed_mps);
      a.points.emplace_back(r.t_s, r.accel_mps2);
    }
    pos.push_back(std::move(p));
    speed.push_back(std::move(v));
    accel.push_back(std::move(a));
  }

  // Headway panel: gap of the second platoon vehicle to its leader.
  if (order.size() >= 2) {
    const std::string& second = order[1];
    PlotSeries h{second + " gap", "#1f77b4", {}};
    for (const auto& r : records) {
      if (r.vehicle_id != second || !r.gap_m || !in_window(r.t_s)) continue;
      h.points.emplace_back(r.t_s, *r.gap_m);
    }
    headway.push_back(std::move(h));
  }

  namespace fs = std::filesystem;
  write_svg_panel((fs::path(out_dir) / "position.svg").string(), "Position",
                  "position [m]", pos);
  write_svg_panel((fs::path(out_dir) / "speed.svg").string(), "Speed",
                  "speed [m/s]", speed);
  write_svg_panel((fs::path(out_dir) / "accel.svg").string(), "Acceleration",
                  "acceleration [m/s^2]", accel);
  write_svg_panel((fs::path(out_dir) / "headway.svg").string(), "Headway",
                  "gap [m]", headway);
}

}  // namespace platoonsim::scenario
