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

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

#include "platoonsim/bridge/client.hpp"
#include "platoonsim/bridge/server.hpp"
#include "platoonsim/scenario/kpi.hpp"
#include "platoonsim/scenario/output.hpp"
#include "platoonsim/scenario/runner.hpp"
#include "platoonsim/scenario/scenario_spec.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitCoSimFault = 2;

using namespace platoonsim;

int print_validation_error(const scenario::ScenarioValidationError& e) {
  std::cerr << "scenario validation failed:\n";
  for (const auto& issue : e.issues()) {
    std::cerr << "  " << issue << "\n";
  }
  return kExitValidation;
}

struct RemoteEndpoint {
  std::string host;
  int port = 0;
};

std::optional<RemoteEndpoint> parse_endpoint(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon + 1 >= s.size()) return std::nullopt;
  RemoteEndpoint ep;
  ep.host = s.substr(0, colon);
  try {
    ep.port = std::stoi(s.substr(colon + 1));
  } catch (...) {
    return std::nullopt;
  }
  return ep;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            const std::string& remote, std::optional<std::uint64_t> seed) {
  scenario::ScenarioSpec spec;
  try {
    spec = scenario::load_scenario(scenario_path);
  } catch (const scenario::ScenarioValidationError& e) {
    return print_validation_error(e);
  }
  if (seed) spec.seed = *seed;

  std::filesystem::create_directories(out_dir);

  std::unique_ptr<SimulatorHandle> handle;
  try {
    if (remote.empty()) {
      handle = scenario::make_reference_simulator(spec);
    } else {
      const auto ep = parse_endpoint(remote);
      if (!ep) {
        std::cerr << "bad --remote endpoint '" << remote
                  << "' (expected HOST:PORT)\n";
        return kExitValidation;
      }
      handle = bridge::connect(ep->host, ep->port, spec.dt_s);
    }
  } catch (const SimError& e) {
    std::cerr << "co-simulation fault: " << e.what() << "\n";
    return kExitCoSimFault;
  }

  const scenario::RunResult result = scenario::run(spec, *handle);
  const std::string csv_path =
      (std::filesystem::path(out_dir) / "trajectory.csv").string();
  if (!result.records.empty()) {
    scenario::write_csv(result.records, csv_path);
    scenario::emit_plots(result.records, out_dir);
    const auto kpis = scenario::compute_kpis(result.records, spec);
    std::cout << scenario::format_kpi_report(kpis);
    std::cout << "trajectory: " << csv_path << "\n";
  }
  if (result.aborted) {
    std::cerr << "run aborted: " << result.abort_reason << "\n";
    if (!result.records.empty()) {
      std::cerr << "partial trajectory flushed to " << csv_path << "\n";
    }
    return kExitCoSimFault;
  }
  return kExitOk;
}

int cmd_serve(const std::string& scenario_path, const std::string& host,
              int port) {
  scenario::ScenarioSpec spec;
  try {
    spec = scenario::load_scenario(scenario_path);
  } catch (const scenario::ScenarioValidationError& e) {
    return print_validation_error(e);
  }
  try {
    bridge::ServerConfig config;
    config.host = host;
    config.port = port;
    config.dt_s = spec.dt_s;
    bridge::BridgeServer server(
        [spec]() { return scenario::make_reference_simulator(spec); }, config);
    std::cout << "serving scenario '" << spec.name << "' on " << host << ":"
              << server.bound_port() << "\n";
    server.serve();
  } catch (const SimError& e) {
    std::cerr << "server fault: " << e.what() << "\n";
    return kExitCoSimFault;
  }
  return kExitOk;
}

int cmd_kpi(const std::string& traj_path, const std::string& scenario_path) {
  scenario::ScenarioSpec spec;
  try {
    if (!scenario_path.empty()) {
      spec = scenario::load_scenario(scenario_path);
    }
  } catch (const scenario::ScenarioValidationError& e) {
    return print_validation_error(e);
  }
  try {
    const auto records = scenario::read_csv(traj_path);
    const auto kpis = scenario::compute_kpis(records, spec);
    std::cout << scenario::format_kpi_report(kpis);
  } catch (const SimError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

int cmd_plot(const std::string& traj_path, const std::string& out_dir,
             double t0, double t1) {
  try {
    const auto records = scenario::read_csv(traj_path);
    scenario::PlotOptions options;
    options.t0 = t0;
    options.t1 = t1;
    scenario::emit_plots(records, out_dir, options);
    std::cout << "plots written to " << out_dir << "\n";
  } catch (const SimError& e) {
    std::cerr << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truck platooning co-simulation toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", remote;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run a scenario and record outputs");
  run->add_option("--scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--remote", remote,
                  "Drive a remote simulator at HOST:PORT instead of the "
                  "built-in one");
  run->add_option("--seed", seed, "Override the scenario seed");

  std::string host = "127.0.0.1";
  int port = 9000;
  std::string serve_scenario;
  auto* serve = app.add_subcommand(
      "serve", "Expose the built-in simulator over the wire protocol");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "TCP port (0 picks one)");
  serve->add_option("--scenario", serve_scenario, "Scenario file")->required();

  std::string traj_path, kpi_scenario;
  auto* kpi = app.add_subcommand("kpi", "Compute KPIs from a trajectory CSV");
  kpi->add_option("--traj", traj_path, "Trajectory CSV")->required();
  kpi->add_option("--scenario", kpi_scenario,
                  "Scenario file for maneuver-aware KPIs");

  std::string plot_traj, plot_out = "out";
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  auto* plot = app.add_subcommand("plot", "Render SVG panels from a CSV");
  plot->add_option("--traj", plot_traj, "Trajectory CSV")->required();
  plot->add_option("--out", plot_out, "Output directory");
  plot->add_option("--t0", t0, "Window start [s]");
  plot->add_option("--t1", t1, "Window end [s]");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(scenario_path, out_dir, remote, seed);
  if (serve->parsed()) return cmd_serve(serve_scenario, host, port);
  if (kpi->parsed()) return cmd_kpi(traj_path, kpi_scenario);
  if (plot->parsed()) return cmd_plot(plot_traj, plot_out, t0, t1);
  return kExitOk;
}
