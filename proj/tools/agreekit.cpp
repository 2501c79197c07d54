#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "agreekit/cli.hpp"

namespace cli = agreekit::cli;

namespace {

void add_common(CLI::App* app, cli::CommonOptions* c) {
  app->add_option("--out", c->out_dir, "Output directory")
      ->capture_default_str();
  app->add_flag("--force", c->force, "Overwrite existing outputs");
  app->add_flag("--strict", c->strict, "Escalate warnings to exit code 4");
  app->add_option("--seed", c->seed, "Random seed")->capture_default_str();
  app->add_option("--budget", c->budget, "Combinatorial enumeration budget")
      ->capture_default_str();
  app->add_option("--threads", c->threads, "Worker threads (0 = automatic)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "agreekit: synthesis, certification and simulation of linear "
      "k-dimensional agreement protocols"};
  app.require_subcommand(1);
  int rc = cli::kOk;

  cli::GraphConfig graph_cfg;
  auto* graph = app.add_subcommand("graph", "Generate a topology as JSON");
  graph->add_option("--model", graph_cfg.model,
                    "complete | ring_onedir | circulant | line | "
                    "erdos_renyi | barabasi_albert");
  graph->add_option("--n", graph_cfg.n, "Number of nodes");
  graph->add_option("--alpha", graph_cfg.alpha, "Neighborhood size")
      ->capture_default_str();
  graph->add_option("--p", graph_cfg.p, "Edge probability (erdos_renyi)")
      ->capture_default_str();
  graph->add_option("--m", graph_cfg.m, "Attachments (barabasi_albert)")
      ->capture_default_str();
  graph->add_option("--preset", graph_cfg.preset,
                    "fig2 | example3a | example3b (overrides --model)");
  graph->add_option("--name", graph_cfg.out_name, "Output file name")
      ->capture_default_str();
  add_common(graph, &graph_cfg.common);
  graph->callback([&] { rc = cli::cmd_graph(graph_cfg, std::cout); });

  cli::CheckConfig check_cfg;
  auto* check =
      app.add_subcommand("check", "Structural feasibility report for (G, k)");
  check->add_option("--graph", check_cfg.graph, "Graph JSON path or preset")
      ->required();
  check->add_option("--k", check_cfg.k, "Agreement dimension")->required();
  add_common(check, &check_cfg.common);
  check->callback([&] { rc = cli::cmd_check(check_cfg, std::cout); });

  cli::DesignConfig design_cfg;
  auto* design = app.add_subcommand(
      "design", "Synthesize and certify a protocol matrix for (G, W)");
  design->add_option("--graph", design_cfg.graph, "Graph JSON path or preset")
      ->required();
  design->add_option("--weights", design_cfg.weights, "Projection matrix path")
      ->required();
  design->add_option("--k", design_cfg.k, "Projection rank (detected if absent)");
  design->add_option("--objective", design_cfg.objective,
                     "feasible | spectral | numerical")
      ->capture_default_str();
  design->add_option("--max-iterations", design_cfg.max_iterations,
                     "Optimizer iteration budget")
      ->capture_default_str();
  design->add_option("--restarts", design_cfg.restarts,
                     "Multi-start count (spectral objective)")
      ->capture_default_str();
  add_common(design, &design_cfg.common);
  design->callback([&] { rc = cli::cmd_design(design_cfg, std::cout); });

  cli::SimulateConfig sim_cfg;
  auto* sim = app.add_subcommand("simulate", "Free run xdot = A x");
  sim->add_option("--matrix", sim_cfg.matrix, "Protocol matrix path")
      ->required();
  sim->add_option("--weights", sim_cfg.weights,
                  "Projection matrix path for error reporting");
  sim->add_option("--k", sim_cfg.k, "Projection rank");
  sim->add_option("--x0", sim_cfg.x0, "Initial state path");
  sim->add_option("--horizon", sim_cfg.horizon, "Final time")
      ->capture_default_str();
  sim->add_option("--dt", sim_cfg.dt, "Grid step")->capture_default_str();
  add_common(sim, &sim_cfg.common);
  sim->callback([&] { rc = cli::cmd_simulate(sim_cfg, std::cout); });

  cli::TrackConfig track_cfg;
  auto* track =
      app.add_subcommand("track", "Dynamic run xdot = A x + udot(t)");
  track->add_option("--matrix", track_cfg.matrix, "Protocol matrix path")
      ->required();
  track->add_option("--weights", track_cfg.weights, "Projection matrix path")
      ->required();
  track->add_option("--k", track_cfg.k, "Projection rank");
  track->add_option("--input", track_cfg.input,
                    "constant | ramp | sinusoid")
      ->capture_default_str();
  track->add_option("--amplitude", track_cfg.amplitude,
                    "Sup norm of the input derivative")
      ->capture_default_str();
  track->add_option("--ramp-time", track_cfg.ramp_time, "Ramp duration")
      ->capture_default_str();
  track->add_option("--frequency", track_cfg.frequency,
                    "Sinusoid frequency (rad/s)")
      ->capture_default_str();
  track->add_option("--u0", track_cfg.u0, "Base input vector path");
  track->add_option("--horizon", track_cfg.horizon, "Final time")
      ->capture_default_str();
  track->add_option("--dt", track_cfg.dt, "Grid step")->capture_default_str();
  add_common(track, &track_cfg.common);
  track->callback([&] { rc = cli::cmd_track(track_cfg, std::cout); });

  auto* experiment =
      app.add_subcommand("experiment", "Reproduction experiments");
  experiment->require_subcommand(1);

  cli::CommConfig comm_cfg;
  auto* comm = experiment->add_subcommand(
      "comm-complexity", "Transmission counting: rank-k vs k parallel runs");
  comm->add_option("--model", comm_cfg.model, "Topology model")
      ->capture_default_str();
  comm->add_option("--n", comm_cfg.n, "Nodes")->capture_default_str();
  comm->add_option("--k", comm_cfg.k, "Agreement dimension")
      ->capture_default_str();
  comm->add_option("--trials", comm_cfg.trials, "Independent graphs")
      ->capture_default_str();
  comm->add_option("--p", comm_cfg.p, "Edge probability (erdos_renyi)")
      ->capture_default_str();
  comm->add_option("--m", comm_cfg.m, "Attachments (barabasi_albert)")
      ->capture_default_str();
  comm->add_option("--prefix", comm_cfg.prefix, "Output file stem")
      ->capture_default_str();
  add_common(comm, &comm_cfg.common);
  comm->callback([&] { rc = cli::cmd_experiment_comm(comm_cfg, std::cout); });

  cli::RegressionConfig reg_cfg;
  auto* reg = experiment->add_subcommand(
      "regression", "Distributed least squares by agreement");
  reg->add_option("--H", reg_cfg.H, "Design matrix path (default built-in)");
  reg->add_option("--y", reg_cfg.y, "Observation vector path");
  reg->add_option("--graph", reg_cfg.graph, "Graph path or preset");
  reg->add_option("--n", reg_cfg.n, "Built-in dataset size")
      ->capture_default_str();
  add_common(reg, &reg_cfg.common);
  reg->callback(
      [&] { rc = cli::cmd_experiment_regression(reg_cfg, std::cout); });

  cli::FormationConfig form_cfg;
  auto* form = experiment->add_subcommand(
      "formation", "Planar formation runs under the 2-D lift");
  form->add_option("--mode", form_cfg.mode,
                   "consensus | orthogonal | oblique | all")
      ->capture_default_str();
  form->add_option("--graph", form_cfg.graph, "Graph path or preset");
  add_common(form, &form_cfg.common);
  form->callback(
      [&] { rc = cli::cmd_experiment_formation(form_cfg, std::cout); });

  std::string preset_name;
  cli::CommonOptions preset_common;
  auto* preset = app.add_subcommand(
      "preset", "Reproduction bundles: fig1 | fig5 | fig6 | example3");
  preset->add_option("name", preset_name, "Bundle name")->required();
  add_common(preset, &preset_common);
  preset->callback(
      [&] { rc = cli::cmd_preset(preset_name, preset_common, std::cout); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kInputError;
  }
  return rc;
}
