#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"

using namespace driftgraph;

int main(int argc, char** argv) {
  CLI::App app{
      "driftgraph: mobile geometric scale-free random graph simulator.\n"
      "Vertices form a marked Poisson cloud and diffuse as Brownian motions;\n"
      "edges are redrawn once per unit-time epoch from per-pair uniforms.\n"
      "Subcommands run seeded experiment suites and emit CSV/JSONL for "
      "plotting.\n"
      "\n"
      "Config file: flat [section] tables of key = value lines. Defaults:\n"
      "  [domain] kind=torus dim=1 volume=1024\n"
      "  [model]  lambda=1 palm=true theta=0.55 eps_theta=0.1 (origin_mark "
      "unset)\n"
      "  [kernel] variant=soft_boolean gamma=0.8 delta=1.5 alpha=1 kappa1=1 "
      "beta=1\n"
      "  [time]   dt_obs=0.25 t_max=64        (dt must be dyadic, k*2^-26)\n"
      "  [run]    seed=1 replicas=1 workers=0 out=out trunc=0 (0: exact/auto)\n"
      "  [broadcast] volumes=256,512,1024 eps_norm=0.5\n"
      "  [perc]      rho=0.25\n"
      "  [density]   cube=128 ell=16 alpha=0.5 steps=64 t_scale=0 (0: steps)\n"
      "  [spread]    k0=4096 levels=3 factor=4 b=0.1 replicas=100\n"
      "  [connector] u,v=0.05,0.1,0.2 r=2,5,10 replicas=1000 box_side=64\n"
      "  [membership] k0=64 levels=3 replicas=200\n"
      "  [convergence] dts=1,0.5,0.25,0.125\n"
      "See configs/*.ini for annotated experiment setups."};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicas;
  std::optional<int> workers;
  std::optional<std::string> out_dir;

  app.add_option("--config", config_path, "Run configuration file (key = value tables)");
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--replicas", replicas, "Replica count (overrides the config)");
  app.add_option("--workers", workers,
                 "Worker threads; throughput only, outputs are byte-identical "
                 "for any value");
  app.add_option("--out", out_dir,
                 "Output directory (overrides config and DRIFTGRAPH_OUT)");

  auto* sample = app.add_subcommand("sample", "Sample a marked Poisson cloud to JSONL");
  auto* evolve = app.add_subcommand(
      "evolve", "Evolve a cloud on the observation grid; dump snapshots and "
                "component summaries");
  auto* broadcast = app.add_subcommand(
      "broadcast-scaling", "Broadcast-time study across torus volumes");
  auto* perc = app.add_subcommand(
      "perc-tail", "Percolation-time proxy survival curve on a box");
  auto* diagnose = app.add_subcommand(
      "diagnose", "Density, spread-subgraph, two-connector and membership "
                  "diagnostics");
  auto* convergence = app.add_subcommand(
      "convergence", "Broadcast-time sensitivity to the observation grid");

  for (CLI::App* sub : {sample, evolve, broadcast, perc, diagnose, convergence})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    if (!config_path.empty())
      cfg = RunConfig::from_doc(ConfigDoc::parse_file(config_path));
    if (seed) cfg.seed = *seed;
    if (replicas) cfg.replicas = *replicas;
    if (workers) cfg.workers = *workers;
    if (out_dir) {
      cfg.out_dir = *out_dir;
    } else if (config_path.empty() || cfg.out_dir == "out") {
      if (const char* env = std::getenv("DRIFTGRAPH_OUT")) cfg.out_dir = env;
    }
    for (const std::string& w : cfg.validate())
      std::cerr << "warning: " << w << '\n';
  } catch (const std::exception& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  }

  if (sample->parsed()) return cli::cmd_sample(cfg);
  if (evolve->parsed()) return cli::cmd_evolve(cfg);
  if (broadcast->parsed()) return cli::cmd_broadcast_scaling(cfg);
  if (perc->parsed()) return cli::cmd_perc_tail(cfg);
  if (diagnose->parsed()) return cli::cmd_diagnose(cfg);
  if (convergence->parsed()) return cli::cmd_convergence(cfg);
  return 1;
}
