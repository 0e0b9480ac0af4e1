#pragma once

// Experiment runner commands. Each command reads a RunConfig, writes CSV/JSONL
// under cfg.out_dir and returns a process exit code (0 ok, 2 invalid config,
// 3 resource limit). Replicas fan out over a worker pool; outputs are merged
// in replica order so the worker count never changes a byte.

#include <functional>
#include <string>
#include <vector>

#include "driftgraph/config.hpp"
#include "driftgraph/dynamics.hpp"

namespace driftgraph::cli {

int cmd_sample(const RunConfig& cfg);
int cmd_evolve(const RunConfig& cfg);
int cmd_broadcast_scaling(const RunConfig& cfg);
int cmd_perc_tail(const RunConfig& cfg);
int cmd_diagnose(const RunConfig& cfg);
int cmd_convergence(const RunConfig& cfg);

// Exit-code mapping shared by main() and the command implementations.
int run_guarded(const std::function<void()>& body);

// Observation grid {0, dt, 2dt, ..., <= t_max}.
std::vector<double> make_grid(double dt, double t_max);

// Truncation radius for the cell-list path: cfg.trunc when set; otherwise the
// per-vertex threshold quantile policy for moderate N, or (for large N) the
// smallest radius keeping the expected long-edge pair count manageable.
double effective_trunc(const RunConfig& cfg, const PointCloud& cloud,
                       const EdgeOracle& orc);

}  // namespace driftgraph::cli
