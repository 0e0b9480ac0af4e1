#pragma once

// Information broadcast on the torus and the percolation-time proxy on boxes.

#include <optional>
#include <vector>

#include "driftgraph/graph.hpp"

namespace driftgraph {

struct BroadcastTrace {
  std::vector<double> times;
  std::vector<std::size_t> informed;  // informed-set size per grid time
  std::size_t n_vertices = 0;
  std::optional<double> t_bc;  // first grid time with informed == N
};

struct PropagationOptions {
  // trunc > 0 selects the cell-list path (exact, tail pairs included);
  // trunc == 0 queries all pairs directly.
  double trunc = 0.0;
  std::size_t exact_limit = 8192;
  bool stop_at_target = true;  // stop evolving once the target event fired
};

// Flood information from the origin vertex: the informed set starts as the
// origin's component at the first grid time and absorbs every component it
// intersects at each later grid time. Requires a palm cloud on a torus and a
// sorted dyadic grid starting at 0.
BroadcastTrace run_broadcast(const PointCloud& cloud, const EdgeOracle& orc,
                             const std::vector<double>& t_grid,
                             const PropagationOptions& opts = {});

struct PercTrace {
  std::vector<double> times;
  std::vector<std::size_t> origin_comp;  // size of the origin's component
  std::vector<std::size_t> giant;        // size of the largest component
  std::size_t n_vertices = 0;
  std::optional<double> t_perc;  // first grid time: origin comp is the
                                 // largest and has size >= rho * N
};

// Finite-box stand-in for the time at which the origin joins the unbounded
// cluster: the origin's component must be the largest one and hold at least
// rho * N vertices. Requires a palm cloud on a box domain.
PercTrace run_percolation_proxy(const PointCloud& cloud, const EdgeOracle& orc,
                                const std::vector<double>& t_grid, double rho,
                                const PropagationOptions& opts = {});

}  // namespace driftgraph
