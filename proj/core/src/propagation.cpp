#include "driftgraph/propagation.hpp"

#include <algorithm>
#include <cmath>

namespace driftgraph {

namespace {

void check_grid(const std::vector<double>& t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("propagation: empty time grid");
  if (t_grid.front() != 0.0)
    throw std::invalid_argument("propagation: grid must start at 0");
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw std::invalid_argument("propagation: grid must be sorted");
  for (double t : t_grid)
    if (!is_dyadic_time(t))
      throw std::invalid_argument("propagation: grid times must be dyadic");
}

// Component labels for one snapshot under the configured path, reusing the
// epoch's tail pairs when the cell-list path is active.
ComponentLabels labels_for(const EdgeOracle& orc, const Snapshot& snap,
                           const PropagationOptions& opts,
                           std::optional<TailPairs>& tail_cache) {
  if (opts.trunc > 0.0) {
    if (!tail_cache || tail_cache->epoch != snap.epoch ||
        tail_cache->trunc != opts.trunc)
      tail_cache = collect_tail_pairs(orc, *snap.cloud, snap.epoch, opts.trunc);
    return components_fast_with_tails(orc, snap, opts.trunc, *tail_cache).labels;
  }
  return components_exact(orc, snap, opts.exact_limit);
}

std::size_t origin_index(const PointCloud& cloud) {
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (cloud.ids[i] == 0) return i;
  throw std::invalid_argument("propagation: cloud has no origin vertex (id 0)");
}

}  // namespace

BroadcastTrace run_broadcast(const PointCloud& cloud, const EdgeOracle& orc,
                             const std::vector<double>& t_grid,
                             const PropagationOptions& opts) {
  if (!cloud.palm)
    throw std::invalid_argument("run_broadcast: palm cloud required");
  if (cloud.domain.kind != DomainKind::Torus)
    throw std::invalid_argument("run_broadcast: torus domain required");
  check_grid(t_grid);

  const std::size_t n = cloud.size();
  const std::size_t origin = origin_index(cloud);

  BroadcastTrace trace;
  trace.n_vertices = n;

  Evolver ev(cloud);
  std::optional<TailPairs> tail_cache;
  std::vector<std::uint8_t> informed(n, 0);
  std::vector<std::uint8_t> label_informed;
  std::size_t informed_count = 0;

  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    const Snapshot snap = ev.at(t_grid[k]);
    const ComponentLabels labels = labels_for(orc, snap, opts, tail_cache);

    label_informed.assign(n, 0);
    if (k == 0) {
      label_informed[labels.rep[origin]] = 1;
    } else {
      for (std::size_t i = 0; i < n; ++i)
        if (informed[i]) label_informed[labels.rep[i]] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!informed[i] && label_informed[labels.rep[i]]) {
        informed[i] = 1;
        ++informed_count;
      }
    }

    trace.times.push_back(t_grid[k]);
    trace.informed.push_back(informed_count);
    if (!trace.t_bc && informed_count == n) {
      trace.t_bc = t_grid[k];
      if (opts.stop_at_target) break;
    }
  }
  return trace;
}

PercTrace run_percolation_proxy(const PointCloud& cloud, const EdgeOracle& orc,
                                const std::vector<double>& t_grid, double rho,
                                const PropagationOptions& opts) {
  if (!cloud.palm)
    throw std::invalid_argument("run_percolation_proxy: palm cloud required");
  if (cloud.domain.kind != DomainKind::Box)
    throw std::invalid_argument(
        "run_percolation_proxy: box domain required (the proxy approximates "
        "free space)");
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("run_percolation_proxy: rho must be in (0,1)");
  check_grid(t_grid);

  const std::size_t n = cloud.size();
  const std::size_t origin = origin_index(cloud);

  PercTrace trace;
  trace.n_vertices = n;
  const auto target =
      static_cast<std::size_t>(std::ceil(rho * static_cast<double>(n)));

  Evolver ev(cloud);
  std::optional<TailPairs> tail_cache;
  for (const double t : t_grid) {
    const Snapshot snap = ev.at(t);
    const ComponentLabels labels = labels_for(orc, snap, opts, tail_cache);
    const std::size_t oc = labels.size_of(origin);
    trace.times.push_back(t);
    trace.origin_comp.push_back(oc);
    trace.giant.push_back(labels.largest_size);
    if (!trace.t_perc && oc == labels.largest_size && oc >= target) {
      trace.t_perc = t;
      if (opts.stop_at_target) break;
    }
  }
  return trace;
}

}  // namespace driftgraph
