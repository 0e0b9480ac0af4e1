#include "driftgraph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace driftgraph::analysis {

DensityReport density_check(const std::vector<Snapshot>& snapshots,
                            double cube_side, double ell, double alpha,
                            const MarkLayers& layers) {
  if (snapshots.empty())
    throw std::invalid_argument("density_check: no snapshots");
  const PointCloud& cloud = *snapshots.front().cloud;
  const int d = cloud.domain.dim;
  if (!(cube_side > 0.0) || !(ell > 0.0))
    throw std::invalid_argument("density_check: cube and ell must be > 0");
  const double ratio = cube_side / ell;
  const auto cells_per_axis = static_cast<std::int64_t>(std::llround(ratio));
  if (cells_per_axis < 1 || std::fabs(ratio - static_cast<double>(cells_per_axis)) > 1e-9)
    throw std::invalid_argument("density_check: ell must divide the cube side");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("density_check: alpha must be in [0,1]");

  DensityReport report;
  report.cube_side = cube_side;
  report.ell = ell;
  report.alpha = alpha;
  report.lambda = cloud.lambda;

  const int n_layers = layers.k_max + 2;  // k = -1 .. k_max
  report.layer_threshold.resize(n_layers);
  const double cell_volume = std::pow(ell, d);
  for (int k = -1; k <= layers.k_max; ++k)
    report.layer_threshold[k + 1] =
        (1.0 - alpha) * cloud.lambda * layers.width(k) * cell_volume;

  std::size_t n_cells = 1;
  for (int a = 0; a < d; ++a) n_cells *= static_cast<std::size_t>(cells_per_axis);

  std::vector<std::uint32_t> counts(n_cells * static_cast<std::size_t>(n_layers));
  std::size_t passes = 0;
  for (const Snapshot& snap : snapshots) {
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < snap.size(); ++i) {
      const auto pos = snap.position(i);
      std::size_t cell = 0;
      bool inside = true;
      for (int a = 0; a < d; ++a) {
        if (pos[a] < 0.0 || pos[a] >= cube_side) {
          inside = false;
          break;
        }
        auto c = static_cast<std::int64_t>(pos[a] / ell);
        c = std::min(c, cells_per_axis - 1);
        cell = cell * static_cast<std::size_t>(cells_per_axis) +
               static_cast<std::size_t>(c);
      }
      if (!inside) continue;
      const auto k = layers.layer_of(cloud.marks[i]);
      if (!k) continue;  // below the bottom layer (or boundary hit)
      counts[cell * n_layers + static_cast<std::size_t>(*k + 1)]++;
    }
    bool ok = true;
    for (std::size_t cell = 0; cell < n_cells && ok; ++cell)
      for (int k = 0; k < n_layers; ++k)
        if (static_cast<double>(counts[cell * n_layers + k]) <
            report.layer_threshold[k]) {
          ok = false;
          break;
        }
    report.times.push_back(snap.time);
    report.pass.push_back(ok ? 1 : 0);
    passes += ok;
  }
  report.dense_fraction =
      static_cast<double>(passes) / static_cast<double>(snapshots.size());
  return report;
}

// ---------------------------------------------------------------------------

namespace {

// Snake (boustrophedon) enumeration of {0..n-1}^d: consecutive boxes are
// always adjacent.
std::vector<std::size_t> snake_order(std::int64_t n, int d) {
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) total *= static_cast<std::size_t>(n);
  std::vector<std::size_t> order(total);
  std::vector<std::int64_t> v(d, 0);
  std::vector<int> dir(d, 1);
  for (std::size_t step = 0; step < total; ++step) {
    std::size_t flat = 0;
    for (int a = d - 1; a >= 0; --a)
      flat = flat * static_cast<std::size_t>(n) + static_cast<std::size_t>(v[a]);
    order[step] = flat;
    // advance axis 0; on overflow flip direction and carry to the next axis
    for (int a = 0; a < d; ++a) {
      v[a] += dir[a];
      if (v[a] >= 0 && v[a] < n) break;
      v[a] -= dir[a];
      dir[a] = -dir[a];
    }
  }
  return order;
}

struct BoxGrid {
  // per level k: representative snapshot index per box (-1 if empty box)
  std::vector<std::vector<std::int32_t>> rep;
  // per level k: connector candidates per box, sorted by (mark, id)
  std::vector<std::vector<std::vector<std::uint32_t>>> connectors;
  std::vector<std::int64_t> boxes_per_axis;  // per level
};

}  // namespace

SpreadSubgraph build_spread_subgraph(const Snapshot& snap, const EdgeOracle& orc,
                                     double cube_volume,
                                     const SpreadParams& params) {
  const PointCloud& cloud = *snap.cloud;
  const int d = cloud.domain.dim;
  const kernels::KernelParams& kp = orc.kernel;
  if (!kp.ultrasmall())
    throw std::invalid_argument(
        "build_spread_subgraph: requires gamma > delta/(delta+1)");
  if (!(params.eps_theta > 0.0 && params.eps_theta * std::log(2.0) < 1.0))
    throw std::invalid_argument(
        "build_spread_subgraph: eps_theta must lie in (0, 1/log 2)");
  if (!(cube_volume >= 1.0))
    throw std::invalid_argument("build_spread_subgraph: cube volume too small");
  const double side = std::pow(cube_volume, 1.0 / d);
  if (side > cloud.domain.side + 1e-9)
    throw std::invalid_argument(
        "build_spread_subgraph: cube does not fit in the domain");

  const MarkLayers layers(params.theta, params.eps_theta, cube_volume, d);
  const int k_p = layers.k_max;
  const auto n_p = static_cast<std::int64_t>(
      std::floor(std::pow(cube_volume, (1.0 - params.eps_theta * std::log(2.0)) / d)));
  if (n_p < 1)
    throw std::invalid_argument("build_spread_subgraph: cube too small");

  SpreadSubgraph g;
  g.cube_volume = cube_volume;
  g.k_p = k_p;
  g.n_p = n_p;
  g.covered_side = static_cast<double>(n_p) * std::ldexp(1.0, k_p);

  // --- bucket vertices into boxes --------------------------------------
  BoxGrid grid;
  grid.rep.resize(k_p + 1);
  grid.connectors.resize(k_p + 1);
  grid.boxes_per_axis.resize(k_p + 1);
  for (int k = 0; k <= k_p; ++k) {
    grid.boxes_per_axis[k] = n_p << (k_p - k);
    std::size_t total = 1;
    for (int a = 0; a < d; ++a)
      total *= static_cast<std::size_t>(grid.boxes_per_axis[k]);
    grid.rep[k].assign(total, -1);
    grid.connectors[k].resize(total);
    g.total_boxes += total;
  }

  auto box_of = [&](std::span<const double> pos, int k,
                    std::size_t& flat) -> bool {
    const double box_side = std::ldexp(1.0, k);
    flat = 0;
    for (int a = 0; a < d; ++a) {
      if (pos[a] < 0.0 || pos[a] >= g.covered_side) return false;
      const auto c = static_cast<std::int64_t>(pos[a] / box_side);
      if (c >= grid.boxes_per_axis[k]) return false;
      flat = flat * static_cast<std::size_t>(grid.boxes_per_axis[k]) +
             static_cast<std::size_t>(c);
    }
    return true;
  };

  // Connector candidates scanned in (mark, id) order; presorting the vertex
  // indices once keeps every bucket sorted.
  std::vector<std::uint32_t> by_mark(snap.size());
  std::iota(by_mark.begin(), by_mark.end(), 0u);
  std::sort(by_mark.begin(), by_mark.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (cloud.marks[a] != cloud.marks[b]) return cloud.marks[a] < cloud.marks[b];
    return cloud.ids[a] < cloud.ids[b];
  });

  for (const std::uint32_t i : by_mark) {
    const double mark = cloud.marks[i];
    const auto pos = snap.position(i);
    if (mark > 0.5) {
      std::size_t flat;
      for (int k = 0; k <= k_p; ++k)
        if (box_of(pos, k, flat)) grid.connectors[k][flat].push_back(i);
      continue;
    }
    const auto layer = layers.layer_of(mark);
    if (!layer || *layer < 0) continue;
    const int k = *layer;
    std::size_t flat;
    if (!box_of(pos, k, flat)) continue;
    // by_mark order: the first hit is the smallest-mark vertex of the box
    if (grid.rep[k][flat] < 0) grid.rep[k][flat] = static_cast<std::int32_t>(i);
  }

  // --- linking ----------------------------------------------------------
  std::vector<std::uint8_t> used_connector(snap.size(), 0);
  auto link_via_connector = [&](std::uint32_t a, std::uint32_t b, int k,
                                std::size_t box_flat,
                                std::optional<SpreadLink>& out) -> bool {
    for (const std::uint32_t z : grid.connectors[k][box_flat]) {
      if (used_connector[z]) continue;
      if (has_edge(orc, snap, z, a) && has_edge(orc, snap, z, b)) {
        used_connector[z] = 1;
        out = SpreadLink{a, z, b, k};
        return true;
      }
    }
    return false;
  };

  std::vector<std::vector<std::uint8_t>> good(k_p + 1);
  for (int k = 0; k <= k_p; ++k) good[k].assign(grid.rep[k].size(), 0);

  // top level: snake chain
  const std::vector<std::size_t> order = snake_order(n_p, d);
  bool chain_alive = grid.rep[k_p][order[0]] >= 0;
  good[k_p][order[0]] = chain_alive ? 1 : 0;
  for (std::size_t i = 1; i < order.size() && chain_alive; ++i) {
    const std::size_t cur = order[i], prev = order[i - 1];
    chain_alive = false;
    if (grid.rep[k_p][cur] >= 0) {
      std::optional<SpreadLink> link;
      if (link_via_connector(static_cast<std::uint32_t>(grid.rep[k_p][cur]),
                             static_cast<std::uint32_t>(grid.rep[k_p][prev]), k_p,
                             cur, link)) {
        good[k_p][cur] = 1;
        g.links.push_back(*link);
        chain_alive = true;
      }
    }
  }

  // descend the 2^d-ary tree
  for (int k = k_p - 1; k >= 0; --k) {
    const std::int64_t npa = grid.boxes_per_axis[k];
    const std::int64_t parent_axis = grid.boxes_per_axis[k + 1];
    const std::size_t total = grid.rep[k].size();
    std::vector<std::int64_t> v(d, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      // decode multi-index (row-major, axis 0 outermost)
      std::size_t tmp = flat;
      for (int a = d - 1; a >= 0; --a) {
        v[a] = static_cast<std::int64_t>(tmp % static_cast<std::size_t>(npa));
        tmp /= static_cast<std::size_t>(npa);
      }
      if (grid.rep[k][flat] < 0) continue;
      std::size_t parent_flat = 0;
      for (int a = 0; a < d; ++a)
        parent_flat = parent_flat * static_cast<std::size_t>(parent_axis) +
                      static_cast<std::size_t>(v[a] / 2);
      if (!good[k + 1][parent_flat]) continue;
      std::optional<SpreadLink> link;
      if (link_via_connector(static_cast<std::uint32_t>(grid.rep[k][flat]),
                             static_cast<std::uint32_t>(grid.rep[k + 1][parent_flat]),
                             k, flat, link)) {
        good[k][flat] = 1;
        g.links.push_back(*link);
      }
    }
  }

  // --- collect and evaluate the two clauses ------------------------------
  bool all_top_good = true;
  for (std::size_t flat = 0; flat < grid.rep[k_p].size(); ++flat) {
    if (good[k_p][flat])
      g.bottom.push_back(static_cast<std::uint32_t>(grid.rep[k_p][flat]));
    else
      all_top_good = false;
  }
  for (int k = 0; k <= k_p; ++k)
    for (std::size_t flat = 0; flat < grid.rep[k].size(); ++flat)
      if (good[k][flat]) {
        g.good_boxes++;
        g.distinguished.push_back(static_cast<std::uint32_t>(grid.rep[k][flat]));
      }

  g.clause_vertex_count =
      static_cast<double>(g.distinguished.size()) >= params.b * cube_volume;
  g.clause_bottom_cover = all_top_good;
  g.success = g.clause_vertex_count && g.clause_bottom_cover;
  return g;
}

bool verify_spread_subgraph(const Snapshot& snap, const EdgeOracle& orc,
                            const SpreadSubgraph& g, const SpreadParams& params) {
  const PointCloud& cloud = *snap.cloud;
  const MarkLayers layers(params.theta, params.eps_theta, g.cube_volume,
                          cloud.domain.dim);
  // connectors: mark window and adjacency to both endpoints
  for (const SpreadLink& link : g.links) {
    if (!(cloud.marks[link.connector] > 0.5)) return false;
    if (!has_edge(orc, snap, link.connector, link.child_vertex)) return false;
    if (!has_edge(orc, snap, link.connector, link.parent_vertex)) return false;
  }
  // connectors claimed at most once
  {
    std::vector<std::uint32_t> conns;
    for (const SpreadLink& link : g.links) conns.push_back(link.connector);
    std::sort(conns.begin(), conns.end());
    if (std::adjacent_find(conns.begin(), conns.end()) != conns.end())
      return false;
  }
  // distinguished marks lie below 1/2 and inside some layer window
  for (const std::uint32_t i : g.distinguished) {
    const auto k = layers.layer_of(cloud.marks[i]);
    if (!k || *k < 0 || *k > layers.k_max) return false;
  }
  // bottom vertices carry the smallest-mark window
  const double bottom_cap =
      0.5 * std::exp(-g.k_p * params.theta * cloud.domain.dim);
  for (const std::uint32_t i : g.bottom)
    if (!(cloud.marks[i] < bottom_cap)) return false;
  // the link tree connects every distinguished vertex
  if (!g.distinguished.empty()) {
    UnionFind uf(snap.size());
    for (const SpreadLink& link : g.links) {
      uf.unite(link.child_vertex, link.connector);
      uf.unite(link.connector, link.parent_vertex);
    }
    const std::uint32_t root = uf.find(g.distinguished.front());
    for (const std::uint32_t i : g.distinguished)
      if (uf.find(i) != root) return false;
  }
  // clauses
  const bool clause_a =
      static_cast<double>(g.distinguished.size()) >= params.b * g.cube_volume;
  std::size_t top_boxes = 1;
  for (int a = 0; a < cloud.domain.dim; ++a)
    top_boxes *= static_cast<std::size_t>(g.n_p);
  const bool clause_b = g.bottom.size() == top_boxes;
  if (g.success != (clause_a && clause_b)) return false;
  return true;
}

// ---------------------------------------------------------------------------

TwoConnectorResult two_connector_count(const EdgeOracle& orc,
                                       const Snapshot& snap, std::size_t i,
                                       std::size_t j) {
  const PointCloud& cloud = *snap.cloud;
  if (i == j) throw std::invalid_argument("two_connector_count: i == j");
  const double u = cloud.marks[i], v = cloud.marks[j];
  if (!(u < 0.5 && v < 0.5))
    throw std::invalid_argument(
        "two_connector_count: both marks must be below 1/2");
  TwoConnectorResult out;
  for (std::size_t z = 0; z < snap.size(); ++z) {
    if (z == i || z == j || !(cloud.marks[z] > 0.5)) continue;
    if (has_edge(orc, snap, z, i) && has_edge(orc, snap, z, j)) out.count++;
  }
  const kernels::KernelParams& kp = orc.kernel;
  const double r = distance(snap.position(i), snap.position(j), cloud.domain);
  const double reach = std::pow(u, -kp.gamma / kp.dim);
  out.bracket = std::pow(u, -kp.gamma) *
                std::min(1.0, std::pow(v, -kp.gamma * kp.delta) *
                                  std::pow(r + reach, -kp.dim * kp.delta));
  return out;
}

MembershipResult membership_experiment(const Snapshot& snap1,
                                       const Snapshot& snap2,
                                       const EdgeOracle& orc,
                                       const SpreadSubgraph& g1,
                                       const SpreadSubgraph& g2,
                                       std::size_t probe_index,
                                       std::size_t exact_limit) {
  if (!g1.success || !g2.success)
    throw std::invalid_argument("membership_experiment: spread subgraphs must "
                                "have succeeded");
  if (snap1.epoch == snap2.epoch)
    throw std::invalid_argument(
        "membership_experiment: snapshots must lie in different epochs");
  const auto probe_pos = snap1.position(probe_index);
  const double side = std::pow(g1.cube_volume, 1.0 / snap1.cloud->domain.dim);
  for (const double c : probe_pos)
    if (c < 0.0 || c > side)
      throw std::invalid_argument("membership_experiment: probe outside cube");

  const ComponentLabels l1 = components_exact(orc, snap1, exact_limit);
  const ComponentLabels l2 = components_exact(orc, snap2, exact_limit);
  const std::uint32_t rep1 = l1.rep[g1.distinguished.front()];
  const std::uint32_t rep2 = l2.rep[g2.distinguished.front()];

  MembershipResult out;
  out.probe_in_component = l1.rep[probe_index] == rep1;
  for (std::size_t x = 0; x < snap1.size(); ++x)
    if (l1.rep[x] == rep1 && l2.rep[x] == rep2) {
      out.shared_vertex_exists = true;
      break;
    }
  return out;
}

// ---------------------------------------------------------------------------

PoissonChernoff chernoff_poisson(double lambda, double eps) {
  if (!(lambda > 0.0)) throw std::invalid_argument("chernoff_poisson: lambda > 0");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("chernoff_poisson: eps must be in (0,1)");
  return {std::exp(-lambda * eps * eps / 2.0),
          std::exp(-lambda * eps * eps / 4.0)};
}

double chernoff_binomial(double n, double p, double a) {
  if (!(n >= 1.0) || !(p > 0.0 && p < 1.0) || !(a > 0.0))
    throw std::invalid_argument("chernoff_binomial: need n >= 1, p in (0,1), a > 0");
  const double pn = p * n;
  return std::exp(a - (pn + a) * std::log(1.0 + a / pn));
}

}  // namespace driftgraph::analysis
