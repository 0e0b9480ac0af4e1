#include "driftgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace driftgraph {

ComponentLabels ComponentLabels::from_union_find(UnionFind& uf, std::size_t n) {
  ComponentLabels out;
  out.rep.resize(n);
  // Canonicalise: representative = smallest index in the component.
  std::vector<std::uint32_t> min_of_root(n, UINT32_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t r = uf.find(static_cast<std::uint32_t>(i));
    if (i < min_of_root[r]) min_of_root[r] = static_cast<std::uint32_t>(i);
  }
  out.comp_size.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t canon = min_of_root[uf.find(static_cast<std::uint32_t>(i))];
    out.rep[i] = canon;
    out.comp_size[canon]++;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t s = out.comp_size[i];
    if (s == 0) continue;
    out.num_components++;
    if (s > out.largest_size) {
      out.second_size = out.largest_size;
      out.second_rep = out.largest_rep;
      out.largest_size = s;
      out.largest_rep = static_cast<std::uint32_t>(i);
    } else if (s > out.second_size) {
      out.second_size = s;
      out.second_rep = static_cast<std::uint32_t>(i);
    }
  }
  return out;
}

ComponentLabels components_exact(const EdgeOracle& orc, const Snapshot& snap,
                                 std::size_t max_vertices) {
  const std::size_t n = snap.size();
  if (n > max_vertices)
    throw ResourceLimitError(
        "components_exact: snapshot exceeds the exact limit; use "
        "components_fast");
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (has_edge(orc, snap, i, j)) uf.unite(static_cast<std::uint32_t>(i),
                                              static_cast<std::uint32_t>(j));
  return ComponentLabels::from_union_find(uf, n);
}

CellIndex CellIndex::build(const Snapshot& snap, double cell_side) {
  if (!(cell_side > 0.0))
    throw std::invalid_argument("CellIndex: cell side must be > 0");
  const Domain& dom = snap.cloud->domain;
  CellIndex idx;
  idx.dim = dom.dim;
  idx.wraps = dom.wraps();
  idx.cell_side = cell_side;
  idx.cells_per_axis.assign(dom.dim, 1);
  idx.origin.assign(dom.dim, 0.0);
  idx.width.assign(dom.dim, cell_side);

  for (int a = 0; a < dom.dim; ++a) {
    double extent = dom.side;
    if (!idx.wraps) {
      // Box positions may have drifted outside [0, side]; grid their hull.
      double lo = 0.0, hi = dom.side;
      for (std::size_t i = 0; i < snap.size(); ++i) {
        const double c = snap.positions[i * dom.dim + a];
        lo = std::min(lo, c);
        hi = std::max(hi, c);
      }
      idx.origin[a] = lo;
      extent = std::max(hi - lo, cell_side);
    }
    idx.cells_per_axis[a] =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(extent / cell_side));
    // Cell width >= cell_side, so offset-1 neighborhoods cover every pair at
    // distance < cell_side.
    idx.width[a] = extent / static_cast<double>(idx.cells_per_axis[a]);
  }
  std::size_t total = 1;
  for (int a = 0; a < dom.dim; ++a)
    total *= static_cast<std::size_t>(idx.cells_per_axis[a]);
  idx.buckets.assign(total, {});
  for (std::size_t i = 0; i < snap.size(); ++i)
    idx.buckets[idx.cell_of(snap.position(i))].push_back(
        static_cast<std::uint32_t>(i));
  return idx;
}

std::size_t CellIndex::cell_of(std::span<const double> pos) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim; ++a) {
    auto c = static_cast<std::int64_t>((pos[a] - origin[a]) / width[a]);
    c = std::clamp<std::int64_t>(c, 0, cells_per_axis[a] - 1);
    flat = flat * static_cast<std::size_t>(cells_per_axis[a]) +
           static_cast<std::size_t>(c);
  }
  return flat;
}

namespace {

// Conservative integer threshold: pair uniforms below `p` always have raw
// bits below the returned value.
std::uint64_t conservative_bits(double p) {
  if (p >= 1.0) return UINT64_MAX;
  const double scaled = std::ceil(p * 0x1.0p64) + 4096.0;
  if (scaled >= 0x1.0p64) return UINT64_MAX;
  return static_cast<std::uint64_t>(scaled);
}

// Enumerate near pairs (distance < trunc) through the cell index and apply f.
template <typename F>
void for_near_pairs(const Snapshot& snap, const CellIndex& cells, double trunc,
                    F&& f) {
  const Domain& dom = snap.cloud->domain;
  const int d = dom.dim;
  std::vector<std::int64_t> coord(d, 0);
  std::vector<std::int64_t> ncoord(d, 0);
  const std::size_t ncells = cells.buckets.size();
  std::vector<std::size_t> neighbor_ids;
  int combos = 1;
  for (int a = 0; a < d; ++a) combos *= 3;
  for (std::size_t c = 0; c < ncells; ++c) {
    if (cells.buckets[c].empty()) continue;
    // decode multi-index of c
    std::size_t tmp = c;
    for (int a = d - 1; a >= 0; --a) {
      coord[a] = static_cast<std::int64_t>(
          tmp % static_cast<std::size_t>(cells.cells_per_axis[a]));
      tmp /= static_cast<std::size_t>(cells.cells_per_axis[a]);
    }

    neighbor_ids.clear();
    // all neighbor cells (including self) within offset 1 per axis
    for (int off = 0; off < combos; ++off) {
      int rem = off;
      bool valid = true;
      for (int a = 0; a < d; ++a) {
        const int o = rem % 3 - 1;
        rem /= 3;
        std::int64_t nc = coord[a] + o;
        if (cells.wraps) {
          const std::int64_t na = cells.cells_per_axis[a];
          nc = (nc % na + na) % na;
        } else if (nc < 0 || nc >= cells.cells_per_axis[a]) {
          valid = false;
          break;
        }
        ncoord[a] = nc;
      }
      if (!valid) continue;
      std::size_t flat = 0;
      for (int a = 0; a < d; ++a)
        flat = flat * static_cast<std::size_t>(cells.cells_per_axis[a]) +
               static_cast<std::size_t>(ncoord[a]);
      if (flat >= c) neighbor_ids.push_back(flat);
    }
    std::sort(neighbor_ids.begin(), neighbor_ids.end());
    neighbor_ids.erase(std::unique(neighbor_ids.begin(), neighbor_ids.end()),
                       neighbor_ids.end());

    for (const std::size_t nc : neighbor_ids) {
      const auto& bucket_a = cells.buckets[c];
      const auto& bucket_b = cells.buckets[nc];
      if (nc == c) {
        for (std::size_t x = 0; x < bucket_a.size(); ++x)
          for (std::size_t y = x + 1; y < bucket_a.size(); ++y) {
            const std::uint32_t i = bucket_a[x], j = bucket_a[y];
            if (distance(snap.position(i), snap.position(j), dom) < trunc)
              f(i, j);
          }
      } else {
        for (const std::uint32_t i : bucket_a)
          for (const std::uint32_t j : bucket_b)
            if (distance(snap.position(i), snap.position(j), dom) < trunc)
              f(i, j);
      }
    }
  }
}

}  // namespace

TailPairs collect_tail_pairs(const EdgeOracle& orc, const PointCloud& cloud,
                             std::int64_t epoch, double trunc) {
  if (!(trunc > 0.0))
    throw std::invalid_argument("collect_tail_pairs: trunc must be > 0");
  const std::size_t n = cloud.size();
  TailPairs out;
  out.epoch = epoch;
  out.trunc = trunc;
  if (n < 2) return out;

  // Rows run in ascending-id order so the canonical (lo, hi) of every scanned
  // pair is (row, column); the two PRF halves and the single-mark filter caps
  // are precomputed per vertex, leaving one mix per pair in the inner loop.
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  if (!std::is_sorted(cloud.ids.begin(), cloud.ids.end()))
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return cloud.ids[a] < cloud.ids[b];
    });

  // The pair cap p(trunc, u_i, u_j) is bounded by the single-mark cap of the
  // smaller mark in every variant, hence max(cap_i, cap_j) is conservative.
  std::vector<std::uint64_t> lo_mix(n), hi_mix(n), capbits(n);
  for (std::size_t s = 0; s < n; ++s) {
    const std::uint32_t v = order[s];
    lo_mix[s] = rng::prf(orc.lo_salt, cloud.ids[v]);
    hi_mix[s] = rng::prf(orc.hi_salt, cloud.ids[v]);
    capbits[s] = conservative_bits(
        kernels::connection_prob(trunc, cloud.marks[v], cloud.marks[v], orc.kernel));
  }

  const std::uint64_t epoch_gamma =
      (static_cast<std::uint64_t>(epoch) + 1) * rng::kGolden;
  const std::uint64_t* hi_ptr = hi_mix.data();
  const std::uint64_t* cap_ptr = capbits.data();
  constexpr std::size_t kBlock = 64;
  std::uint64_t bits_buf[kBlock];
  for (std::size_t si = 0; si < n; ++si) {
    const std::uint64_t row = lo_mix[si];
    const std::uint64_t row_cap = cap_ptr[si];
    const std::uint32_t vi = order[si];
    for (std::size_t base = si + 1; base < n; base += kBlock) {
      const std::size_t len = std::min(kBlock, n - base);
      // branch-free block so the compiler can vectorise the hash
      std::uint64_t any_hit = 0;
      for (std::size_t k = 0; k < len; ++k) {
        const std::uint64_t bits = rng::mix64((row ^ hi_ptr[base + k]) + epoch_gamma);
        bits_buf[k] = bits;
        const std::uint64_t cap =
            row_cap > cap_ptr[base + k] ? row_cap : cap_ptr[base + k];
        any_hit |= bits < cap ? 1ull : 0ull;
      }
      if (!any_hit) continue;
      for (std::size_t k = 0; k < len; ++k) {
        const std::uint64_t cap =
            row_cap > cap_ptr[base + k] ? row_cap : cap_ptr[base + k];
        if (bits_buf[k] >= cap) continue;
        // Exact confirmation against the pair cap.
        const std::uint32_t vj = order[base + k];
        const double p_trunc = kernels::connection_prob(
            trunc, cloud.marks[vi], cloud.marks[vj], orc.kernel);
        if (rng::to_unit_open(bits_buf[k]) < p_trunc) {
          out.pairs.emplace_back(std::min(vi, vj), std::max(vi, vj));
        }
      }
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

FastComponentsResult components_fast_with_tails(const EdgeOracle& orc,
                                                const Snapshot& snap,
                                                double trunc,
                                                const TailPairs& tails) {
  if (!(trunc > 0.0))
    throw std::invalid_argument("components_fast: trunc must be > 0");
  if (tails.epoch != snap.epoch)
    throw std::invalid_argument("components_fast: tail pairs from wrong epoch");
  const std::size_t n = snap.size();
  UnionFind uf(n);
  if (n >= 2) {
    const CellIndex cells = CellIndex::build(snap, trunc);
    for_near_pairs(snap, cells, trunc, [&](std::uint32_t i, std::uint32_t j) {
      if (has_edge(orc, snap, i, j)) uf.unite(i, j);
    });
    for (const auto& [i, j] : tails.pairs) {
      const double r = distance(snap.position(i), snap.position(j),
                                snap.cloud->domain);
      if (r >= trunc && has_edge(orc, snap, i, j)) uf.unite(i, j);
    }
  }
  FastComponentsResult result;
  result.labels = ComponentLabels::from_union_find(uf, n);
  result.missed_edge_bound = 0.0;
  return result;
}

FastComponentsResult components_fast(const EdgeOracle& orc, const Snapshot& snap,
                                     double trunc, bool include_tails) {
  if (include_tails) {
    const TailPairs tails =
        collect_tail_pairs(orc, *snap.cloud, snap.epoch, trunc);
    return components_fast_with_tails(orc, snap, trunc, tails);
  }
  // Near pairs only; report the stationary estimate of skipped long edges.
  const std::size_t n = snap.size();
  UnionFind uf(n);
  if (n >= 2) {
    const CellIndex cells = CellIndex::build(snap, trunc);
    for_near_pairs(snap, cells, trunc, [&](std::uint32_t i, std::uint32_t j) {
      if (has_edge(orc, snap, i, j)) uf.unite(i, j);
    });
  }
  FastComponentsResult result;
  result.labels = ComponentLabels::from_union_find(uf, n);
  const PointCloud& cloud = *snap.cloud;
  result.missed_edge_bound =
      0.5 * cloud.lambda * cloud.lambda * cloud.domain.volume() *
      kernels::mean_tail_degree_integral(orc.kernel, trunc);
  return result;
}

double default_trunc_radius(const EdgeOracle& orc, const Snapshot& snap,
                            double quantile, double min_radius) {
  const std::size_t n = snap.size();
  if (n < 2) return min_radius;
  const EpochThresholds table = epoch_thresholds(orc, snap, n);
  std::vector<double> max_per_vertex(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = table.at(i, j);
      max_per_vertex[i] = std::max(max_per_vertex[i], r);
      max_per_vertex[j] = std::max(max_per_vertex[j], r);
    }
  std::sort(max_per_vertex.begin(), max_per_vertex.end());
  const std::size_t k = std::min<std::size_t>(
      n - 1, static_cast<std::size_t>(quantile * static_cast<double>(n)));
  return std::max(min_radius, max_per_vertex[k]);
}

DegreeStats degree_stats(const EdgeOracle& orc, const Snapshot& snap) {
  const std::size_t n = snap.size();
  DegreeStats out;
  if (n == 0) return out;
  std::vector<std::uint32_t> degree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (has_edge(orc, snap, i, j)) {
        degree[i]++;
        degree[j]++;
        out.edges++;
      }
  const std::uint32_t maxdeg = *std::max_element(degree.begin(), degree.end());
  out.histogram.assign(maxdeg + 1, 0);
  for (const std::uint32_t d : degree) out.histogram[d]++;
  out.mean = 2.0 * static_cast<double>(out.edges) / static_cast<double>(n);
  return out;
}

}  // namespace driftgraph
