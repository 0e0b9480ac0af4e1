#pragma once

// Materialising the graph at a snapshot: neighbor enumeration (exact and
// cell-accelerated), connected components, degree statistics.

#include <cstdint>
#include <optional>
#include <vector>

#include "driftgraph/dynamics.hpp"

namespace driftgraph {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
  }
  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // union by size; equal sizes keep the smaller index as root
    if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a)) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) c += parent_[i] == i;
    return c;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

// Component labelling with canonical representatives (the smallest vertex
// index of each component), so labels are reproducible whatever the union
// order was.
struct ComponentLabels {
  std::vector<std::uint32_t> rep;  // index -> canonical representative index
  std::size_t num_components = 0;
  std::uint32_t largest_rep = 0;
  std::size_t largest_size = 0;
  std::uint32_t second_rep = 0;
  std::size_t second_size = 0;

  bool same(std::size_t i, std::size_t j) const { return rep[i] == rep[j]; }
  std::size_t size_of(std::size_t i) const { return comp_size[rep[i]]; }

  std::vector<std::uint32_t> comp_size;  // indexed by representative

  static ComponentLabels from_union_find(UnionFind& uf, std::size_t n);
};

// Uniform bucketing of the snapshot's positions, for neighbor pruning.
struct CellIndex {
  double cell_side = 1.0;
  int dim = 1;
  std::vector<std::int64_t> cells_per_axis;
  std::vector<double> origin;  // lower corner of the grid
  std::vector<double> width;   // actual cell width per axis (>= cell_side)
  bool wraps = false;
  std::vector<std::vector<std::uint32_t>> buckets;

  static CellIndex build(const Snapshot& snap, double cell_side);
  std::size_t cell_of(std::span<const double> pos) const;
};

// Exact components: every pair is queried through the oracle.
ComponentLabels components_exact(const EdgeOracle& orc, const Snapshot& snap,
                                 std::size_t max_vertices = 8192);

// Pairs whose threshold radius this epoch reaches at least `trunc`; such
// pairs can be edges at any distance >= trunc, so a truncated neighbor search
// must test them explicitly. Positions never enter: the set depends only on
// marks, ids and the epoch, and can be reused for every snapshot inside one
// epoch. Complexity O(N^2) cheap PRF probes.
struct TailPairs {
  std::int64_t epoch = 0;
  double trunc = 0.0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
};
TailPairs collect_tail_pairs(const EdgeOracle& orc, const PointCloud& cloud,
                             std::int64_t epoch, double trunc);

struct FastComponentsResult {
  ComponentLabels labels;
  double missed_edge_bound = 0.0;  // 0 when the tail pass ran
};

// Cell-list components: near pairs (distance < trunc) via the cell index plus
// the given tail pairs. With the tail pass included the result is exact and
// equals components_exact.
FastComponentsResult components_fast_with_tails(const EdgeOracle& orc,
                                                const Snapshot& snap,
                                                double trunc,
                                                const TailPairs& tails);

// Convenience wrapper: collects tail pairs itself (include_tails=true) or
// skips them and reports the expected number of missed long edges instead.
FastComponentsResult components_fast(const EdgeOracle& orc, const Snapshot& snap,
                                     double trunc, bool include_tails = true);

// Default truncation radius policy: the given quantile (e.g. 0.95) of the
// per-vertex maximum threshold radius this epoch, clamped to at least
// min_radius. O(N^2); intended for moderate N.
double default_trunc_radius(const EdgeOracle& orc, const Snapshot& snap,
                            double quantile = 0.95, double min_radius = 1.0);

struct DegreeStats {
  std::vector<std::uint64_t> histogram;  // histogram[k] = #vertices of degree k
  double mean = 0.0;
  std::uint64_t edges = 0;
};
DegreeStats degree_stats(const EdgeOracle& orc, const Snapshot& snap);

}  // namespace driftgraph
