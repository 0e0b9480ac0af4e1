#pragma once

// Time evolution and the deterministic pair-epoch edge oracle.
//
// Each vertex follows a Brownian path realised lazily at dyadic times: unit
// increments at integer epochs, refined inside an epoch by keyed Brownian
// bridge midpoints. Because every normal deviate is addressed by
// (vertex, epoch, bridge level, index) rather than drawn sequentially, two
// observation grids that share a time also share the position there --
// refining a grid never perturbs the path, it only reveals more of it.
//
// Edges: each unordered pair carries one uniform per unit-time epoch,
// produced by a counter-mode PRF keyed by (seed, canonical pair, epoch). An
// edge exists at time t iff that uniform undercuts the connection probability
// at the pair's current distance.

#include <cstdint>
#include <vector>

#include "driftgraph/geometry.hpp"
#include "driftgraph/kernels.hpp"
#include "driftgraph/point_process.hpp"
#include "driftgraph/rng.hpp"

namespace driftgraph {

// Raised when an operation would exceed a configured size limit.
struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Snapshot {
  double time = 0.0;
  std::int64_t epoch = 0;  // floor(time)
  const PointCloud* cloud = nullptr;
  std::vector<double> positions;  // flat, wrapped into the domain if torus

  std::size_t size() const { return cloud ? cloud->size() : 0; }
  std::span<const double> position(std::size_t index) const {
    const int d = cloud->domain.dim;
    return {positions.data() + index * d, static_cast<std::size_t>(d)};
  }
};

// Largest dyadic refinement supported for observation times.
inline constexpr int kMaxDyadicLevel = 26;

// True iff t is k * 2^-kMaxDyadicLevel for an integer k >= 0.
bool is_dyadic_time(double t);

// Streaming evaluator of the vertex paths on dyadic times. Queries must be
// non-decreasing in time.
class Evolver {
 public:
  explicit Evolver(const PointCloud& cloud);

  // Snapshot at dyadic time t >= current time.
  Snapshot at(double t);

  const PointCloud& cloud() const { return *cloud_; }

 private:
  void advance_to_epoch(std::int64_t n);
  double fractional_coord(std::size_t index, int axis, std::int64_t n,
                          double frac) const;

  const PointCloud* cloud_;
  std::uint64_t motion_key_;
  std::int64_t epoch_ = 0;
  double last_time_ = 0.0;
  std::vector<double> x_epoch_;  // raw coordinates at the current epoch start
  std::vector<double> x_next_;   // ... and at the next integer time
};

// Positions at every time of a sorted dyadic grid.
std::vector<Snapshot> evolve(const PointCloud& cloud,
                             const std::vector<double>& t_grid);

struct EdgeOracle {
  std::uint64_t edge_key = 0;
  std::uint64_t lo_salt = 0;  // derived; cached for the hot paths
  std::uint64_t hi_salt = 0;
  kernels::KernelParams kernel;

  // Pair key = prf(lo_salt, lo) ^ prf(hi_salt, hi): order-independent after
  // canonicalisation, and the two halves can be precomputed per vertex when
  // scanning all pairs of an epoch.
  std::uint64_t pair_uniform_bits(VertexId a, VertexId b,
                                  std::int64_t epoch) const {
    const VertexId lo = a < b ? a : b;
    const VertexId hi = a < b ? b : a;
    const std::uint64_t key = rng::prf(lo_salt, lo) ^ rng::prf(hi_salt, hi);
    return rng::prf(key, static_cast<std::uint64_t>(epoch));
  }
  double pair_uniform(VertexId a, VertexId b, std::int64_t epoch) const {
    return rng::to_unit_open(pair_uniform_bits(a, b, epoch));
  }
};

EdgeOracle make_edge_oracle(std::uint64_t seed, const kernels::KernelParams& kp);

// Edge indicator between the vertices at positions index i and j of the
// snapshot. Throws for i == j.
bool has_edge(const EdgeOracle& orc, const Snapshot& snap, std::size_t i,
              std::size_t j);

// All pairwise threshold radii for the snapshot's epoch; O(N^2) storage.
struct EpochThresholds {
  std::int64_t epoch = 0;
  std::size_t n = 0;
  std::vector<double> r_star;  // flat upper triangle, i < j

  double at(std::size_t i, std::size_t j) const {
    if (i == j) throw std::invalid_argument("EpochThresholds: i == j");
    const std::size_t lo = i < j ? i : j, hi = i < j ? j : i;
    return r_star[lo * (2 * n - lo - 1) / 2 + (hi - lo - 1)];
  }
};

EpochThresholds epoch_thresholds(const EdgeOracle& orc, const Snapshot& snap,
                                 std::size_t max_vertices = 4096);

}  // namespace driftgraph
