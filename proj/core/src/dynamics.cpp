#include "driftgraph/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace driftgraph {

namespace {
constexpr std::uint64_t kTagMotion = rng::tag("motion");
constexpr std::uint64_t kTagEdge = rng::tag("edges");

// Counter layout for motion normals:
//   bit 0        kind (0 = epoch increment, 1 = bridge midpoint)
//   bits 1..5    bridge level
//   bits 6..31   bridge index within the level
//   bits 32..35  axis
//   bits 36..63  epoch
std::uint64_t pack_increment(std::int64_t epoch, int axis) {
  return (static_cast<std::uint64_t>(epoch) << 36) |
         (static_cast<std::uint64_t>(axis) << 32);
}
std::uint64_t pack_bridge(std::int64_t epoch, int axis, int level,
                          std::uint64_t idx) {
  return (static_cast<std::uint64_t>(epoch) << 36) |
         (static_cast<std::uint64_t>(axis) << 32) | (idx << 6) |
         (static_cast<std::uint64_t>(level) << 1) | 1ull;
}
}  // namespace

bool is_dyadic_time(double t) {
  if (!(t >= 0.0)) return false;
  const double scaled = std::ldexp(t, kMaxDyadicLevel);
  return scaled == std::floor(scaled) && scaled < 0x1.0p62;
}

Evolver::Evolver(const PointCloud& cloud)
    : cloud_(&cloud),
      motion_key_(rng::derive(cloud.seed, kTagMotion)),
      x_epoch_(cloud.positions),
      x_next_(cloud.positions) {
  const int d = cloud.domain.dim;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const std::uint64_t key = rng::derive(motion_key_, cloud.ids[i]);
    for (int a = 0; a < d; ++a)
      x_next_[i * d + a] += rng::normal_from_bits(rng::prf(key, pack_increment(0, a)));
  }
}

void Evolver::advance_to_epoch(std::int64_t n) {
  const int d = cloud_->domain.dim;
  while (epoch_ < n) {
    ++epoch_;
    x_epoch_ = x_next_;
    for (std::size_t i = 0; i < cloud_->size(); ++i) {
      const std::uint64_t key = rng::derive(motion_key_, cloud_->ids[i]);
      for (int a = 0; a < d; ++a)
        x_next_[i * d + a] =
            x_epoch_[i * d + a] +
            rng::normal_from_bits(rng::prf(key, pack_increment(epoch_, a)));
    }
  }
}

double Evolver::fractional_coord(std::size_t index, int axis, std::int64_t n,
                                 double frac) const {
  const int d = cloud_->domain.dim;
  double xa = x_epoch_[index * d + axis];
  if (frac == 0.0) return xa;
  double xb = x_next_[index * d + axis];
  const std::uint64_t key = rng::derive(motion_key_, cloud_->ids[index]);
  double a = 0.0, b = 1.0;
  int level = 1;
  std::uint64_t left_idx = 0;  // index of the interval [a,b] at level-1
  while (a != frac) {
    const double mid = 0.5 * (a + b);
    // Bridge midpoint variance is (b-a)/4 = 2^-(level+1).
    const double sd = std::sqrt(std::ldexp(1.0, -(level + 1)));
    const std::uint64_t bits =
        rng::prf(key, pack_bridge(n, axis, level, left_idx));
    const double xm = 0.5 * (xa + xb) + sd * rng::normal_from_bits(bits);
    if (frac < mid) {
      b = mid;
      xb = xm;
      left_idx = left_idx * 2;
    } else {
      a = mid;
      xa = xm;
      left_idx = left_idx * 2 + 1;
    }
    ++level;
    if (level > kMaxDyadicLevel + 1)
      throw std::invalid_argument("Evolver: non-dyadic observation time");
  }
  return xa;
}

Snapshot Evolver::at(double t) {
  if (!is_dyadic_time(t))
    throw std::invalid_argument("Evolver: time must be a dyadic rational >= 0");
  if (t < last_time_)
    throw std::invalid_argument("Evolver: times must be non-decreasing");
  last_time_ = t;

  const auto n = static_cast<std::int64_t>(std::floor(t));
  advance_to_epoch(n);
  const double frac = t - static_cast<double>(n);

  Snapshot snap;
  snap.time = t;
  snap.epoch = n;
  snap.cloud = cloud_;
  const int d = cloud_->domain.dim;
  snap.positions.resize(cloud_->size() * d);
  for (std::size_t i = 0; i < cloud_->size(); ++i)
    for (int a = 0; a < d; ++a)
      snap.positions[i * d + a] = fractional_coord(i, a, n, frac);
  wrap_in_place(snap.positions, cloud_->domain);
  return snap;
}

std::vector<Snapshot> evolve(const PointCloud& cloud,
                             const std::vector<double>& t_grid) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw std::invalid_argument("evolve: grid must be sorted increasing");
  if (!t_grid.empty() && t_grid.front() < 0.0)
    throw std::invalid_argument("evolve: grid must start at >= 0");
  Evolver ev(cloud);
  std::vector<Snapshot> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(ev.at(t));
  return out;
}

EdgeOracle make_edge_oracle(std::uint64_t seed, const kernels::KernelParams& kp) {
  kp.validate();
  EdgeOracle orc;
  orc.edge_key = rng::derive(seed, kTagEdge);
  orc.lo_salt = rng::derive(orc.edge_key, rng::tag("pair.lo"));
  orc.hi_salt = rng::derive(orc.edge_key, rng::tag("pair.hi"));
  orc.kernel = kp;
  return orc;
}

bool has_edge(const EdgeOracle& orc, const Snapshot& snap, std::size_t i,
              std::size_t j) {
  if (i == j) throw std::invalid_argument("has_edge: i and j must differ");
  const PointCloud& cloud = *snap.cloud;
  const double r = distance(snap.position(i), snap.position(j), cloud.domain);
  const double uu = orc.pair_uniform(cloud.ids[i], cloud.ids[j], snap.epoch);
  return uu < kernels::connection_prob(r, cloud.marks[i], cloud.marks[j],
                                       orc.kernel);
}

EpochThresholds epoch_thresholds(const EdgeOracle& orc, const Snapshot& snap,
                                 std::size_t max_vertices) {
  const std::size_t n = snap.size();
  if (n > max_vertices)
    throw ResourceLimitError(
        "epoch_thresholds: snapshot exceeds the exact-table limit; use the "
        "cell-list path (components_fast) instead");
  EpochThresholds table;
  table.epoch = snap.epoch;
  table.n = n;
  table.r_star.resize(n * (n - 1) / 2);
  const PointCloud& cloud = *snap.cloud;
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      const double uu = orc.pair_uniform(cloud.ids[i], cloud.ids[j], snap.epoch);
      table.r_star[idx] =
          kernels::threshold_radius(uu, cloud.marks[i], cloud.marks[j], orc.kernel);
    }
  }
  return table;
}

}  // namespace driftgraph
