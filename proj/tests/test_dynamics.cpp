#include <doctest.h>

#include <cmath>

#include "driftgraph/dynamics.hpp"
#include "driftgraph/runner.hpp"
#include "driftgraph/stats.hpp"

using namespace driftgraph;

namespace {

kernels::KernelParams soft_kernel() {
  kernels::KernelParams kp;
  kp.variant = kernels::Variant::SoftBoolean;
  kp.gamma = 0.8;
  kp.delta = 1.5;
  kp.dim = 1;
  return kp;
}

// Two-vertex cloud with hand-placed positions, for controlled edge queries.
PointCloud pair_cloud(double r, double u, double v, double side,
                      std::uint64_t seed) {
  PointCloud c;
  c.domain = Domain::torus(1, side);
  c.lambda = 2.0 / side;
  c.palm = false;
  c.seed = seed;
  c.ids = {0, 1};
  c.positions = {0.0, r};
  c.marks = {u, v};
  return c;
}

Snapshot snapshot_at(const PointCloud& c, double t) {
  Snapshot s;
  s.time = t;
  s.epoch = static_cast<std::int64_t>(std::floor(t));
  s.cloud = &c;
  s.positions = c.positions;
  return s;
}

}  // namespace

TEST_CASE("evolve at the initial grid point reproduces the cloud") {
  const PointCloud c = sample_ppp(Domain::torus(2, 100.0), 0.5, true, 31);
  const auto snaps = evolve(c, {0.0});
  REQUIRE(snaps.size() == 1);
  CHECK(snaps[0].positions == c.positions);
  CHECK(snaps[0].epoch == 0);
}

TEST_CASE("evolve rejects unsorted and non-dyadic grids") {
  const PointCloud c = sample_ppp(Domain::torus(1, 16.0), 0.5, false, 3);
  CHECK_THROWS_AS(evolve(c, {1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(evolve(c, {0.0, 0.3}), std::invalid_argument);
  Evolver ev(c);
  (void)ev.at(1.0);
  CHECK_THROWS_AS(ev.at(0.5), std::invalid_argument);  // time went backwards
}

TEST_CASE("evolution is deterministic in the seed") {
  const PointCloud c = sample_ppp(Domain::torus(1, 64.0), 1.0, false, 55);
  const auto a = evolve(c, {0.0, 0.25, 1.0, 2.5});
  const auto b = evolve(c, {0.0, 0.25, 1.0, 2.5});
  for (std::size_t k = 0; k < a.size(); ++k)
    CHECK(a[k].positions == b[k].positions);
}

TEST_CASE("per-step displacement variance matches dt") {
  // 1e5 vertex-steps on a box (no wrap in the measurement): sample variance
  // within 3% of dt.
  for (const double dt : {1.0, 0.5, 0.25}) {
    PointCloud c;
    c.domain = Domain::box(1, 10.0);
    c.lambda = 1.0;
    c.seed = rng::tag("stepvar") + static_cast<std::uint64_t>(1.0 / dt);
    const int n = 2000;
    for (int i = 0; i < n; ++i) {
      c.ids.push_back(i);
      c.positions.push_back(5.0);
      c.marks.push_back(0.5);
    }
    const int steps = 50;
    std::vector<double> grid;
    for (int k = 0; k <= steps; ++k) grid.push_back(k * dt);
    const auto snaps = evolve(c, grid);
    double sum2 = 0.0;
    std::size_t count = 0;
    for (int k = 1; k <= steps; ++k)
      for (int i = 0; i < n; ++i) {
        const double d = snaps[k].positions[i] - snaps[k - 1].positions[i];
        sum2 += d * d;
        ++count;
      }
    const double var = sum2 / static_cast<double>(count);
    CHECK(std::fabs(var - dt) < 0.03 * dt);
  }
}

TEST_CASE("grid refinement reveals the same path") {
  // Positions at shared times are identical whatever the grid, so increments
  // compose exactly ([0,1,2] against [0,2]).
  const PointCloud c = sample_ppp(Domain::box(1, 100.0), 0.3, false, 99);
  const auto coarse = evolve(c, {0.0, 2.0});
  const auto fine = evolve(c, {0.0, 1.0, 2.0});
  CHECK(coarse[1].positions == fine[2].positions);
  const auto finer = evolve(c, {0.0, 0.25, 0.5, 1.0, 1.25, 2.0});
  CHECK(finer[5].positions == coarse[1].positions);
  CHECK(finer[3].positions == fine[1].positions);
}

TEST_CASE("bridge increments are independent across disjoint intervals") {
  // Increments over [0, 1/2] and [1/2, 1] of the same path must be
  // uncorrelated and each carry variance 1/2.
  PointCloud c;
  c.domain = Domain::box(1, 10.0);
  c.lambda = 1.0;
  c.seed = rng::tag("bridge-indep");
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    c.ids.push_back(i);
    c.positions.push_back(5.0);
    c.marks.push_back(0.5);
  }
  const auto snaps = evolve(c, {0.0, 0.5, 1.0});
  std::vector<double> d1(n), d2(n);
  for (int i = 0; i < n; ++i) {
    d1[i] = snaps[1].positions[i] - snaps[0].positions[i];
    d2[i] = snaps[2].positions[i] - snaps[1].positions[i];
  }
  CHECK(stats::mean(d1) == doctest::Approx(0.0).epsilon(1.0));
  CHECK(std::fabs(stats::mean(d1)) < 0.02);
  CHECK(stats::variance(d1) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(stats::variance(d2) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(std::fabs(stats::pearson(d1, d2)) < 0.02);
}

TEST_CASE("torus evolution keeps coordinates wrapped") {
  const PointCloud c = sample_ppp(Domain::torus(1, 9.0), 1.0, false, 4);
  const auto snaps = evolve(c, {0.0, 1.0, 4.0, 16.0});
  for (const Snapshot& s : snaps)
    for (const double x : s.positions) {
      REQUIRE(x >= 0.0);
      REQUIRE(x < c.domain.side);
    }
}

TEST_CASE("has_edge rejects self loops and repeats deterministically") {
  const PointCloud c = pair_cloud(5.0, 0.3, 0.6, 100.0, 17);
  const EdgeOracle orc = make_edge_oracle(17, soft_kernel());
  const Snapshot s = snapshot_at(c, 0.0);
  CHECK_THROWS_AS(has_edge(orc, s, 0, 0), std::invalid_argument);
  const bool first = has_edge(orc, s, 0, 1);
  for (int i = 0; i < 10; ++i) CHECK(has_edge(orc, s, 0, 1) == first);
  CHECK(has_edge(orc, s, 1, 0) == first);  // symmetric in the pair
}

TEST_CASE("within an epoch the edge flips exactly at the threshold radius") {
  const EdgeOracle orc = make_edge_oracle(23, soft_kernel());
  PointCloud c = pair_cloud(1.0, 0.4, 0.7, 1000.0, 23);
  const double uu = orc.pair_uniform(0, 1, 0);
  const double rstar = kernels::threshold_radius(uu, 0.4, 0.7, orc.kernel);
  REQUIRE(rstar > 0.0);
  c.positions = {0.0, rstar * (1.0 - 1e-9)};
  CHECK(has_edge(orc, snapshot_at(c, 0.25), 0, 1));
  c.positions = {0.0, rstar * (1.0 + 1e-9)};
  CHECK_FALSE(has_edge(orc, snapshot_at(c, 0.75), 0, 1));
}

TEST_CASE("within-epoch queries agree; across epochs the uniform resamples") {
  const PointCloud c = pair_cloud(10.0, 0.25, 0.9, 50.0, 77);
  const EdgeOracle orc = make_edge_oracle(77, soft_kernel());
  CHECK(has_edge(orc, snapshot_at(c, 1.0), 0, 1) ==
        has_edge(orc, snapshot_at(c, 1.75), 0, 1));
  // over many epochs the indicator is not constant (positions fixed)
  int flips = 0;
  bool prev = has_edge(orc, snapshot_at(c, 0.0), 0, 1);
  for (int n = 1; n < 200; ++n) {
    const bool cur = has_edge(orc, snapshot_at(c, static_cast<double>(n)), 0, 1);
    flips += cur != prev;
    prev = cur;
  }
  CHECK(flips > 0);
}

TEST_CASE("edge frequency over many epochs matches the kernel probability") {
  const EdgeOracle orc = make_edge_oracle(404, soft_kernel());
  for (const auto& [r, u, v] : std::vector<std::tuple<double, double, double>>{
           {8.0, 0.3, 0.6}, {15.0, 0.5, 0.9}, {4.0, 0.7, 0.8}}) {
    const PointCloud c = pair_cloud(r, u, v, 1000.0, 404);
    const double p = kernels::connection_prob(r, u, v, orc.kernel);
    const int epochs = 100000;
    int hits = 0;
    for (int n = 0; n < epochs; ++n)
      hits += has_edge(orc, snapshot_at(c, static_cast<double>(n)), 0, 1);
    const double freq = static_cast<double>(hits) / epochs;
    const double se = std::sqrt(p * (1.0 - p) / epochs);
    CHECK(std::fabs(freq - p) < 3.0 * se);
  }
}

TEST_CASE("edge indicators decorrelate across epochs") {
  const PointCloud c = pair_cloud(10.0, 0.35, 0.55, 1000.0, 31);
  const EdgeOracle orc = make_edge_oracle(31, soft_kernel());
  const int epochs = 30000;
  std::vector<double> ind(epochs);
  for (int n = 0; n < epochs; ++n)
    ind[n] = has_edge(orc, snapshot_at(c, static_cast<double>(n)), 0, 1) ? 1.0 : 0.0;
  std::vector<double> head(ind.begin(), ind.end() - 1);
  std::vector<double> tail(ind.begin() + 1, ind.end());
  CHECK(std::fabs(stats::pearson(head, tail)) < 0.03);
}

TEST_CASE("epoch threshold table agrees with direct evaluation") {
  const PointCloud c = sample_ppp(Domain::torus(1, 48.0), 1.0, false, 6);
  const EdgeOracle orc = make_edge_oracle(6, soft_kernel());
  const auto snaps = evolve(c, {0.0, 1.5, 3.25});
  for (const Snapshot& snap : snaps) {
    const EpochThresholds table = epoch_thresholds(orc, snap);
    rng::Stream pick(rng::tag("table-queries") + snap.epoch);
    for (int q = 0; q < 300; ++q) {
      const auto i = static_cast<std::size_t>(pick.uniform() * snap.size());
      auto j = static_cast<std::size_t>(pick.uniform() * snap.size());
      if (i == j) continue;
      CHECK(table.at(i, j) == table.at(j, i));
      const double dist = distance(snap.position(i), snap.position(j), c.domain);
      CHECK(has_edge(orc, snap, i, j) == (dist < table.at(i, j)));
    }
  }
}

TEST_CASE("epoch threshold table enforces its size limit") {
  const PointCloud c = sample_ppp(Domain::torus(1, 64.0), 1.0, false, 5);
  const EdgeOracle orc = make_edge_oracle(5, soft_kernel());
  const auto snaps = evolve(c, {0.0});
  CHECK_THROWS_AS(epoch_thresholds(orc, snaps[0], 3), ResourceLimitError);
  PointCloud empty;
  empty.domain = Domain::torus(1, 4.0);
  empty.seed = 1;
  Snapshot es;
  es.cloud = &empty;
  CHECK(epoch_thresholds(orc, es).r_star.empty());
}

TEST_CASE("snapshot statistics are stationary in time") {
  // Subcube occupancy drawn at t=0 and after ten epochs of motion: the two
  // pooled histograms must be chi-square indistinguishable.
  const int reps = 120;
  std::vector<std::uint64_t> h0(40, 0), h10(40, 0);
  for (int r = 0; r < reps; ++r) {
    const PointCloud c = sample_ppp(Domain::torus(1, 128.0), 1.0, false,
                                    replica_seed(rng::tag("stationary"), r));
    Evolver ev(c);
    const Snapshot s0 = ev.at(0.0);
    const Snapshot s10 = ev.at(10.0);
    for (const Snapshot* s : {&s0, &s10}) {
      std::vector<std::uint64_t> counts(16, 0);
      for (std::size_t i = 0; i < s->size(); ++i)
        counts[std::min<std::size_t>(15, static_cast<std::size_t>(
                                             s->position(i)[0] / 8.0))]++;
      auto& hist = s == &s0 ? h0 : h10;
      for (const std::uint64_t k : counts)
        hist[std::min<std::size_t>(hist.size() - 1, k)]++;
    }
  }
  CHECK(stats::chi_squared_homogeneity(h0, h10) > 0.01);
}
