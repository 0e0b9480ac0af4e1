#include <doctest.h>

#include <cmath>
#include <sstream>

#include "driftgraph/io.hpp"
#include "driftgraph/point_process.hpp"
#include "driftgraph/runner.hpp"
#include "driftgraph/stats.hpp"

using namespace driftgraph;

TEST_CASE("poisson counts have the right mean and unit dispersion") {
  // Mean over 1e4 replicas of Poisson(lambda * volume) with lambda=1,
  // volume=1000: se = sqrt(1000/1e4) ~ 0.32, so [990, 1010] is comfortable;
  // the dispersion estimate lands in [0.95, 1.05] the same way.
  const Domain dom = Domain::torus(1, 1000.0);
  const int reps = 10000;
  std::vector<double> counts;
  counts.reserve(reps);
  for (int r = 0; r < reps; ++r)
    counts.push_back(static_cast<double>(
        sample_ppp(dom, 1.0, false, replica_seed(rng::tag("ppp-mean"), r)).size()));
  const double mean = stats::mean(counts);
  CHECK(mean > 990.0);
  CHECK(mean < 1010.0);
  const double dispersion = stats::variance(counts) / mean;
  CHECK(dispersion > 0.95);
  CHECK(dispersion < 1.05);
}

TEST_CASE("palm cloud pins vertex 0 at the domain origin") {
  const Domain torus = Domain::torus(2, 100.0);
  const PointCloud c1 = sample_ppp(torus, 0.5, true, 9);
  CHECK(c1.ids[0] == 0);
  CHECK(c1.position(0)[0] == 0.0);
  CHECK(c1.position(0)[1] == 0.0);
  CHECK(c1.marks[0] > 0.0);
  CHECK(c1.marks[0] < 1.0);

  const Domain box = Domain::box(2, 10.0);
  const PointCloud c2 = sample_ppp(box, 0.5, true, 9);
  CHECK(c2.position(0)[0] == doctest::Approx(5.0));
  CHECK(c2.position(0)[1] == doctest::Approx(5.0));
}

TEST_CASE("origin mark can be pinned for worst-case studies") {
  const PointCloud c = sample_ppp(Domain::torus(1, 10.0), 1.0, true, 3, 0.99);
  CHECK(c.marks[0] == 0.99);
}

TEST_CASE("marks and positions stay inside their ranges") {
  const PointCloud c = sample_ppp(Domain::torus(2, 400.0), 2.0, true, 11);
  for (std::size_t i = 0; i < c.size(); ++i) {
    REQUIRE(c.marks[i] > 0.0);
    REQUIRE(c.marks[i] < 1.0);
    REQUIRE(c.position(i)[0] >= 0.0);
    REQUIRE(c.position(i)[0] < c.domain.side);
  }
}

TEST_CASE("invalid sampling inputs are rejected") {
  CHECK_THROWS_AS(sample_ppp(Domain::torus(1, 10.0), 0.0, false, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_ppp(Domain::torus(1, 10.0), -1.0, false, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(Domain::torus(1, 0.0), std::invalid_argument);
}

TEST_CASE("subcube counts fit a Poisson law (chi-square aggregate)") {
  // Counts pooled over 200 replicas x 16 subcells against Poisson(lambda *
  // subvolume); goodness of fit at significance 0.01.
  const Domain dom = Domain::torus(1, 64.0);
  const double lambda = 1.0;
  const double sub = 4.0;
  const int cells = 16;
  std::vector<std::uint64_t> histogram(64, 0);
  for (int r = 0; r < 200; ++r) {
    const PointCloud c =
        sample_ppp(dom, lambda, false, replica_seed(rng::tag("ppp-gof"), r));
    std::vector<std::uint64_t> counts(cells, 0);
    for (std::size_t i = 0; i < c.size(); ++i)
      counts[std::min<std::size_t>(
          cells - 1, static_cast<std::size_t>(c.position(i)[0] / sub))]++;
    for (const std::uint64_t k : counts)
      histogram[std::min<std::size_t>(histogram.size() - 1, k)]++;
  }
  const double mu = lambda * sub;
  std::vector<double> probs(histogram.size());
  double p = std::exp(-mu);
  for (std::size_t k = 0; k < probs.size(); ++k) {
    probs[k] = p;
    p *= mu / static_cast<double>(k + 1);
  }
  const double pvalue =
      stats::chi_squared_gof(histogram, probs, 200.0 * cells);
  CHECK(pvalue > 0.01);
}

TEST_CASE("mark layers match their closed-form windows") {
  // theta=0.6, d=1: I_0 = (e^-0.6/2, 1/2) = (0.27441, 0.5)
  const MarkLayers layers(0.6, 0.1, 1.0, 1);
  CHECK(layers.k_max == 0);
  CHECK(*layers.layer_of(0.75) == -1);
  CHECK(*layers.layer_of(0.4) == 0);
  CHECK(layers.lower(0) == doctest::Approx(0.27440581804701324).epsilon(1e-12));
  CHECK(layers.upper(0) == doctest::Approx(0.5));
}

TEST_CASE("marks below the bottom layer map to none") {
  const MarkLayers layers(0.6, 0.5, 100.0, 1);  // k_max = floor(0.5*ln100) = 2
  CHECK(layers.k_max == 2);
  const double bottom = layers.lower(layers.k_max);
  CHECK_FALSE(layers.layer_of(bottom * 0.5).has_value());
  CHECK(*layers.layer_of(bottom * 1.0000001) == layers.k_max);
}

TEST_CASE("boundary marks map to none, interior marks to exactly one layer") {
  const MarkLayers layers(0.55, 1.0, 4096.0, 1);
  CHECK_FALSE(layers.layer_of(0.5).has_value());
  rng::Stream s(rng::tag("layers-partition"));
  for (int i = 0; i < 20000; ++i) {
    const double u = s.uniform();
    const auto k = layers.layer_of(u);
    if (!k) continue;
    int hits = 0;
    for (int kk = -1; kk <= layers.k_max; ++kk)
      if (u > layers.lower(kk) && u < layers.upper(kk)) ++hits;
    REQUIRE(hits == 1);
    REQUIRE(u > layers.lower(*k));
    REQUIRE(u < layers.upper(*k));
  }
}

TEST_CASE("thinning partitions the cloud") {
  const PointCloud c = sample_ppp(Domain::torus(1, 2000.0), 1.0, true, 77);
  const ThinnedPair parts = thin(c, 0.3);
  CHECK(parts.eps_part.size() + parts.rest_part.size() == c.size());
  CHECK(parts.rest_part.palm);          // origin defaults to the big part
  CHECK_FALSE(parts.eps_part.palm);
  CHECK(parts.eps_part.lambda == doctest::Approx(0.3));
  CHECK(parts.rest_part.lambda == doctest::Approx(0.7));
  // ids survive, so the union reproduces the original exactly
  std::vector<VertexId> merged = parts.eps_part.ids;
  merged.insert(merged.end(), parts.rest_part.ids.begin(), parts.rest_part.ids.end());
  std::sort(merged.begin(), merged.end());
  CHECK(merged == c.ids);
}

TEST_CASE("thinned part size concentrates around eps*N") {
  const PointCloud c = sample_ppp(Domain::torus(1, 10000.0), 1.0, false, 5);
  const ThinnedPair parts = thin(c, 0.5);
  const double n = static_cast<double>(c.size());
  const double half = n / 2.0;
  CHECK(std::fabs(static_cast<double>(parts.eps_part.size()) - half) <
        3.0 * std::sqrt(n * 0.25));
}

TEST_CASE("thinned parts are uncorrelated across replicas") {
  // Counts of the two parts in a fixed subcube, correlated across replicas:
  // independent Poisson parts give |rho| < 0.05 at 1e3 replicas.
  std::vector<double> eps_counts, rest_counts;
  for (int r = 0; r < 1000; ++r) {
    const PointCloud c = sample_ppp(Domain::torus(1, 200.0), 1.0, false,
                                    replica_seed(rng::tag("thin-indep"), r));
    const ThinnedPair parts = thin(c, 0.4);
    auto count_in = [](const PointCloud& part) {
      double k = 0;
      for (std::size_t i = 0; i < part.size(); ++i)
        k += part.position(i)[0] < 50.0;
      return k;
    };
    eps_counts.push_back(count_in(parts.eps_part));
    rest_counts.push_back(count_in(parts.rest_part));
  }
  CHECK(std::fabs(stats::pearson(eps_counts, rest_counts)) < 0.05);
}

TEST_CASE("thin rejects out-of-range eps and keeps determinism") {
  const PointCloud c = sample_ppp(Domain::torus(1, 100.0), 1.0, false, 8);
  CHECK_THROWS_AS(thin(c, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(thin(c, 1.0), std::invalid_argument);
  const ThinnedPair a = thin(c, 0.25), b = thin(c, 0.25);
  CHECK(a.eps_part.ids == b.eps_part.ids);
}

TEST_CASE("jsonl round trip is bit exact") {
  const PointCloud c = sample_ppp(Domain::torus(3, 64.0), 0.7, true, 424242);
  std::ostringstream os;
  io::write_pointcloud_jsonl(os, c);
  std::istringstream is(os.str());
  const PointCloud back = io::read_pointcloud_jsonl(is);
  REQUIRE(back.size() == c.size());
  CHECK(back.ids == c.ids);
  CHECK(back.positions == c.positions);  // bitwise double equality
  CHECK(back.marks == c.marks);
  CHECK(back.lambda == c.lambda);
  CHECK(back.seed == c.seed);
  // a second serialization is byte-identical
  std::ostringstream os2;
  io::write_pointcloud_jsonl(os2, back);
  CHECK(os.str() == os2.str());
}
