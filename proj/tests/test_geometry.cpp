#include <doctest.h>

#include <cmath>

#include "driftgraph/geometry.hpp"
#include "driftgraph/rng.hpp"

using namespace driftgraph;

TEST_CASE("torus distance wraps per coordinate") {
  const Domain dom = Domain::torus(2, 100.0);  // side 10
  CHECK(dom.side == doctest::Approx(10.0));
  const Position a{1.0, 1.0}, b{9.0, 9.0};
  CHECK(distance(a, b, dom) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
}

TEST_CASE("distance of a point to itself is zero") {
  const Domain dom = Domain::torus(3, 27.0);
  const Position a{0.5, 1.5, 2.5};
  CHECK(distance(a, a, dom) == 0.0);
}

TEST_CASE("box distance is plain euclidean") {
  const Domain dom = Domain::box(1, 10.0);
  CHECK(distance(Position{1.0}, Position{9.0}, dom) == doctest::Approx(8.0));
}

TEST_CASE("dimension mismatch is rejected") {
  const Domain dom = Domain::torus(2, 100.0);
  CHECK_THROWS_AS(distance(Position{1.0}, Position{1.0, 2.0}, dom),
                  std::invalid_argument);
}

TEST_CASE("torus distance is shift invariant") {
  const Domain dom = Domain::torus(2, 49.0);
  rng::Stream s(rng::tag("shift-invariance"));
  for (int trial = 0; trial < 500; ++trial) {
    Position a{dom.side * s.uniform(), dom.side * s.uniform()};
    Position b{dom.side * s.uniform(), dom.side * s.uniform()};
    const double shift0 = dom.side * s.uniform();
    const double shift1 = dom.side * s.uniform();
    Position as{wrap_coord(a[0] + shift0, dom.side), wrap_coord(a[1] + shift1, dom.side)};
    Position bs{wrap_coord(b[0] + shift0, dom.side), wrap_coord(b[1] + shift1, dom.side)};
    CHECK(distance(as, bs, dom) == doctest::Approx(distance(a, b, dom)).epsilon(1e-9));
  }
}

TEST_CASE("triangle inequality holds on the torus") {
  const Domain dom = Domain::torus(2, 36.0);
  rng::Stream s(rng::tag("triangle"));
  for (int trial = 0; trial < 500; ++trial) {
    Position a{dom.side * s.uniform(), dom.side * s.uniform()};
    Position b{dom.side * s.uniform(), dom.side * s.uniform()};
    Position c{dom.side * s.uniform(), dom.side * s.uniform()};
    CHECK(distance(a, c, dom) <= distance(a, b, dom) + distance(b, c, dom) + 1e-12);
  }
}

TEST_CASE("brownian step with dt=0 leaves the position unchanged") {
  const Domain dom = Domain::box(2, 5.0);
  rng::Stream s(1);
  const Position p{1.0, 2.0};
  CHECK(brownian_step(p, 0.0, dom, s) == p);
}

TEST_CASE("brownian step rejects negative dt") {
  const Domain dom = Domain::box(1, 5.0);
  rng::Stream s(1);
  CHECK_THROWS_AS(brownian_step(Position{1.0}, -0.5, dom, s),
                  std::invalid_argument);
}

TEST_CASE("brownian step wraps on the torus") {
  const Domain dom = Domain::torus(1, 10.0);
  CHECK(wrap_coord(9.9 + 0.3, dom.side) == doctest::Approx(0.2).epsilon(1e-12));
  rng::Stream s(rng::tag("wrap-range"));
  Position p{9.9};
  for (int i = 0; i < 2000; ++i) {
    p = brownian_step(p, 1.0, dom, s);
    REQUIRE(p[0] >= 0.0);
    REQUIRE(p[0] < dom.side);
  }
}

TEST_CASE("brownian displacement variance matches dt") {
  // Monte Carlo against the Normal(0, dt) increment: 1e5 samples keeps the
  // sample variance within 3 standard errors (se ~ dt * sqrt(2/n)).
  const Domain dom = Domain::box(1, 1.0);
  rng::Stream s(rng::tag("variance"));
  const int n = 100000;
  for (const double dt : {1.0, 0.25}) {
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = brownian_step(Position{0.0}, dt, dom, s)[0];
      sum += d;
      sum2 += d * d;
    }
    const double var = sum2 / n - (sum / n) * (sum / n);
    const double se = dt * std::sqrt(2.0 / n);
    CHECK(std::fabs(var - dt) < 3.0 * se);
  }
}

TEST_CASE("box mode does not wrap: positions may leave the box") {
  const Domain dom = Domain::box(1, 1.0);
  rng::Stream s(rng::tag("escape"));
  bool escaped = false;
  for (int i = 0; i < 200 && !escaped; ++i) {
    const Position q = brownian_step(Position{0.5}, 4.0, dom, s);
    escaped = q[0] < 0.0 || q[0] > dom.side;
  }
  CHECK(escaped);
}
