#include "driftgraph/geometry.hpp"

#include <cmath>

namespace driftgraph {

Domain Domain::torus(int dim, double volume) {
  if (dim < 1) throw std::invalid_argument("torus: dimension must be >= 1");
  if (!(volume > 0.0)) throw std::invalid_argument("torus: volume must be > 0");
  Domain d;
  d.kind = DomainKind::Torus;
  d.dim = dim;
  d.side = std::pow(volume, 1.0 / dim);
  return d;
}

Domain Domain::box(int dim, double side) {
  if (dim < 1) throw std::invalid_argument("box: dimension must be >= 1");
  if (!(side > 0.0)) throw std::invalid_argument("box: side must be > 0");
  Domain d;
  d.kind = DomainKind::Box;
  d.dim = dim;
  d.side = side;
  return d;
}

double Domain::volume() const { return std::pow(side, dim); }

Position Domain::origin() const {
  if (kind == DomainKind::Torus) return Position(dim, 0.0);
  return Position(dim, side / 2.0);
}

double wrap_coord(double x, double side) {
  double r = std::fmod(x, side);
  if (r < 0.0) r += side;
  // fmod can return exactly `side` after the correction when x is a tiny
  // negative number.
  if (r >= side) r = 0.0;
  return r;
}

void wrap_in_place(std::span<double> coords, const Domain& dom) {
  if (!dom.wraps()) return;
  for (double& c : coords) c = wrap_coord(c, dom.side);
}

double distance(std::span<const double> a, std::span<const double> b,
                const Domain& dom) {
  if (a.size() != b.size() || static_cast<int>(a.size()) != dom.dim)
    throw std::invalid_argument("distance: dimension mismatch");
  double sum = 0.0;
  if (dom.wraps()) {
    for (int i = 0; i < dom.dim; ++i) {
      double diff = std::fabs(a[i] - b[i]);
      diff = std::min(diff, dom.side - diff);
      sum += diff * diff;
    }
  } else {
    for (int i = 0; i < dom.dim; ++i) {
      const double diff = a[i] - b[i];
      sum += diff * diff;
    }
  }
  return std::sqrt(sum);
}

Position brownian_step(const Position& p, double dt, const Domain& dom,
                       rng::Stream& stream) {
  if (static_cast<int>(p.size()) != dom.dim)
    throw std::invalid_argument("brownian_step: dimension mismatch");
  if (!(dt >= 0.0)) throw std::invalid_argument("brownian_step: dt must be >= 0");
  Position q = p;
  if (dt == 0.0) return q;
  const double sd = std::sqrt(dt);
  for (double& c : q) c += sd * stream.normal();
  wrap_in_place(q, dom);
  return q;
}

}  // namespace driftgraph
