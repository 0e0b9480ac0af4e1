#pragma once

// Domains (torus / box), the metric, and Brownian displacement.

#include <span>
#include <stdexcept>
#include <vector>

#include "driftgraph/rng.hpp"

namespace driftgraph {

using Position = std::vector<double>;

enum class DomainKind { Torus, Box };

// A d-dimensional torus of a given volume, or an axis-aligned box. Torus
// coordinates live in [0, side); box coordinates start in [0, side] but a box
// does not wrap or reflect -- vertices that leave it stay tracked, since the
// box is a finite window on free motion.
struct Domain {
  DomainKind kind = DomainKind::Torus;
  int dim = 1;
  double side = 1.0;

  static Domain torus(int dim, double volume);
  static Domain box(int dim, double side);

  double volume() const;
  bool wraps() const { return kind == DomainKind::Torus; }

  // Canonical origin point: (0,...,0) on the torus, the centre of a box.
  Position origin() const;
};

double distance(std::span<const double> a, std::span<const double> b,
                const Domain& dom);

// Wrap a coordinate into [0, side).
double wrap_coord(double x, double side);

void wrap_in_place(std::span<double> coords, const Domain& dom);

// One Brownian increment of variance dt per coordinate, wrapped into the
// domain when it is a torus.
Position brownian_step(const Position& p, double dt, const Domain& dom,
                       rng::Stream& stream);

}  // namespace driftgraph
