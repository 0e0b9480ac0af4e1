#pragma once

// Connection-probability kernels and their threshold inversion.
//
// All three variants use exact Pareto-type tails, so probabilities invert in
// closed form: for a fixed pair uniform U the edge at distance r exists iff
// r < threshold_radius(U, u, v). That turns per-epoch edge queries into plain
// distance comparisons.

#include <stdexcept>
#include <string>

namespace driftgraph::kernels {

enum class Variant { Generic, SoftBoolean, AgeRCM };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct KernelParams {
  Variant variant = Variant::SoftBoolean;
  double gamma = 0.8;   // in (0,1)
  double delta = 1.5;   // > 1
  double alpha = 1.0;   // in (0,1], Generic only
  double kappa1 = 1.0;  // > 0, Generic only
  double beta = 1.0;    // > 0, AgeRCM only
  int dim = 1;

  void validate() const;
  // Doubly-logarithmic-distance regime; both trend studies assume it.
  bool ultrasmall() const { return gamma > delta / (delta + 1.0); }
};

// Radius derived from a mark under the soft Boolean profile: R = u^(-gamma/d).
// Uniform marks give the exact tail P(R > r) = r^(-d/gamma) for r >= 1.
double radius_from_mark(double u, const KernelParams& kp);

// Probability that two vertices with marks u, v at distance r are linked.
//   Generic:     alpha * min(1, kappa1 * (u^v)^(-delta*gamma) * r^(-delta*d))
//   SoftBoolean: min(1, ((R_u + R_v)/r)^(delta*d))
//   AgeRCM:      min(1, (beta^-1 (u^v)^gamma (u|v)^(1-gamma) r^d)^(-delta))
// where u^v = min(u,v), u|v = max(u,v). r = 0 yields alpha (Generic) or 1.
double connection_prob(double r, double u, double v, const KernelParams& kp);

// Largest radius at which the pair is still connected for the epoch uniform
// uu: r* = sup{ r : connection_prob(r,u,v) > uu }, with r* = 0 when the
// supremum is over an empty set (Generic with uu >= alpha). For every r,
// [r < r*] == [uu < connection_prob(r,u,v)].
double threshold_radius(double uu, double u, double v, const KernelParams& kp);

// Expected degree of a typical vertex at intensity lambda (marks averaged
// out), in closed form. Used as the oracle for empirical degree statistics.
// Throws for divergent parameter combinations (delta <= 1 or gamma >= 1).
double mean_degree_upper(const KernelParams& kp, double lambda);

// Mark-averaged connection probability at distance r.
double mean_connection_prob(double r, const KernelParams& kp);

// d * V_d * \int_trunc^inf mean_connection_prob(r) r^(d-1) dr, evaluated by
// adaptive quadrature; the expected-long-edge bound for truncated neighbor
// searches uses this.
double mean_tail_degree_integral(const KernelParams& kp, double trunc);

// Volume of the d-dimensional unit ball.
double unit_ball_volume(int dim);

}  // namespace driftgraph::kernels
