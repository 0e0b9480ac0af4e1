#include "driftgraph/kernels.hpp"

#include <cmath>

#include "driftgraph/stats.hpp"

namespace driftgraph::kernels {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Generic: return "generic";
    case Variant::SoftBoolean: return "soft_boolean";
    case Variant::AgeRCM: return "age_rcm";
  }
  return "?";
}

Variant variant_from_string(const std::string& name) {
  if (name == "generic") return Variant::Generic;
  if (name == "soft_boolean") return Variant::SoftBoolean;
  if (name == "age_rcm") return Variant::AgeRCM;
  throw std::invalid_argument("unknown kernel variant: " + name);
}

void KernelParams::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("kernel: gamma must be in (0,1)");
  if (!(delta > 1.0)) throw std::invalid_argument("kernel: delta must be > 1");
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("kernel: alpha must be in (0,1]");
  if (!(kappa1 > 0.0)) throw std::invalid_argument("kernel: kappa1 must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("kernel: beta must be > 0");
  if (dim < 1) throw std::invalid_argument("kernel: dim must be >= 1");
}

double radius_from_mark(double u, const KernelParams& kp) {
  return std::pow(u, -kp.gamma / kp.dim);
}

double unit_ball_volume(int dim) {
  return std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0 + 1.0);
}

namespace {
void check_pair(double r, double u, double v) {
  if (!(r >= 0.0)) throw std::invalid_argument("connection_prob: r must be >= 0");
  if (!(u > 0.0 && u < 1.0 && v > 0.0 && v < 1.0))
    throw std::invalid_argument("connection_prob: marks must be in (0,1)");
}
}  // namespace

double connection_prob(double r, double u, double v, const KernelParams& kp) {
  check_pair(r, u, v);
  const double dd = kp.delta * kp.dim;
  const double m = std::min(u, v);
  switch (kp.variant) {
    case Variant::Generic: {
      if (r == 0.0) return kp.alpha;
      return kp.alpha * std::min(1.0, kp.kappa1 * std::pow(m, -kp.delta * kp.gamma) *
                                          std::pow(r, -dd));
    }
    case Variant::SoftBoolean: {
      if (r == 0.0) return 1.0;
      const double rsum = radius_from_mark(u, kp) + radius_from_mark(v, kp);
      return std::min(1.0, std::pow(rsum / r, dd));
    }
    case Variant::AgeRCM: {
      if (r == 0.0) return 1.0;
      const double big = std::max(u, v);
      const double arg = std::pow(m, kp.gamma) * std::pow(big, 1.0 - kp.gamma) *
                         std::pow(r, static_cast<double>(kp.dim)) / kp.beta;
      return std::min(1.0, std::pow(arg, -kp.delta));
    }
  }
  return 0.0;
}

double threshold_radius(double uu, double u, double v, const KernelParams& kp) {
  if (!(uu > 0.0 && uu < 1.0))
    throw std::invalid_argument("threshold_radius: uniform must be in (0,1)");
  check_pair(0.0, u, v);
  const double dd = kp.delta * kp.dim;
  const double m = std::min(u, v);
  switch (kp.variant) {
    case Variant::Generic: {
      if (uu >= kp.alpha) return 0.0;  // p never exceeds alpha
      return std::pow(kp.alpha * kp.kappa1 * std::pow(m, -kp.delta * kp.gamma) / uu,
                      1.0 / dd);
    }
    case Variant::SoftBoolean: {
      const double rsum = radius_from_mark(u, kp) + radius_from_mark(v, kp);
      return rsum * std::pow(uu, -1.0 / dd);
    }
    case Variant::AgeRCM: {
      const double big = std::max(u, v);
      const double denom = std::pow(m, kp.gamma) * std::pow(big, 1.0 - kp.gamma);
      return std::pow(kp.beta * std::pow(uu, -1.0 / kp.delta) / denom,
                      1.0 / kp.dim);
    }
  }
  return 0.0;
}

double mean_degree_upper(const KernelParams& kp, double lambda) {
  kp.validate();  // rejects delta <= 1 and gamma >= 1
  if (!(lambda > 0.0))
    throw std::invalid_argument("mean_degree_upper: lambda must be > 0");
  const double vd = unit_ball_volume(kp.dim);
  const double radial = kp.delta / (kp.delta - 1.0);
  switch (kp.variant) {
    case Variant::Generic: {
      // E[(min mark)^(-gamma)] over two iid uniforms = 2/((1-g)(2-g)).
      const double marks = 2.0 / ((1.0 - kp.gamma) * (2.0 - kp.gamma));
      return lambda * kp.alpha * vd * std::pow(kp.kappa1, 1.0 / kp.delta) * radial *
             marks;
    }
    case Variant::SoftBoolean: {
      // E[(u^(-g/d) + v^(-g/d))^d] via the binomial expansion.
      double marks = 0.0;
      double binom = 1.0;
      for (int k = 0; k <= kp.dim; ++k) {
        const double e1 = kp.gamma * k / kp.dim;
        const double e2 = kp.gamma * (kp.dim - k) / kp.dim;
        marks += binom / ((1.0 - e1) * (1.0 - e2));
        binom = binom * (kp.dim - k) / (k + 1);
      }
      return lambda * vd * radial * marks;
    }
    case Variant::AgeRCM: {
      // E[(u^v)^(-g) (u|v)^(g-1)] = 2/(1-g).
      return lambda * vd * kp.beta * radial * 2.0 / (1.0 - kp.gamma);
    }
  }
  return 0.0;
}

double mean_connection_prob(double r, const KernelParams& kp) {
  if (kp.variant == Variant::Generic) {
    // Exact: with m = min(u,v) ~ density 2(1-m), split at the plateau edge
    // m0 where kappa1 m^(-dg) r^(-dd) = 1.
    if (r == 0.0) return kp.alpha;
    const double dg = kp.delta * kp.gamma;
    const double dd = kp.delta * kp.dim;
    const double a = kp.kappa1 * std::pow(r, -dd);
    const double m0 = std::min(1.0, std::pow(a, 1.0 / dg));
    const double head = 2.0 * m0 - m0 * m0;  // P(m <= m0)
    // int_{m0}^1 m^(-s) dm for s = dg and s = dg-1
    auto ipow = [&](double s) {
      if (std::fabs(s - 1.0) < 1e-12) return std::log(1.0 / m0);
      return (1.0 - std::pow(m0, 1.0 - s)) / (1.0 - s);
    };
    const double tail = a * 2.0 * (ipow(dg) - ipow(dg - 1.0));
    return kp.alpha * (head + tail);
  }
  // SoftBoolean / AgeRCM: bounded integrand, tensor Gauss-Legendre over the
  // two marks is plenty for a reporting estimate.
  const auto& nodes = stats::gauss_legendre_01(64);
  double acc = 0.0;
  for (const auto& [xu, wu] : nodes)
    for (const auto& [xv, wv] : nodes)
      acc += wu * wv * connection_prob(r, xu, xv, kp);
  return acc;
}

double mean_tail_degree_integral(const KernelParams& kp, double trunc) {
  kp.validate();
  if (!(trunc > 0.0))
    throw std::invalid_argument("mean_tail_degree_integral: trunc must be > 0");
  // d*V_d * int_trunc^inf pbar(r) r^(d-1) dr, substituted r = w^(-k).
  // r^(d-1) |dr/dw| = k w^(-kd-1), and pbar ~ C r^(-delta d) makes the
  // integrand ~ C w^(kd(delta-1)-1) near the origin; k is picked large
  // enough that it vanishes there.
  const int d = kp.dim;
  const double k = std::max(2.0, std::ceil(2.0 / (d * (kp.delta - 1.0))));
  const double w1 = std::pow(trunc, -1.0 / k);
  auto f = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double r = std::pow(w, -k);
    return mean_connection_prob(r, kp) * k * std::pow(w, -k * d - 1.0);
  };
  const double integral = stats::adaptive_simpson(f, 0.0, w1, 1e-8, 24);
  return d * unit_ball_volume(d) * integral;
}

}  // namespace driftgraph::kernels
