#include "driftgraph/point_process.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace driftgraph {

namespace {
constexpr std::uint64_t kTagCount = rng::tag("ppp.count");
constexpr std::uint64_t kTagBody = rng::tag("ppp.body");
constexpr std::uint64_t kTagOriginMark = rng::tag("ppp.origin_mark");
constexpr std::uint64_t kTagThin = rng::tag("thin");
}  // namespace

PointCloud sample_ppp(const Domain& dom, double lambda, bool palm,
                      std::uint64_t seed,
                      std::optional<double> pinned_origin_mark) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sample_ppp: lambda must be > 0");
  const double mean = lambda * dom.volume();
  if (!(mean > 0.0)) throw std::invalid_argument("sample_ppp: volume must be > 0");

  PointCloud cloud;
  cloud.domain = dom;
  cloud.lambda = lambda;
  cloud.palm = palm;
  cloud.seed = seed;

  rng::Stream count_stream(rng::derive(seed, kTagCount));
  std::poisson_distribution<long long> pois(mean);
  const auto n = static_cast<std::size_t>(pois(count_stream));

  const std::size_t total = n + (palm ? 1 : 0);
  cloud.ids.reserve(total);
  cloud.positions.reserve(total * dom.dim);
  cloud.marks.reserve(total);

  VertexId next_id = 0;
  if (palm) {
    cloud.ids.push_back(next_id++);
    const Position o = dom.origin();
    cloud.positions.insert(cloud.positions.end(), o.begin(), o.end());
    double mark;
    if (pinned_origin_mark) {
      mark = *pinned_origin_mark;
      if (!(mark > 0.0 && mark < 1.0))
        throw std::invalid_argument("sample_ppp: pinned origin mark must be in (0,1)");
    } else {
      rng::Stream mark_stream(rng::derive(seed, kTagOriginMark));
      mark = mark_stream.uniform();
    }
    cloud.marks.push_back(mark);
  }

  rng::Stream body(rng::derive(seed, kTagBody));
  for (std::size_t i = 0; i < n; ++i) {
    cloud.ids.push_back(next_id++);
    for (int a = 0; a < dom.dim; ++a)
      cloud.positions.push_back(dom.side * body.uniform());
    cloud.marks.push_back(body.uniform());
  }
  return cloud;
}

MarkLayers::MarkLayers(double theta_, double eps_theta_, double t_scale_, int dim_)
    : theta(theta_), eps_theta(eps_theta_), t_scale(t_scale_), dim(dim_) {
  if (!(theta > 0.0)) throw std::invalid_argument("MarkLayers: theta must be > 0");
  if (!(eps_theta > 0.0))
    throw std::invalid_argument("MarkLayers: eps_theta must be > 0");
  if (!(t_scale >= 1.0))
    throw std::invalid_argument("MarkLayers: t_scale must be >= 1");
  if (dim < 1) throw std::invalid_argument("MarkLayers: dim must be >= 1");
  k_max = static_cast<int>(std::floor(eps_theta * std::log(t_scale) / dim));
}

double MarkLayers::lower(int k) const {
  if (k == -1) return 0.5;
  return 0.5 * std::exp(-(k + 1) * theta * dim);
}

double MarkLayers::upper(int k) const {
  if (k == -1) return 1.0;
  return 0.5 * std::exp(-k * theta * dim);
}

std::optional<int> MarkLayers::layer_of(double u) const {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("layer_of: mark must be in (0,1)");
  if (u > 0.5) return -1;
  if (u == 0.5) return std::nullopt;  // boundary
  // u in (0, 1/2): candidate layer from the closed form, then confirm against
  // the open interval to keep boundary hits out.
  const double k_real = std::log(1.0 / (2.0 * u)) / (theta * dim);
  const int k = static_cast<int>(std::floor(k_real));
  for (int cand : {k, k - 1, k + 1}) {
    if (cand < 0 || cand > k_max) continue;
    if (u > lower(cand) && u < upper(cand)) return cand;
  }
  return std::nullopt;  // below the bottom layer, or a boundary hit
}

ThinnedPair thin(const PointCloud& cloud, double eps, std::uint64_t salt,
                 bool origin_to_eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("thin: eps must be in (0,1)");

  const std::uint64_t key = rng::derive(rng::derive(cloud.seed, kTagThin), salt);
  // Exact integer threshold: keep = (prf < eps * 2^64).
  const double scaled = eps * 0x1.0p64;
  const std::uint64_t threshold =
      scaled >= 0x1.0p64 ? ~0ull : static_cast<std::uint64_t>(scaled);

  ThinnedPair out{{}, {}};
  for (PointCloud* part : {&out.eps_part, &out.rest_part}) {
    part->domain = cloud.domain;
    part->palm = false;
    part->seed = cloud.seed;
  }
  out.eps_part.lambda = cloud.lambda * eps;
  out.rest_part.lambda = cloud.lambda * (1.0 - eps);

  const int d = cloud.domain.dim;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    bool to_eps;
    if (cloud.palm && cloud.ids[i] == 0) {
      to_eps = origin_to_eps;
      (to_eps ? out.eps_part : out.rest_part).palm = true;
    } else {
      to_eps = rng::prf(key, cloud.ids[i]) < threshold;
    }
    PointCloud& part = to_eps ? out.eps_part : out.rest_part;
    part.ids.push_back(cloud.ids[i]);
    const auto p = cloud.position(i);
    part.positions.insert(part.positions.end(), p.begin(), p.end());
    part.marks.push_back(cloud.marks[i]);
    (void)d;
  }
  return out;
}

}  // namespace driftgraph
