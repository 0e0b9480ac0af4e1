#pragma once

// Marked Poisson point clouds: sampling (optionally with a distinguished
// origin vertex), mark layers, and independent thinning.

#include <cstdint>
#include <optional>
#include <vector>

#include "driftgraph/geometry.hpp"
#include "driftgraph/rng.hpp"

namespace driftgraph {

using VertexId = std::uint64_t;

// Struct-of-arrays cloud. Ids are stable for the lifetime of a run: thinned
// parts keep the original ids (and therefore the original motion streams and
// pair uniforms), which is what makes split processes couple correctly with
// the full one.
struct PointCloud {
  Domain domain;
  double lambda = 1.0;
  bool palm = false;
  std::uint64_t seed = 0;  // master seed this cloud was sampled under

  std::vector<VertexId> ids;
  std::vector<double> positions;  // flat, stride = domain.dim
  std::vector<double> marks;      // in (0,1), fixed for all time

  std::size_t size() const { return ids.size(); }
  std::span<const double> position(std::size_t index) const {
    return {positions.data() + index * domain.dim,
            static_cast<std::size_t>(domain.dim)};
  }
};

// Poisson cloud of the given intensity on the domain. Marks are iid
// uniform(0,1). With palm=true an extra vertex with id 0 sits exactly at the
// domain origin, carrying an independent uniform mark (or `pinned_origin_mark`
// when supplied, for reproducible worst-case studies).
PointCloud sample_ppp(const Domain& dom, double lambda, bool palm,
                      std::uint64_t seed,
                      std::optional<double> pinned_origin_mark = std::nullopt);

// Geometric mark layers. Layer k >= 0 covers marks in
// (exp(-(k+1)*theta*d)/2, exp(-k*theta*d)/2); layer -1 covers (1/2, 1).
// Layers are pairwise disjoint and indexed -1..k_max with
// k_max = floor(eps_theta * log(t_scale) / d).
struct MarkLayers {
  double theta = 0.6;
  double eps_theta = 0.1;
  double t_scale = 1.0;
  int dim = 1;
  int k_max = 0;

  MarkLayers(double theta, double eps_theta, double t_scale, int dim);

  double lower(int k) const;  // open interval bounds of layer k
  double upper(int k) const;
  double width(int k) const { return upper(k) - lower(k); }

  // Unique layer containing u, or nullopt when u lies below the bottom layer
  // or exactly on a boundary (a measure-zero event).
  std::optional<int> layer_of(double u) const;
};

// Independent thinning: every non-origin vertex joins the eps-part with
// probability eps, otherwise the complement part. Vertex id 0 of a palm cloud
// goes to the complement part unless origin_to_eps is set. The two parts
// partition the input and keep ids, positions, marks and seed.
struct ThinnedPair {
  PointCloud eps_part;
  PointCloud rest_part;
};
ThinnedPair thin(const PointCloud& cloud, double eps, std::uint64_t salt = 0,
                 bool origin_to_eps = false);

}  // namespace driftgraph
