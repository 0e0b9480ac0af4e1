#pragma once

// Diagnostics on snapshots: per-layer density checks, the evenly-spread
// subgraph construction, two-connector counts, membership experiments and
// Chernoff-bound helpers used to size test samples.

#include <cstdint>
#include <optional>
#include <vector>

#include "driftgraph/graph.hpp"
#include "driftgraph/point_process.hpp"

namespace driftgraph::analysis {

// ---------------------------------------------------------------------------
// Density: every subcube of side ell inside the cube [0, cube_side]^d must
// hold, in every mark layer k, at least (1-alpha) * lambda * |I_k| * ell^d
// vertices for the time to pass.
struct DensityReport {
  double cube_side = 0.0;
  double ell = 0.0;
  double alpha = 0.0;
  double lambda = 0.0;
  std::vector<double> layer_threshold;  // indexed k+1 for k = -1..k_max
  std::vector<double> times;
  std::vector<std::uint8_t> pass;
  double dense_fraction = 0.0;
};

DensityReport density_check(const std::vector<Snapshot>& snapshots,
                            double cube_side, double ell, double alpha,
                            const MarkLayers& layers);

// ---------------------------------------------------------------------------
// Evenly spread subgraph. The cube [0, K^(1/d)]^d is tessellated into nested
// boxes of side 2^k for k = 0..k_p, each level carrying its own mark window;
// the smallest-mark vertex of a non-empty box is its representative. The top
// level is chained along a snake path and every box is linked to its parent
// through a connector (a mark > 1/2 vertex adjacent to both representatives,
// each connector claimed at most once). Success requires
//   (a) at least b*K distinguished vertices, and
//   (b) every top-level box to carry a connected bottom vertex.
struct SpreadParams {
  double theta = 0.55;
  double eps_theta = 1.0;
  double b = 0.1;  // density constant in clause (a)
};

struct SpreadLink {
  std::uint32_t child_vertex;
  std::uint32_t connector;
  std::uint32_t parent_vertex;
  int level;  // level of the child box (the connector's box)
};

struct SpreadSubgraph {
  double cube_volume = 0.0;  // K
  int k_p = 0;
  std::int64_t n_p = 0;
  double covered_side = 0.0;  // n_p * 2^k_p, <= K^(1/d)
  bool success = false;
  bool clause_vertex_count = false;
  bool clause_bottom_cover = false;
  std::size_t total_boxes = 0;
  std::size_t good_boxes = 0;
  std::vector<std::uint32_t> distinguished;  // snapshot indices, all levels
  std::vector<std::uint32_t> bottom;         // top-level distinguished
  std::vector<SpreadLink> links;
};

SpreadSubgraph build_spread_subgraph(const Snapshot& snap, const EdgeOracle& orc,
                                     double cube_volume,
                                     const SpreadParams& params);

// Re-checks a reported subgraph from scratch: connector marks and adjacency,
// representative mark windows, bottom marks, connectivity of the link tree,
// and both success clauses. Returns false on the first violation.
bool verify_spread_subgraph(const Snapshot& snap, const EdgeOracle& orc,
                            const SpreadSubgraph& g, const SpreadParams& params);

// ---------------------------------------------------------------------------
// Two-connector statistics: vertices with mark > 1/2 adjacent to both i and j
// (whose marks must be < 1/2), plus the closed-form comparison bracket
// u^(-gamma) * (1 ^ v^(-gamma delta) (r + u^(-gamma/d))^(-d delta)).
struct TwoConnectorResult {
  std::uint64_t count = 0;
  double bracket = 0.0;
};
TwoConnectorResult two_connector_count(const EdgeOracle& orc,
                                       const Snapshot& snap, std::size_t i,
                                       std::size_t j);

// ---------------------------------------------------------------------------
// Membership experiments against a built spread subgraph.
struct MembershipResult {
  bool probe_in_component = false;   // probe shares a component with g1 at t1
  bool shared_vertex_exists = false; // some vertex joins g1 at t1 and g2 at t2
};
MembershipResult membership_experiment(const Snapshot& snap1,
                                       const Snapshot& snap2,
                                       const EdgeOracle& orc,
                                       const SpreadSubgraph& g1,
                                       const SpreadSubgraph& g2,
                                       std::size_t probe_index,
                                       std::size_t exact_limit = 65536);

// ---------------------------------------------------------------------------
// Chernoff bounds (test-sizing utilities).
struct PoissonChernoff {
  double lower_tail;  // P(P < (1-eps) lambda) bound: exp(-lambda eps^2 / 2)
  double upper_tail;  // P(P > (1+eps) lambda) bound: exp(-lambda eps^2 / 4)
};
PoissonChernoff chernoff_poisson(double lambda, double eps);

// P(B >= np + a) <= exp(a - (pn+a) log(1 + a/(pn)))
double chernoff_binomial(double n, double p, double a);

}  // namespace driftgraph::analysis
