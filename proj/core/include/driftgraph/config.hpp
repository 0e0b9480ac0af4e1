#pragma once

// Run configuration: a flat-table key=value document plus CLI overrides.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftgraph/geometry.hpp"
#include "driftgraph/kernels.hpp"

namespace driftgraph {

// Parsed key=value document with [section] tables.
class ConfigDoc {
 public:
  static ConfigDoc parse(const std::string& text);
  static ConfigDoc parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;

  const std::map<std::string, std::map<std::string, std::string>>& tables() const {
    return tables_;
  }

 private:
  std::map<std::string, std::map<std::string, std::string>> tables_;
};

struct RunConfig {
  // [domain]
  DomainKind domain_kind = DomainKind::Torus;
  int dim = 1;
  double volume = 1024.0;  // torus volume, or box side^dim

  // [model]
  double lambda = 1.0;
  bool palm = true;
  std::optional<double> origin_mark;  // pin the origin's mark when set
  double theta = 0.55;
  double eps_theta = 0.1;

  // [kernel]
  kernels::KernelParams kernel;

  // [time]
  double dt_obs = 0.25;
  double t_max = 64.0;

  // [run]
  std::uint64_t seed = 1;
  int replicas = 1;
  int workers = 0;  // 0 = hardware concurrency
  std::string out_dir = "out";
  double trunc = 0.0;  // 0 = exact / auto policy

  // [broadcast]
  std::vector<double> broadcast_volumes = {256, 512, 1024};
  double eps_norm = 0.5;

  // [perc]
  double rho = 0.25;

  // [density]
  double density_cube = 128.0;
  double density_ell = 16.0;
  double density_alpha = 0.5;
  int density_steps = 64;
  double density_t_scale = 0.0;  // 0 = number of steps

  // [spread]
  double spread_k0 = 4096.0;
  int spread_levels = 3;   // K0, 4*K0, 16*K0, ...
  double spread_factor = 4.0;
  double spread_b = 0.1;
  int spread_replicas = 100;

  // [connector]
  std::vector<double> connector_u = {0.05, 0.1, 0.2};
  std::vector<double> connector_v = {0.05, 0.1, 0.2};
  std::vector<double> connector_r = {2.0, 5.0, 10.0};
  int connector_replicas = 1000;
  double connector_box_side = 64.0;

  // [membership]
  double membership_k0 = 64.0;
  int membership_levels = 3;
  int membership_replicas = 200;

  // [convergence]
  std::vector<double> convergence_dts = {1.0, 0.5, 0.25, 0.125};

  Domain domain() const;

  // Load from a document, then apply CLI-style overrides.
  static RunConfig from_doc(const ConfigDoc& doc);

  // Hard validation (throws std::invalid_argument) plus soft regime warnings.
  std::vector<std::string> validate() const;

  // Canonical serialization of everything that affects results (out_dir and
  // workers excluded), and its FNV-1a hash for output provenance lines.
  std::string canonical() const;
  std::uint64_t hash() const;
};

int resolve_workers(int requested);

}  // namespace driftgraph
