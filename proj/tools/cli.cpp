#include "cli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "driftgraph/analysis.hpp"
#include "driftgraph/graph.hpp"
#include "driftgraph/io.hpp"
#include "driftgraph/propagation.hpp"
#include "driftgraph/runner.hpp"
#include "driftgraph/stats.hpp"

namespace driftgraph::cli {

namespace fs = std::filesystem;
using io::cell;

namespace {

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  const fs::path path = fs::path(cfg.out_dir) / name;
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open output file: " + path.string());
  return f;
}

std::string provenance(const RunConfig& cfg) {
  std::ostringstream os;
  os << "config_hash=" << std::hex << cfg.hash() << std::dec
     << " seed=" << cfg.seed;
  return os.str();
}

std::string opt_cell(const std::optional<double>& v) {
  return v ? io::format_double(*v) : std::string("none");
}

}  // namespace

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  }
}

std::vector<double> make_grid(double dt, double t_max) {
  if (!(dt > 0.0)) throw std::invalid_argument("make_grid: dt must be > 0");
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t > t_max + 1e-12) break;
    grid.push_back(t);
  }
  return grid;
}

double effective_trunc(const RunConfig& cfg, const PointCloud& cloud,
                       const EdgeOracle& orc) {
  if (cfg.trunc > 0.0) return cfg.trunc;
  const std::size_t n = cloud.size();
  if (n <= 2048) return 0.0;  // exact all-pairs path
  if (n <= 4096) {
    Evolver ev(cloud);
    return default_trunc_radius(orc, ev.at(0.0));
  }
  // Large N: smallest power-of-two radius whose expected long-edge pair count
  // stays near the vertex count (keeps the tail-pair lists small without
  // giving up exactness -- tail pairs are still enumerated and tested).
  const double target = std::max<double>(4.0 * static_cast<double>(n), 1e6);
  const double half_side = cloud.domain.side / 2.0;
  double trunc = 2.0;
  while (trunc < half_side) {
    const double expected_pairs = 0.5 * cloud.lambda * cloud.lambda *
                                  cloud.domain.volume() *
                                  kernels::mean_tail_degree_integral(orc.kernel, trunc);
    if (expected_pairs <= target) break;
    trunc *= 2.0;
  }
  return std::min(trunc, half_side);
}

// ---------------------------------------------------------------------------

int cmd_sample(const RunConfig& cfg) {
  return run_guarded([&] {
    const PointCloud cloud = sample_ppp(cfg.domain(), cfg.lambda, cfg.palm,
                                        cfg.seed, cfg.origin_mark);
    auto f = open_out(cfg, "sample.jsonl");
    io::write_pointcloud_jsonl(f, cloud);
  });
}

int cmd_evolve(const RunConfig& cfg) {
  return run_guarded([&] {
    const PointCloud cloud = sample_ppp(cfg.domain(), cfg.lambda, cfg.palm,
                                        cfg.seed, cfg.origin_mark);
    const EdgeOracle orc = make_edge_oracle(cfg.seed, cfg.kernel);
    const std::vector<double> grid = make_grid(cfg.dt_obs, cfg.t_max);

    auto snaps_file = open_out(cfg, "snapshots.jsonl");
    auto comp_file = open_out(cfg, "components.csv");
    io::CsvWriter csv(comp_file);
    csv.comment(provenance(cfg));
    csv.row({"time", "n", "num_components", "largest", "second_largest",
             "mean_degree"});

    const double trunc = effective_trunc(cfg, cloud, orc);
    Evolver ev(cloud);
    std::optional<TailPairs> tails;
    for (const double t : grid) {
      const Snapshot snap = ev.at(t);
      io::write_snapshot_jsonl(snaps_file, snap);
      ComponentLabels labels;
      if (trunc > 0.0) {
        if (!tails || tails->epoch != snap.epoch)
          tails = collect_tail_pairs(orc, cloud, snap.epoch, trunc);
        labels = components_fast_with_tails(orc, snap, trunc, *tails).labels;
      } else {
        labels = components_exact(orc, snap, 8192);
      }
      const DegreeStats deg = degree_stats(orc, snap);
      csv.row({cell(t), cell(snap.size()), cell(labels.num_components),
               cell(labels.largest_size), cell(labels.second_size),
               cell(deg.mean)});
    }
  });
}

// ---------------------------------------------------------------------------

namespace {

struct BroadcastRow {
  double volume;
  int replica;
  std::uint64_t seed;
  BroadcastTrace trace;
};

BroadcastRow broadcast_replica(const RunConfig& cfg, double volume, int replica,
                               double trunc) {
  const std::uint64_t seed =
      rng::derive(replica_seed(cfg.seed, static_cast<std::uint64_t>(replica)),
                  std::bit_cast<std::uint64_t>(volume));
  const PointCloud cloud = sample_ppp(Domain::torus(cfg.dim, volume), cfg.lambda,
                                      true, seed, cfg.origin_mark);
  const EdgeOracle orc = make_edge_oracle(seed, cfg.kernel);
  PropagationOptions opts;
  opts.trunc = cloud.size() <= 2048 ? 0.0 : trunc;
  opts.exact_limit = 1 << 22;
  return {volume, replica, seed,
          run_broadcast(cloud, orc, make_grid(cfg.dt_obs, cfg.t_max), opts)};
}

std::string volume_tag(double v) {
  std::string s = io::format_double(v);
  for (char& ch : s)
    if (ch == '.') ch = '_';
  return s;
}

double norm_loglog(double t, double n, double eps) {
  return t / (std::log(n) * std::pow(std::log(std::log(n)), eps));
}

}  // namespace

int cmd_broadcast_scaling(const RunConfig& cfg) {
  return run_guarded([&] {
    std::vector<std::pair<double, int>> tasks;
    for (const double n : cfg.broadcast_volumes)
      for (int r = 0; r < cfg.replicas; ++r) tasks.emplace_back(n, r);

    // One truncation radius per volume (identical across replicas).
    std::map<double, double> trunc_by_volume;
    for (const double n : cfg.broadcast_volumes) {
      const PointCloud probe = sample_ppp(Domain::torus(cfg.dim, n), cfg.lambda,
                                          true, cfg.seed, cfg.origin_mark);
      const EdgeOracle orc = make_edge_oracle(cfg.seed, cfg.kernel);
      trunc_by_volume[n] = effective_trunc(cfg, probe, orc);
    }

    const auto rows = parallel_map<BroadcastRow>(
        resolve_workers(cfg.workers), tasks.size(), [&](std::size_t i) {
          const auto& [n, r] = tasks[i];
          return broadcast_replica(cfg, n, r, trunc_by_volume.at(n));
        });

    auto raw = open_out(cfg, "broadcast_scaling.csv");
    io::CsvWriter csv(raw);
    csv.comment(provenance(cfg));
    csv.row({"volume", "replica", "seed", "n_vertices", "t_bc", "t_bc_norm"});
    for (const BroadcastRow& row : rows) {
      csv.row({cell(row.volume), cell(row.replica), cell(row.seed),
               cell(row.trace.n_vertices), opt_cell(row.trace.t_bc),
               row.trace.t_bc
                   ? cell(norm_loglog(*row.trace.t_bc, row.volume, cfg.eps_norm))
                   : std::string("none")});
    }

    // per-volume informed-set traces
    for (const double n : cfg.broadcast_volumes) {
      auto tf = open_out(cfg, "broadcast_trace_" + volume_tag(n) + ".csv");
      io::CsvWriter tcsv(tf);
      tcsv.comment(provenance(cfg));
      tcsv.row({"replica", "time", "informed", "n", "t_bc"});
      for (const BroadcastRow& row : rows) {
        if (row.volume != n) continue;
        for (std::size_t k = 0; k < row.trace.times.size(); ++k)
          tcsv.row({cell(row.replica), cell(row.trace.times[k]),
                    cell(row.trace.informed[k]), cell(row.trace.n_vertices),
                    opt_cell(row.trace.t_bc)});
      }
    }

    auto summary = open_out(cfg, "broadcast_scaling_summary.csv");
    io::CsvWriter scsv(summary);
    scsv.comment(provenance(cfg));
    scsv.row({"volume", "replicas", "reached", "median_t_bc", "median_norm",
              "median_over_n02"});
    for (const double n : cfg.broadcast_volumes) {
      std::vector<double> reached;
      for (const BroadcastRow& row : rows)
        if (row.volume == n && row.trace.t_bc) reached.push_back(*row.trace.t_bc);
      if (reached.empty()) {
        scsv.row({cell(n), cell(cfg.replicas), cell(0), "none", "none", "none"});
        continue;
      }
      const double med = stats::median(reached);
      scsv.row({cell(n), cell(cfg.replicas), cell(reached.size()), cell(med),
                cell(norm_loglog(med, n, cfg.eps_norm)),
                cell(med / std::pow(n, 0.2))});
    }
  });
}

// ---------------------------------------------------------------------------

namespace {

struct PercRow {
  int replica;
  std::uint64_t seed;
  PercTrace trace;
};

}  // namespace

int cmd_perc_tail(const RunConfig& cfg) {
  return run_guarded([&] {
    if (cfg.domain_kind != DomainKind::Box)
      throw std::invalid_argument("perc-tail: domain.kind must be box");
    const std::vector<double> grid = make_grid(cfg.dt_obs, cfg.t_max);

    const auto rows = parallel_map<PercRow>(
        resolve_workers(cfg.workers), static_cast<std::size_t>(cfg.replicas),
        [&](std::size_t r) {
          const std::uint64_t seed = replica_seed(cfg.seed, r);
          const PointCloud cloud =
              sample_ppp(cfg.domain(), cfg.lambda, true, seed, cfg.origin_mark);
          const EdgeOracle orc = make_edge_oracle(seed, cfg.kernel);
          PropagationOptions opts;
          opts.exact_limit = 1 << 22;
          return PercRow{static_cast<int>(r), seed,
                         run_percolation_proxy(cloud, orc, grid, cfg.rho, opts)};
        });

    auto raw = open_out(cfg, "perc_tail.csv");
    io::CsvWriter csv(raw);
    csv.comment(provenance(cfg));
    csv.row({"replica", "time", "origin_comp", "giant", "t_perc_proxy"});
    for (const PercRow& row : rows)
      for (std::size_t k = 0; k < row.trace.times.size(); ++k)
        csv.row({cell(row.replica), cell(row.trace.times[k]),
                 cell(row.trace.origin_comp[k]), cell(row.trace.giant[k]),
                 opt_cell(row.trace.t_perc)});

    // Survival estimate over the full grid: P(T > t), never-percolated
    // replicas count as T = infinity.
    auto surv = open_out(cfg, "perc_survival.csv");
    io::CsvWriter scsv(surv);
    scsv.comment(provenance(cfg));
    scsv.row({"time", "survival", "replicas"});
    // Points entering the fits need t > 0, an interior estimate, and at
    // least five surviving replicas (below that the log-log transform is
    // dominated by estimator noise).
    std::vector<double> fit_t, fit_s;
    for (const double t : grid) {
      std::size_t alive = 0;
      for (const PercRow& row : rows)
        if (!row.trace.t_perc || *row.trace.t_perc > t) ++alive;
      const double s = static_cast<double>(alive) / static_cast<double>(rows.size());
      scsv.row({cell(t), cell(s), cell(rows.size())});
      if (t > 0.0 && s < 1.0 && alive >= 5) {
        fit_t.push_back(t);
        fit_s.push_back(s);
      }
    }

    auto fits = open_out(cfg, "perc_fits.csv");
    io::CsvWriter fcsv(fits);
    fcsv.comment(provenance(cfg));
    fcsv.row({"model", "intercept", "slope", "sse_log_survival", "points"});
    if (fit_t.size() >= 3) {
      std::vector<double> lt, llnegs, ls;
      for (std::size_t i = 0; i < fit_t.size(); ++i) {
        lt.push_back(std::log(fit_t[i]));
        llnegs.push_back(std::log(-std::log(fit_s[i])));
        ls.push_back(std::log(fit_s[i]));
      }
      // stretched exponential: log(-log S) linear in log t
      const stats::LineFit st = stats::fit_line(lt, llnegs);
      double sse_st = 0.0;
      for (std::size_t i = 0; i < lt.size(); ++i) {
        const double pred = -std::exp(st.intercept + st.slope * lt[i]);
        sse_st += (ls[i] - pred) * (ls[i] - pred);
      }
      // power law: log S linear in log t
      const stats::LineFit pw = stats::fit_line(lt, ls);
      fcsv.row({"stretched_exponential", cell(st.intercept), cell(st.slope),
                cell(sse_st), cell(lt.size())});
      fcsv.row({"power_law", cell(pw.intercept), cell(pw.slope),
                cell(pw.residual_sse), cell(lt.size())});
    }
  });
}

// ---------------------------------------------------------------------------

namespace {

struct SpreadRow {
  double K;
  int replica;
  bool success;
  bool clause_a;
  bool clause_b;
  std::size_t distinguished;
  std::size_t good_boxes;
  std::size_t links;
  bool verified;
};

SpreadRow spread_replica(const RunConfig& cfg, double K, int replica) {
  const std::uint64_t seed =
      rng::derive(replica_seed(cfg.seed, static_cast<std::uint64_t>(replica)),
                  std::bit_cast<std::uint64_t>(K));
  const int d = cfg.dim;
  const PointCloud cloud = sample_ppp(Domain::box(d, std::pow(K, 1.0 / d)),
                                      cfg.lambda, false, seed);
  const EdgeOracle orc = make_edge_oracle(seed, cfg.kernel);
  Evolver ev(cloud);
  const Snapshot snap = ev.at(0.0);
  analysis::SpreadParams params{cfg.theta, cfg.eps_theta, cfg.spread_b};
  const analysis::SpreadSubgraph g =
      analysis::build_spread_subgraph(snap, orc, K, params);
  const bool verified =
      !g.success || analysis::verify_spread_subgraph(snap, orc, g, params);
  return {K,
          replica,
          g.success,
          g.clause_vertex_count,
          g.clause_bottom_cover,
          g.distinguished.size(),
          g.good_boxes,
          g.links.size(),
          verified};
}

}  // namespace

int cmd_diagnose(const RunConfig& cfg) {
  return run_guarded([&] {
    const int workers = resolve_workers(cfg.workers);

    // --- density -----------------------------------------------------------
    {
      const PointCloud cloud =
          sample_ppp(cfg.domain(), cfg.lambda, false, cfg.seed);
      const double t_scale = cfg.density_t_scale > 0.0
                                 ? cfg.density_t_scale
                                 : static_cast<double>(cfg.density_steps);
      const MarkLayers layers(cfg.theta, cfg.eps_theta, t_scale, cfg.dim);
      std::vector<double> grid;
      for (int k = 0; k < cfg.density_steps; ++k) grid.push_back(k);
      const std::vector<Snapshot> snaps = evolve(cloud, grid);
      const analysis::DensityReport report = analysis::density_check(
          snaps, cfg.density_cube, cfg.density_ell, cfg.density_alpha, layers);

      nlohmann::json j;
      j["config_hash"] = cfg.hash();
      j["seed"] = cfg.seed;
      j["cube_side"] = report.cube_side;
      j["ell"] = report.ell;
      j["alpha"] = report.alpha;
      j["lambda"] = report.lambda;
      j["layer_thresholds"] = report.layer_threshold;
      j["dense_fraction"] = report.dense_fraction;
      j["times"] = report.times;
      std::vector<int> pass(report.pass.begin(), report.pass.end());
      j["pass"] = pass;
      auto f = open_out(cfg, "density_report.json");
      f << j.dump(2) << '\n';
    }

    // --- evenly spread subgraphs -------------------------------------------
    {
      std::vector<std::pair<double, int>> tasks;
      for (int lvl = 0; lvl < cfg.spread_levels; ++lvl) {
        const double K = cfg.spread_k0 * std::pow(cfg.spread_factor, lvl);
        for (int r = 0; r < cfg.spread_replicas; ++r) tasks.emplace_back(K, r);
      }
      const auto rows = parallel_map<SpreadRow>(
          workers, tasks.size(), [&](std::size_t i) {
            return spread_replica(cfg, tasks[i].first, tasks[i].second);
          });

      auto raw = open_out(cfg, "spread.csv");
      io::CsvWriter csv(raw);
      csv.comment(provenance(cfg));
      csv.row({"K", "replica", "success", "clause_vertex_count",
               "clause_bottom_cover", "distinguished", "good_boxes", "links",
               "verified"});
      for (const SpreadRow& row : rows)
        csv.row({cell(row.K), cell(row.replica), cell(static_cast<int>(row.success)),
                 cell(static_cast<int>(row.clause_a)),
                 cell(static_cast<int>(row.clause_b)), cell(row.distinguished),
                 cell(row.good_boxes), cell(row.links),
                 cell(static_cast<int>(row.verified))});

      auto summary = open_out(cfg, "spread_summary.csv");
      io::CsvWriter scsv(summary);
      scsv.comment(provenance(cfg));
      scsv.row({"K", "replicas", "success_fraction", "all_verified"});
      for (int lvl = 0; lvl < cfg.spread_levels; ++lvl) {
        const double K = cfg.spread_k0 * std::pow(cfg.spread_factor, lvl);
        std::size_t succ = 0, verified = 0, total = 0;
        for (const SpreadRow& row : rows)
          if (row.K == K) {
            ++total;
            succ += row.success;
            verified += row.verified;
          }
        scsv.row({cell(K), cell(total),
                  cell(static_cast<double>(succ) / static_cast<double>(total)),
                  cell(static_cast<int>(verified == total))});
      }
    }

    // --- two-connector counts ----------------------------------------------
    {
      struct Cfg3 {
        double u, v, r;
      };
      std::vector<Cfg3> grid3;
      for (const double u : cfg.connector_u)
        for (const double v : cfg.connector_v)
          for (const double r : cfg.connector_r) grid3.push_back({u, v, r});

      struct ConnAgg {
        double u, v, r, mean, var, dispersion, bracket, ratio;
      };
      const auto aggs = parallel_map<ConnAgg>(
          workers, grid3.size(), [&](std::size_t gi) {
            const auto [u, v, r] = grid3[gi];
            std::vector<double> counts;
            double bracket = 0.0;
            for (int rep = 0; rep < cfg.connector_replicas; ++rep) {
              const std::uint64_t seed = rng::derive(
                  replica_seed(cfg.seed, static_cast<std::uint64_t>(rep)),
                  rng::derive(std::bit_cast<std::uint64_t>(u * 1e6 + v * 1e3),
                              std::bit_cast<std::uint64_t>(r)));
              PointCloud cloud = sample_ppp(Domain::box(cfg.dim, cfg.connector_box_side),
                                            cfg.lambda, false, seed);
              // pin the probe pair around the box centre
              const double c = cfg.connector_box_side / 2.0;
              const VertexId base = cloud.size();
              cloud.ids.push_back(base);
              cloud.ids.push_back(base + 1);
              for (int a = 0; a < cfg.dim; ++a)
                cloud.positions.push_back(a == 0 ? c - r / 2.0 : c);
              for (int a = 0; a < cfg.dim; ++a)
                cloud.positions.push_back(a == 0 ? c + r / 2.0 : c);
              cloud.marks.push_back(u);
              cloud.marks.push_back(v);
              // ids must stay unique: reassign ids sequentially
              for (std::size_t i = 0; i < cloud.ids.size(); ++i) cloud.ids[i] = i;

              const EdgeOracle orc = make_edge_oracle(seed, cfg.kernel);
              Evolver ev(cloud);
              const Snapshot snap = ev.at(0.0);
              const auto res = analysis::two_connector_count(
                  orc, snap, cloud.size() - 2, cloud.size() - 1);
              counts.push_back(static_cast<double>(res.count));
              bracket = res.bracket;
            }
            const double m = stats::mean(counts);
            const double var = stats::variance(counts);
            return ConnAgg{u,   v,   r,       m, var, m > 0.0 ? var / m : 0.0,
                           bracket, m / bracket};
          });

      auto f = open_out(cfg, "connectors.csv");
      io::CsvWriter csv(f);
      csv.comment(provenance(cfg));
      csv.row({"u", "v", "r", "replicas", "mean", "variance", "dispersion",
               "bracket", "mean_over_bracket"});
      double fitted_c = std::numeric_limits<double>::infinity();
      for (const ConnAgg& a : aggs) {
        csv.row({cell(a.u), cell(a.v), cell(a.r), cell(cfg.connector_replicas),
                 cell(a.mean), cell(a.var), cell(a.dispersion), cell(a.bracket),
                 cell(a.ratio)});
        fitted_c = std::min(fitted_c, a.ratio);
      }
      csv.comment("fitted_c=" + io::format_double(fitted_c));
    }

    // --- membership ----------------------------------------------------------
    {
      struct MemRow {
        double K;
        int replica;
        bool spreads_ok;
        bool probe_member;
        bool shared_vertex;
      };
      std::vector<std::pair<double, int>> tasks;
      for (int lvl = 0; lvl < cfg.membership_levels; ++lvl) {
        const double K = cfg.membership_k0 * std::pow(cfg.spread_factor, lvl);
        for (int r = 0; r < cfg.membership_replicas; ++r) tasks.emplace_back(K, r);
      }
      const auto rows = parallel_map<MemRow>(
          workers, tasks.size(), [&](std::size_t i) {
            const auto [K, rep] = tasks[i];
            const std::uint64_t seed = rng::derive(
                replica_seed(cfg.seed, static_cast<std::uint64_t>(rep)),
                std::bit_cast<std::uint64_t>(K) ^ rng::tag("membership"));
            const PointCloud cloud =
                sample_ppp(Domain::box(cfg.dim, std::pow(K, 1.0 / cfg.dim)),
                           cfg.lambda, true, seed, cfg.origin_mark);
            const EdgeOracle orc = make_edge_oracle(seed, cfg.kernel);
            Evolver ev(cloud);
            const Snapshot s1 = ev.at(0.0);
            const Snapshot s2 = ev.at(1.0);
            analysis::SpreadParams params{cfg.theta, cfg.eps_theta, cfg.spread_b};
            const auto g1 = analysis::build_spread_subgraph(s1, orc, K, params);
            const auto g2 = analysis::build_spread_subgraph(s2, orc, K, params);
            MemRow row{K, rep, g1.success && g2.success, false, false};
            if (row.spreads_ok) {
              std::size_t origin = 0;
              for (std::size_t v = 0; v < cloud.size(); ++v)
                if (cloud.ids[v] == 0) origin = v;
              const auto res = analysis::membership_experiment(s1, s2, orc, g1,
                                                               g2, origin);
              row.probe_member = res.probe_in_component;
              row.shared_vertex = res.shared_vertex_exists;
            }
            return row;
          });

      auto f = open_out(cfg, "membership.csv");
      io::CsvWriter csv(f);
      csv.comment(provenance(cfg));
      csv.row({"K", "replica", "spreads_ok", "probe_member", "shared_vertex"});
      for (const MemRow& row : rows)
        csv.row({cell(row.K), cell(row.replica),
                 cell(static_cast<int>(row.spreads_ok)),
                 cell(static_cast<int>(row.probe_member)),
                 cell(static_cast<int>(row.shared_vertex))});
    }
  });
}

// ---------------------------------------------------------------------------

int cmd_convergence(const RunConfig& cfg) {
  return run_guarded([&] {
    std::vector<double> dts = cfg.convergence_dts;
    if (!std::is_sorted(dts.rbegin(), dts.rend()))
      throw std::invalid_argument("convergence: dt list must be decreasing");

    struct Task {
      int replica;
      std::size_t dt_index;
    };
    std::vector<Task> tasks;
    for (int r = 0; r < cfg.replicas; ++r)
      for (std::size_t di = 0; di < dts.size(); ++di) tasks.push_back({r, di});

    struct Row {
      int replica;
      double dt;
      std::optional<double> t_bc;
    };
    const auto rows = parallel_map<Row>(
        resolve_workers(cfg.workers), tasks.size(), [&](std::size_t i) {
          const auto [r, di] = tasks[i];
          const std::uint64_t seed =
              replica_seed(cfg.seed, static_cast<std::uint64_t>(r));
          const PointCloud cloud = sample_ppp(Domain::torus(cfg.dim, cfg.volume),
                                              cfg.lambda, true, seed,
                                              cfg.origin_mark);
          const EdgeOracle orc = make_edge_oracle(seed, cfg.kernel);
          PropagationOptions opts;
          opts.exact_limit = 1 << 22;
          const BroadcastTrace trace =
              run_broadcast(cloud, orc, make_grid(dts[di], cfg.t_max), opts);
          return Row{r, dts[di], trace.t_bc};
        });

    auto f = open_out(cfg, "convergence.csv");
    io::CsvWriter csv(f);
    csv.comment(provenance(cfg));
    csv.row({"dt", "replica", "t_bc", "monotone_ok"});
    // refinement on the same seed must never increase t_bc
    std::map<int, double> prev;
    for (const Row& row : rows) {
      bool ok = true;
      const auto it = prev.find(row.replica);
      if (it != prev.end() && row.t_bc && it->second < *row.t_bc) ok = false;
      if (row.t_bc) prev[row.replica] = *row.t_bc;
      csv.row({cell(row.dt), cell(row.replica), opt_cell(row.t_bc),
               cell(static_cast<int>(ok))});
    }

    auto s = open_out(cfg, "convergence_summary.csv");
    io::CsvWriter scsv(s);
    scsv.comment(provenance(cfg));
    scsv.row({"dt", "median_t_bc"});
    for (const double dt : dts) {
      std::vector<double> vals;
      for (const Row& row : rows)
        if (row.dt == dt && row.t_bc) vals.push_back(*row.t_bc);
      scsv.row({cell(dt), vals.empty() ? std::string("none")
                                       : cell(stats::median(vals))});
    }
  });
}

}  // namespace driftgraph::cli
