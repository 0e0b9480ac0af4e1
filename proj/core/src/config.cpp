#include "driftgraph/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "driftgraph/dynamics.hpp"
#include "driftgraph/io.hpp"

namespace driftgraph {

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

ConfigDoc ConfigDoc::parse(const std::string& text) {
  ConfigDoc doc;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    doc.tables_[section][key] = value;
  }
  return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool ConfigDoc::has(const std::string& section, const std::string& key) const {
  const auto s = tables_.find(section);
  return s != tables_.end() && s->second.count(key) > 0;
}

std::string ConfigDoc::get_string(const std::string& section,
                                  const std::string& key,
                                  const std::string& fallback) const {
  const auto s = tables_.find(section);
  if (s == tables_.end()) return fallback;
  const auto k = s->second.find(key);
  return k == s->second.end() ? fallback : k->second;
}

double ConfigDoc::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key, "");
  std::size_t used = 0;
  const double x = std::stod(v, &used);
  if (used != v.size())
    throw std::invalid_argument("config: bad number for " + section + "." + key);
  return x;
}

std::int64_t ConfigDoc::get_int(const std::string& section, const std::string& key,
                                std::int64_t fallback) const {
  if (!has(section, key)) return fallback;
  return static_cast<std::int64_t>(std::llround(get_double(section, key, 0.0)));
}

std::uint64_t ConfigDoc::get_u64(const std::string& section, const std::string& key,
                                 std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key, "");
  std::size_t used = 0;
  const std::uint64_t x = std::stoull(v, &used);
  if (used != v.size())
    throw std::invalid_argument("config: bad integer for " + section + "." + key);
  return x;
}

bool ConfigDoc::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key, "");
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("config: bad boolean for " + section + "." + key);
}

std::vector<double> ConfigDoc::get_list(const std::string& section,
                                        const std::string& key,
                                        const std::vector<double>& fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key, "");
  std::vector<double> out;
  std::istringstream is(v);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty())
    throw std::invalid_argument("config: empty list for " + section + "." + key);
  return out;
}

Domain RunConfig::domain() const {
  if (domain_kind == DomainKind::Torus) return Domain::torus(dim, volume);
  return Domain::box(dim, std::pow(volume, 1.0 / dim));
}

RunConfig RunConfig::from_doc(const ConfigDoc& doc) {
  RunConfig c;
  const std::string kind = doc.get_string("domain", "kind", "torus");
  if (kind == "torus")
    c.domain_kind = DomainKind::Torus;
  else if (kind == "box")
    c.domain_kind = DomainKind::Box;
  else
    throw std::invalid_argument("config: domain.kind must be torus or box");
  c.dim = static_cast<int>(doc.get_int("domain", "dim", c.dim));
  c.volume = doc.get_double("domain", "volume", c.volume);

  c.lambda = doc.get_double("model", "lambda", c.lambda);
  c.palm = doc.get_bool("model", "palm", c.palm);
  if (doc.has("model", "origin_mark"))
    c.origin_mark = doc.get_double("model", "origin_mark", 0.5);
  c.theta = doc.get_double("model", "theta", c.theta);
  c.eps_theta = doc.get_double("model", "eps_theta", c.eps_theta);

  c.kernel.variant = kernels::variant_from_string(
      doc.get_string("kernel", "variant", kernels::to_string(c.kernel.variant)));
  c.kernel.gamma = doc.get_double("kernel", "gamma", c.kernel.gamma);
  c.kernel.delta = doc.get_double("kernel", "delta", c.kernel.delta);
  c.kernel.alpha = doc.get_double("kernel", "alpha", c.kernel.alpha);
  c.kernel.kappa1 = doc.get_double("kernel", "kappa1", c.kernel.kappa1);
  c.kernel.beta = doc.get_double("kernel", "beta", c.kernel.beta);

  c.dt_obs = doc.get_double("time", "dt_obs", c.dt_obs);
  c.t_max = doc.get_double("time", "t_max", c.t_max);

  c.seed = doc.get_u64("run", "seed", c.seed);
  c.replicas = static_cast<int>(doc.get_int("run", "replicas", c.replicas));
  c.workers = static_cast<int>(doc.get_int("run", "workers", c.workers));
  c.out_dir = doc.get_string("run", "out", c.out_dir);
  c.trunc = doc.get_double("run", "trunc", c.trunc);

  c.broadcast_volumes = doc.get_list("broadcast", "volumes", c.broadcast_volumes);
  c.eps_norm = doc.get_double("broadcast", "eps_norm", c.eps_norm);

  c.rho = doc.get_double("perc", "rho", c.rho);

  c.density_cube = doc.get_double("density", "cube", c.density_cube);
  c.density_ell = doc.get_double("density", "ell", c.density_ell);
  c.density_alpha = doc.get_double("density", "alpha", c.density_alpha);
  c.density_steps = static_cast<int>(doc.get_int("density", "steps", c.density_steps));
  c.density_t_scale = doc.get_double("density", "t_scale", c.density_t_scale);

  c.spread_k0 = doc.get_double("spread", "k0", c.spread_k0);
  c.spread_levels = static_cast<int>(doc.get_int("spread", "levels", c.spread_levels));
  c.spread_factor = doc.get_double("spread", "factor", c.spread_factor);
  c.spread_b = doc.get_double("spread", "b", c.spread_b);
  c.spread_replicas =
      static_cast<int>(doc.get_int("spread", "replicas", c.spread_replicas));

  c.connector_u = doc.get_list("connector", "u", c.connector_u);
  c.connector_v = doc.get_list("connector", "v", c.connector_v);
  c.connector_r = doc.get_list("connector", "r", c.connector_r);
  c.connector_replicas =
      static_cast<int>(doc.get_int("connector", "replicas", c.connector_replicas));
  c.connector_box_side =
      doc.get_double("connector", "box_side", c.connector_box_side);

  c.membership_k0 = doc.get_double("membership", "k0", c.membership_k0);
  c.membership_levels =
      static_cast<int>(doc.get_int("membership", "levels", c.membership_levels));
  c.membership_replicas =
      static_cast<int>(doc.get_int("membership", "replicas", c.membership_replicas));

  c.convergence_dts = doc.get_list("convergence", "dts", c.convergence_dts);
  return c;
}

std::vector<std::string> RunConfig::validate() const {
  std::vector<std::string> warnings;
  if (dim < 1) throw std::invalid_argument("config: dim must be >= 1");
  if (!(volume > 0.0)) throw std::invalid_argument("config: volume must be > 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("config: lambda must be > 0");
  kernel.validate();
  if (origin_mark && !(*origin_mark > 0.0 && *origin_mark < 1.0))
    throw std::invalid_argument("config: origin_mark must be in (0,1)");
  if (!(dt_obs > 0.0) || !is_dyadic_time(dt_obs))
    throw std::invalid_argument(
        "config: dt_obs must be a positive dyadic rational (k * 2^-26)");
  if (!(t_max >= 0.0)) throw std::invalid_argument("config: t_max must be >= 0");
  if (replicas < 1) throw std::invalid_argument("config: replicas must be >= 1");
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("config: perc.rho must be in (0,1)");
  for (const double dt : convergence_dts)
    if (!(dt > 0.0) || !is_dyadic_time(dt))
      throw std::invalid_argument("config: convergence dts must be dyadic");

  if (!kernel.ultrasmall())
    warnings.push_back(
        "gamma <= delta/(delta+1): outside the ultrasmall regime both trend "
        "studies assume");
  const double theta_lo = std::log(2.0) / (kernel.gamma + kernel.gamma / kernel.delta);
  if (!(theta > theta_lo && theta < std::log(2.0)))
    warnings.push_back("theta outside (log2/(gamma+gamma/delta), log2); mark "
                       "layers lose their intended scaling");
  return warnings;
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  const auto d = [&](double x) { return io::format_double(x); };
  os << "domain.kind=" << (domain_kind == DomainKind::Torus ? "torus" : "box")
     << ";domain.dim=" << dim << ";domain.volume=" << d(volume)
     << ";model.lambda=" << d(lambda) << ";model.palm=" << palm
     << ";model.origin_mark=" << (origin_mark ? d(*origin_mark) : "none")
     << ";model.theta=" << d(theta) << ";model.eps_theta=" << d(eps_theta)
     << ";kernel.variant=" << kernels::to_string(kernel.variant)
     << ";kernel.gamma=" << d(kernel.gamma) << ";kernel.delta=" << d(kernel.delta)
     << ";kernel.alpha=" << d(kernel.alpha)
     << ";kernel.kappa1=" << d(kernel.kappa1) << ";kernel.beta=" << d(kernel.beta)
     << ";time.dt_obs=" << d(dt_obs) << ";time.t_max=" << d(t_max)
     << ";run.seed=" << seed << ";run.replicas=" << replicas
     << ";run.trunc=" << d(trunc) << ";broadcast.volumes=";
  for (const double v : broadcast_volumes) os << d(v) << ",";
  os << ";broadcast.eps_norm=" << d(eps_norm) << ";perc.rho=" << d(rho)
     << ";density=" << d(density_cube) << "," << d(density_ell) << ","
     << d(density_alpha) << "," << density_steps << "," << d(density_t_scale)
     << ";spread=" << d(spread_k0) << "," << spread_levels << ","
     << d(spread_factor) << "," << d(spread_b) << "," << spread_replicas
     << ";connector.u=";
  for (const double v : connector_u) os << d(v) << ",";
  os << ";connector.v=";
  for (const double v : connector_v) os << d(v) << ",";
  os << ";connector.r=";
  for (const double v : connector_r) os << d(v) << ",";
  os << ";connector.replicas=" << connector_replicas
     << ";connector.box_side=" << d(connector_box_side)
     << ";membership=" << d(membership_k0) << "," << membership_levels << ","
     << membership_replicas << ";convergence.dts=";
  for (const double v : convergence_dts) os << d(v) << ",";
  return os.str();
}

std::uint64_t RunConfig::hash() const {
  const std::string s = canonical();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char ch : s) h = (h ^ static_cast<unsigned char>(ch)) * 0x100000001b3ull;
  return h;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace driftgraph
