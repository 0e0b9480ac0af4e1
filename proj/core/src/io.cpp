#include "driftgraph/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace driftgraph::io {

using nlohmann::json;

namespace {

json domain_to_json(const Domain& dom) {
  return {{"kind", dom.kind == DomainKind::Torus ? "torus" : "box"},
          {"dim", dom.dim},
          {"side", dom.side}};
}

Domain domain_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int dim = j.at("dim").get<int>();
  const double side = j.at("side").get<double>();
  Domain dom;
  dom.kind = kind == "torus" ? DomainKind::Torus : DomainKind::Box;
  dom.dim = dim;
  dom.side = side;
  return dom;
}

void write_header(std::ostream& os, const char* type, const PointCloud& cloud,
                  const Snapshot* snap) {
  json h = {{"type", type},
            {"domain", domain_to_json(cloud.domain)},
            {"lambda", cloud.lambda},
            {"palm", cloud.palm},
            {"seed", cloud.seed},
            {"n", cloud.size()}};
  if (snap) h["time"] = snap->time;
  os << h.dump() << '\n';
}

void write_vertices(std::ostream& os, const PointCloud& cloud,
                    const std::vector<double>* positions) {
  const int d = cloud.domain.dim;
  const std::vector<double>& pos = positions ? *positions : cloud.positions;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    json v = {{"id", cloud.ids[i]},
              {"pos", std::vector<double>(pos.begin() + i * d,
                                          pos.begin() + (i + 1) * d)},
              {"mark", cloud.marks[i]}};
    os << v.dump() << '\n';
  }
}

PointCloud cloud_from_header(const json& h) {
  PointCloud cloud;
  cloud.domain = domain_from_json(h.at("domain"));
  cloud.lambda = h.at("lambda").get<double>();
  cloud.palm = h.at("palm").get<bool>();
  cloud.seed = h.at("seed").get<std::uint64_t>();
  return cloud;
}

void append_vertex(PointCloud& cloud, const json& v) {
  cloud.ids.push_back(v.at("id").get<VertexId>());
  const auto pos = v.at("pos").get<std::vector<double>>();
  if (static_cast<int>(pos.size()) != cloud.domain.dim)
    throw std::invalid_argument("jsonl: vertex dimension mismatch");
  cloud.positions.insert(cloud.positions.end(), pos.begin(), pos.end());
  cloud.marks.push_back(v.at("mark").get<double>());
}

}  // namespace

void write_pointcloud_jsonl(std::ostream& os, const PointCloud& cloud) {
  write_header(os, "pointcloud", cloud, nullptr);
  write_vertices(os, cloud, nullptr);
}

PointCloud read_pointcloud_jsonl(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw std::invalid_argument("jsonl: missing header line");
  const json h = json::parse(line);
  PointCloud cloud = cloud_from_header(h);
  const auto n = h.at("n").get<std::size_t>();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(is, line))
      throw std::invalid_argument("jsonl: truncated vertex list");
    append_vertex(cloud, json::parse(line));
  }
  return cloud;
}

void write_snapshot_jsonl(std::ostream& os, const Snapshot& snap) {
  write_header(os, "snapshot", *snap.cloud, &snap);
  write_vertices(os, *snap.cloud, &snap.positions);
}

std::vector<LoadedSnapshot> read_snapshots_jsonl(std::istream& is) {
  std::vector<LoadedSnapshot> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json h = json::parse(line);
    LoadedSnapshot ls;
    ls.time = h.at("time").get<double>();
    ls.cloud = cloud_from_header(h);
    const auto n = h.at("n").get<std::size_t>();
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::getline(is, line))
        throw std::invalid_argument("jsonl: truncated snapshot");
      append_vertex(ls.cloud, json::parse(line));
    }
    out.push_back(std::move(ls));
  }
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void CsvWriter::comment(const std::string& text) { os_ << "# " << text << '\n'; }

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << cells[i];
  }
  os_ << '\n';
}

std::string cell(double x) { return format_double(x); }
std::string cell(std::uint64_t x) { return std::to_string(x); }
std::string cell(std::int64_t x) { return std::to_string(x); }
std::string cell(int x) { return std::to_string(x); }
std::string cell(const std::string& s) { return s; }

}  // namespace driftgraph::io
