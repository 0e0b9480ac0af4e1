#pragma once

// Serialization: JSONL point clouds / snapshots and CSV emission helpers.

#include <iosfwd>
#include <string>
#include <vector>

#include "driftgraph/dynamics.hpp"
#include "driftgraph/point_process.hpp"

namespace driftgraph::io {

// One header line ({type, domain, lambda, palm, seed}) followed by one line
// per vertex ({id, pos, mark}). Doubles round-trip bit-exactly.
void write_pointcloud_jsonl(std::ostream& os, const PointCloud& cloud);
PointCloud read_pointcloud_jsonl(std::istream& is);

// Same layout with a `time` field in the header; positions are the
// snapshot's. Multiple snapshots may be concatenated in one stream.
void write_snapshot_jsonl(std::ostream& os, const Snapshot& snap);

struct LoadedSnapshot {
  double time = 0.0;
  PointCloud cloud;  // positions hold the snapshot coordinates
};
std::vector<LoadedSnapshot> read_snapshots_jsonl(std::istream& is);

// Shortest round-trip decimal form of a double (classic %.17g contract).
std::string format_double(double x);

// Minimal CSV writer: one comment line carrying run provenance, one header
// row, then data rows. All numeric formatting funnels through format_double
// so identical runs emit identical bytes.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void comment(const std::string& text);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
};

std::string cell(double x);
std::string cell(std::uint64_t x);
std::string cell(std::int64_t x);
std::string cell(int x);
std::string cell(const std::string& s);

}  // namespace driftgraph::io
