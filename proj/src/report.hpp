#pragma once

#include <string>
#include <vector>

#include "bench.hpp"

namespace hdb {

// Deterministic payload of the report as canonical JSON text (sorted keys,
// shortest round-trip doubles). Two runs with the same config and build
// produce byte-identical payloads; the hash below is FNV-1a 64 over it.
std::string report_payload_json(const BenchmarkReport& report);
std::string payload_hash(const std::string& payload_json);

// Writes the report bundle:
//   <dir>/report.json            payload + meta (hash, timings)
//   <dir>/wb_records.csv         per-image white-box records
//   <dir>/bb_records.csv         per-image black-box records
//   <dir>/trajectories/{wb,bb}/<image_id>.csv
void write_report(const BenchmarkReport& report, const std::string& dir);

// Report loaded back from disk; records regain their trajectories when the
// trajectory files are present.
struct StoredReport {
  std::string model_label;
  double eta0 = 0.0;
  CurveOutcome whitebox;
  CurveOutcome blackbox;
  int grid_points = 50;
  long wb_budget = 0;
  long bb_queries = 0;
  TestSetSummary wb_records;
  TestSetSummary bb_records;
  bool has_wb_trajectories = false;
  bool has_bb_trajectories = false;
};
StoredReport read_report(const std::string& report_json_path);

// Plot-data emission: one scatter row per report and, per report and attack,
// a (budget, d_half) series recomputed from the stored trajectories.
// Missing trajectories skip the series with a warning in plot_manifest.json.
void emit_plot_data(const std::vector<StoredReport>& reports, const std::string& dir);

// records.csv + trajectories/ for a standalone attack run.
void write_attack_records(const TestSetSummary& records, const std::string& dir);

}  // namespace hdb
