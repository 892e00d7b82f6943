#include "report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hdb {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json curve_json(const CurveOutcome& c) {
  json j;
  j["ok"] = c.ok;
  if (c.ok) {
    j["d_half"] = c.curve.d_half;
    j["lambda"] = c.curve.lambda;
    j["eta0_fit"] = c.curve.eta0;
    j["r2"] = c.curve.r2;
  } else {
    j["error"] = c.error;
  }
  return j;
}

CurveOutcome curve_from_json(const json& j) {
  CurveOutcome c;
  c.ok = j.at("ok").get<bool>();
  if (c.ok) {
    c.curve.d_half = j.at("d_half").get<double>();
    c.curve.lambda = j.at("lambda").get<double>();
    c.curve.eta0 = j.at("eta0_fit").get<double>();
    c.curve.r2 = j.at("r2").get<double>();
  } else {
    c.error = j.value("error", "");
  }
  return c;
}

json audit_json(const AuditResult& a) {
  return json{{"recorded_cost", a.recorded_cost},
              {"measured_calls", a.measured_calls},
              {"accounting_exact", a.accounting_exact},
              {"noninteger_queries", a.noninteger_queries},
              {"successes", a.successes},
              {"reverified", a.reverified},
              {"ok", a.ok()}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::internal, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::internal, "cannot read " + path.string());
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return s;
}

void write_trajectories(const TestSetSummary& records, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& r : records.records) {
    if (r.trajectory.empty()) continue;
    write_text(dir / (std::to_string(r.image_id) + ".csv"), trajectory_to_csv(r));
  }
}

bool load_trajectories(TestSetSummary& records, const fs::path& dir) {
  if (!fs::is_directory(dir)) return false;
  bool any = false;
  for (auto& r : records.records) {
    const fs::path p = dir / (std::to_string(r.image_id) + ".csv");
    if (!fs::exists(p)) continue;
    std::istringstream in(read_text(p));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto comma = line.find(',');
      if (comma == std::string::npos)
        throw Error(ErrorKind::internal, "trajectory csv: bad row in " + p.string());
      r.trajectory.push_back(TrajectoryPoint{std::stol(line.substr(0, comma)),
                                             std::stod(line.substr(comma + 1))});
    }
    any = true;
  }
  return any;
}

}  // namespace

std::string report_payload_json(const BenchmarkReport& report) {
  json payload;
  payload["schema_version"] = report.schema_version;
  payload["config"] = report.config_echo;
  payload["model_label"] = report.model_label;

  json results;
  results["eta0"] = report.eta0;
  results["counts"] = json{{"test_images", report.test_images},
                           {"attacked", report.attacked},
                           {"misclassified", report.misclassified}};
  if (report.train_holdout_accuracy >= 0.0)
    results["train"] = json{{"holdout_accuracy", report.train_holdout_accuracy},
                            {"converged", report.train_converged}};
  json wb = curve_json(report.whitebox);
  wb["records_csv"] = "wb_records.csv";
  wb["trajectories_dir"] = "trajectories/wb";
  json bb = curve_json(report.blackbox);
  bb["records_csv"] = "bb_records.csv";
  bb["trajectories_dir"] = "trajectories/bb";
  results["whitebox"] = wb;
  results["blackbox"] = bb;
  results["audits"] = json{{"whitebox", audit_json(report.wb_audit)},
                           {"blackbox", audit_json(report.bb_audit)}};
  payload["results"] = results;
  return payload.dump(2);
}

std::string payload_hash(const std::string& payload_json) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : payload_json) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_report(const BenchmarkReport& report, const std::string& dir) {
  fs::create_directories(dir);
  const std::string payload = report_payload_json(report);

  json doc;
  doc["payload"] = json::parse(payload);
  doc["meta"] = json{{"payload_hash", payload_hash(payload)},
                     {"timings",
                      json{{"train_seconds", report.train_seconds},
                           {"whitebox_seconds", report.whitebox_seconds},
                           {"blackbox_seconds", report.blackbox_seconds},
                           {"total_seconds", report.total_seconds}}}};
  write_text(fs::path(dir) / "report.json", doc.dump(2) + "\n");
  write_text(fs::path(dir) / "wb_records.csv", records_to_csv(report.wb_records));
  write_text(fs::path(dir) / "bb_records.csv", records_to_csv(report.bb_records));
  write_trajectories(report.wb_records, fs::path(dir) / "trajectories" / "wb");
  write_trajectories(report.bb_records, fs::path(dir) / "trajectories" / "bb");
}

StoredReport read_report(const std::string& report_json_path) {
  const fs::path path(report_json_path);
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::internal, std::string("report: bad JSON: ") + e.what());
  }
  const json& payload = doc.contains("payload") ? doc.at("payload") : doc;
  StoredReport out;
  try {
    out.model_label = payload.at("model_label").get<std::string>();
    const json& results = payload.at("results");
    out.eta0 = results.at("eta0").get<double>();
    out.whitebox = curve_from_json(results.at("whitebox"));
    out.blackbox = curve_from_json(results.at("blackbox"));
    const json& cfg = payload.at("config");
    out.grid_points = std::stoi(cfg.at("grid_points").get<std::string>());
    out.wb_budget = std::stol(cfg.at("wb_budget").get<std::string>());
    out.bb_queries = std::stol(cfg.at("bb_queries").get<std::string>());

    const fs::path dir = path.parent_path();
    const auto& wb = results.at("whitebox");
    const auto& bb = results.at("blackbox");
    out.wb_records =
        records_from_csv(read_text(dir / wb.at("records_csv").get<std::string>()));
    out.bb_records =
        records_from_csv(read_text(dir / bb.at("records_csv").get<std::string>()));
    out.has_wb_trajectories =
        load_trajectories(out.wb_records, dir / wb.at("trajectories_dir").get<std::string>());
    out.has_bb_trajectories =
        load_trajectories(out.bb_records, dir / bb.at("trajectories_dir").get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::internal, std::string("report: missing field: ") + e.what());
  }
  return out;
}

void write_attack_records(const TestSetSummary& records, const std::string& dir) {
  fs::create_directories(dir);
  write_text(fs::path(dir) / "records.csv", records_to_csv(records));
  write_trajectories(records, fs::path(dir) / "trajectories");
}

void emit_plot_data(const std::vector<StoredReport>& reports, const std::string& dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["files"] = json::array();
  manifest["warnings"] = json::array();

  char buf[64];
  std::string scatter = "model,d_half_whitebox,d_half_blackbox\n";
  for (const auto& r : reports) {
    if (!r.whitebox.ok || !r.blackbox.ok) {
      manifest["warnings"].push_back("scatter: skipped '" + r.model_label +
                                     "' (missing fitted curve)");
      continue;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g\n", r.whitebox.curve.d_half,
                  r.blackbox.curve.d_half);
    scatter += r.model_label + buf;
  }
  write_text(fs::path(dir) / "scatter.csv", scatter);
  manifest["files"].push_back("scatter.csv");

  auto budget_series = [&](const StoredReport& r, int index, bool blackbox) {
    const TestSetSummary& records = blackbox ? r.bb_records : r.wb_records;
    const bool have = blackbox ? r.has_bb_trajectories : r.has_wb_trajectories;
    const char* attack = blackbox ? "blackbox" : "whitebox";
    const std::string name =
        "budget_" + std::string(attack) + "_" + std::to_string(index) + ".csv";
    if (!have) {
      manifest["warnings"].push_back(std::string("budget series: skipped ") + attack +
                                     " for '" + r.model_label + "' (no trajectories)");
      return;
    }
    const long max_budget = blackbox ? r.bb_queries : r.wb_budget;
    std::string csv = "budget,d_half\n";
    int rows = 0;
    for (int i = 1; i <= 12; ++i) {
      const long b = max_budget * i / 12;
      if (b < 1) continue;
      try {
        AccuracyCurve c = curve_from_records(records_at_budget(records, b),
                                             std::vector<double>{});
        std::snprintf(buf, sizeof(buf), "%ld,%.17g\n", b, c.d_half);
        csv += buf;
        ++rows;
      } catch (const Error&) {
        manifest["warnings"].push_back(std::string("budget series: ") + attack + " '" +
                                       r.model_label + "': no fit at budget " +
                                       std::to_string(b));
      }
    }
    write_text(fs::path(dir) / name, csv);
    manifest["files"].push_back(name);
    (void)rows;
  };

  for (std::size_t i = 0; i < reports.size(); ++i) {
    budget_series(reports[i], static_cast<int>(i), false);
    budget_series(reports[i], static_cast<int>(i), true);
  }
  write_text(fs::path(dir) / "plot_manifest.json", manifest.dump(2) + "\n");
}

}  // namespace hdb
