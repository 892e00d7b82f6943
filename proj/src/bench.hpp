#pragma once

#include <map>
#include <memory>
#include <string>

#include "config.hpp"
#include "metrics.hpp"
#include "train.hpp"

namespace hdb {

struct CurveOutcome {
  bool ok = false;
  AccuracyCurve curve;
  std::string error;  // set when !ok
};

// Per-attack contract audit, refreshed on every benchmark run.
struct AuditResult {
  long recorded_cost = 0;   // sum of per-record costs
  long measured_calls = 0;  // gradient calls / queries seen by the wrapper
  bool accounting_exact = false;
  long noninteger_queries = 0;  // black-box only; must stay 0 in per_query mode
  int successes = 0;
  int reverified = 0;  // successes whose adversarial image re-verifies
  bool ok() const;
};

struct BenchmarkReport {
  int schema_version = 1;
  std::map<std::string, std::string> config_echo;
  std::string model_label;

  double eta0 = 0.0;
  int test_images = 0;
  int attacked = 0;
  int misclassified = 0;

  double train_holdout_accuracy = -1.0;  // < 0 when loaded from checkpoint
  bool train_converged = true;

  TestSetSummary wb_records;
  TestSetSummary bb_records;
  CurveOutcome whitebox;
  CurveOutcome blackbox;
  AuditResult wb_audit;
  AuditResult bb_audit;

  // wall clock, excluded from the deterministic payload
  double train_seconds = 0.0;
  double whitebox_seconds = 0.0;
  double blackbox_seconds = 0.0;
  double total_seconds = 0.0;
};

// Trains or loads the model, filters the test set to correctly classified
// images, runs both attacks per image, fits both curves and audits the
// realism contracts. Deterministic given (config, build): per-image attack
// seeds derive from (seed, image id) and aggregation is keyed by image id,
// so the worker pool size never changes results.
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg);

// Resolves the model the config describes (training or checkpoint load).
struct ModelHandle {
  std::shared_ptr<Classifier> model;
  std::string label;
  double holdout_accuracy = -1.0;
  bool converged = true;
};
ModelHandle resolve_model(const BenchmarkConfig& cfg);

// The benchmark's test set (synthetic classes interleaved, or PPM+labels).
std::vector<LabeledImage> resolve_test_set(const BenchmarkConfig& cfg,
                                           const Classifier& model);

// Runs one named attack over the correctly classified test subset.
//   "bp"       two-stage white-box attack at wb_budget gradient calls
//   "pgd"      best-effort PGD, steps = max(1, wb_budget / 20) per run
//   "boundary" decision-based black-box attack at bb_queries
TestSetSummary run_single_attack(const BenchmarkConfig& cfg, const std::string& attack);

}  // namespace hdb
