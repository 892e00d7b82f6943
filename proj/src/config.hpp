#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "blackbox.hpp"
#include "dataset.hpp"

namespace hdb {

// Full benchmark configuration. Defaults are the documented desk-scale
// setup; every key can come from a key=value config file or a CLI override.
struct BenchmarkConfig {
  // model source
  std::string model_source = "train";  // "train" | "checkpoint"
  std::string checkpoint_path;

  // training spec (model_source = "train")
  int classes = 2;
  int image_size = 16;
  int per_class = 200;
  std::uint64_t data_seed = 1;
  int train_epochs = 30;
  std::uint64_t train_seed = 1;
  bool adv_train = false;
  double adv_eps = 64.0;  // l2 radius, pixel levels
  int adv_pgd_steps = 10;

  // test set source
  std::string dataset_source = "synthetic";  // "synthetic" | "ppm"
  std::string ppm_dir;
  std::string label_file;
  int images = 200;
  std::uint64_t test_seed = 1001;

  // budgets and attack knobs
  int wb_budget = 200;
  long bb_queries = 5000;
  std::string bb_quantize = "per_query";  // "per_query" | "final"
  int grid_points = 50;
  int threads = 1;

  std::uint64_t seed = 1;
  std::string out_dir = "bench_out";

  BlackboxOptions blackbox_options() const;
  SyntheticDatasetSpec train_spec() const;
};

// Parses key=value text ('#' comments, blank lines allowed). Unknown keys,
// type mismatches and out-of-range values raise ErrorKind::config naming the
// key. The result starts from the defaults above.
BenchmarkConfig parse_config(const std::string& text);

// Applies a single key=value override (same validation as parse_config).
void apply_config_value(BenchmarkConfig& cfg, const std::string& key,
                        const std::string& value);

// Validated read of one key back out, as text (used by the C API and for the
// config echo in reports).
std::string config_get(const BenchmarkConfig& cfg, const std::string& key);

// All keys in documented order, with current values.
std::map<std::string, std::string> config_items(const BenchmarkConfig& cfg);

BenchmarkConfig load_config_file(const std::string& path);

}  // namespace hdb
