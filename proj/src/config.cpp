#include "config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace hdb {

namespace {

long long parse_int(const std::string& key, const std::string& value,
                    long long lo, long long hi) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorKind::config, "config: key '" + key + "' expects an integer, got '" + value + "'");
  if (v < lo || v > hi)
    throw Error(ErrorKind::config, "config: key '" + key + "' out of range: " + value);
  return v;
}

double parse_real(const std::string& key, const std::string& value, double lo) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    if (v < lo)
      throw Error(ErrorKind::config, "config: key '" + key + "' out of range: " + value);
    return v;
  } catch (const Error&) {
    throw;
  } catch (...) {
    throw Error(ErrorKind::config, "config: key '" + key + "' expects a number, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw Error(ErrorKind::config, "config: key '" + key + "' expects 0/1, got '" + value + "'");
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void apply_config_value(BenchmarkConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "model") {
    if (value != "train" && value != "checkpoint")
      throw Error(ErrorKind::config, "config: key 'model' must be train|checkpoint");
    cfg.model_source = value;
  } else if (key == "checkpoint_path") {
    cfg.checkpoint_path = value;
  } else if (key == "classes") {
    cfg.classes = static_cast<int>(parse_int(key, value, 1, 8));
  } else if (key == "image_size") {
    cfg.image_size = static_cast<int>(parse_int(key, value, 4, 512));
  } else if (key == "per_class") {
    cfg.per_class = static_cast<int>(parse_int(key, value, 1, 100000));
  } else if (key == "data_seed") {
    cfg.data_seed = static_cast<std::uint64_t>(parse_int(key, value, 0, INT64_MAX));
  } else if (key == "train_epochs") {
    cfg.train_epochs = static_cast<int>(parse_int(key, value, 1, 100000));
  } else if (key == "train_seed") {
    cfg.train_seed = static_cast<std::uint64_t>(parse_int(key, value, 0, INT64_MAX));
  } else if (key == "adv_train") {
    cfg.adv_train = parse_bool(key, value);
  } else if (key == "adv_eps") {
    cfg.adv_eps = parse_real(key, value, 0.0);
  } else if (key == "adv_pgd_steps") {
    cfg.adv_pgd_steps = static_cast<int>(parse_int(key, value, 0, 10000));
  } else if (key == "dataset") {
    if (value != "synthetic" && value != "ppm")
      throw Error(ErrorKind::config, "config: key 'dataset' must be synthetic|ppm");
    cfg.dataset_source = value;
  } else if (key == "ppm_dir") {
    cfg.ppm_dir = value;
  } else if (key == "labels") {
    cfg.label_file = value;
  } else if (key == "images") {
    cfg.images = static_cast<int>(parse_int(key, value, 1, 1000000));
  } else if (key == "test_seed") {
    cfg.test_seed = static_cast<std::uint64_t>(parse_int(key, value, 0, INT64_MAX));
  } else if (key == "wb_budget") {
    cfg.wb_budget = static_cast<int>(parse_int(key, value, 2, 100000000));
  } else if (key == "bb_queries") {
    cfg.bb_queries = parse_int(key, value, 1, 1000000000);
  } else if (key == "bb_quantize") {
    if (value != "per_query" && value != "final")
      throw Error(ErrorKind::config, "config: key 'bb_quantize' must be per_query|final");
    cfg.bb_quantize = value;
  } else if (key == "grid_points") {
    cfg.grid_points = static_cast<int>(parse_int(key, value, 3, 100000));
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(parse_int(key, value, 0, 1024));
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(parse_int(key, value, 0, INT64_MAX));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else {
    throw Error(ErrorKind::config, "config: unknown key '" + key + "'");
  }
}

BenchmarkConfig parse_config(const std::string& text) {
  BenchmarkConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::config,
                  "config: line " + std::to_string(lineno) + " is not key=value: '" + t + "'");
    apply_config_value(cfg, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return cfg;
}

BenchmarkConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::map<std::string, std::string> config_items(const BenchmarkConfig& cfg) {
  std::map<std::string, std::string> items;
  items["model"] = cfg.model_source;
  items["checkpoint_path"] = cfg.checkpoint_path;
  items["classes"] = std::to_string(cfg.classes);
  items["image_size"] = std::to_string(cfg.image_size);
  items["per_class"] = std::to_string(cfg.per_class);
  items["data_seed"] = std::to_string(cfg.data_seed);
  items["train_epochs"] = std::to_string(cfg.train_epochs);
  items["train_seed"] = std::to_string(cfg.train_seed);
  items["adv_train"] = cfg.adv_train ? "1" : "0";
  {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", cfg.adv_eps);
    items["adv_eps"] = buf;
  }
  items["adv_pgd_steps"] = std::to_string(cfg.adv_pgd_steps);
  items["dataset"] = cfg.dataset_source;
  items["ppm_dir"] = cfg.ppm_dir;
  items["labels"] = cfg.label_file;
  items["images"] = std::to_string(cfg.images);
  items["test_seed"] = std::to_string(cfg.test_seed);
  items["wb_budget"] = std::to_string(cfg.wb_budget);
  items["bb_queries"] = std::to_string(cfg.bb_queries);
  items["bb_quantize"] = cfg.bb_quantize;
  items["grid_points"] = std::to_string(cfg.grid_points);
  items["threads"] = std::to_string(cfg.threads);
  items["seed"] = std::to_string(cfg.seed);
  items["out"] = cfg.out_dir;
  return items;
}

std::string config_get(const BenchmarkConfig& cfg, const std::string& key) {
  auto items = config_items(cfg);
  auto it = items.find(key);
  if (it == items.end())
    throw Error(ErrorKind::config, "config: unknown key '" + key + "'");
  return it->second;
}

BlackboxOptions BenchmarkConfig::blackbox_options() const {
  BlackboxOptions opts;
  opts.max_queries = bb_queries;
  opts.policy = bb_quantize == "per_query" ? BbQuantizePolicy::per_query
                                           : BbQuantizePolicy::final_only;
  return opts;
}

SyntheticDatasetSpec BenchmarkConfig::train_spec() const {
  SyntheticDatasetSpec spec;
  spec.classes = classes;
  spec.image_size = image_size;
  spec.per_class = per_class;
  spec.seed = data_seed;
  return spec;
}

}  // namespace hdb
