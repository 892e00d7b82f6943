#include "bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "blackbox.hpp"
#include "checkpoint.hpp"
#include "whitebox.hpp"

namespace hdb {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Forwarding classifier that counts calls and, when asked, verifies that
// every inference input is an integer image on the 0-255 scale. This is the
// independent side of the accounting/realism audit: attacks keep their own
// counters, the wrapper measures what the model actually saw.
class AuditingClassifier : public Classifier {
 public:
  AuditingClassifier(const Classifier& inner, bool check_integer)
      : inner_(inner), check_integer_(check_integer) {}

  int num_classes() const override { return inner_.num_classes(); }
  int input_width() const override { return inner_.input_width(); }
  int input_height() const override { return inner_.input_height(); }

  std::vector<double> logits(const ContinuousImage& x) const override {
    ++forward_calls_;
    if (check_integer_ && !is_integer_image(x)) ++noninteger_inputs_;
    return inner_.logits(x);
  }

  ValueGrad margin_with_grad(const ContinuousImage& x, int label) const override {
    ++gradient_calls_;
    return inner_.margin_with_grad(x, label);
  }

  long forward_calls() const { return forward_calls_.load(); }
  long gradient_calls() const { return gradient_calls_.load(); }
  long noninteger_inputs() const { return noninteger_inputs_.load(); }

 private:
  static bool is_integer_image(const ContinuousImage& unit_scale) {
    for (double v : unit_scale.values) {
      const double p = v * 255.0;
      if (p < -1e-9 || p > 255.0 + 1e-9) return false;
      if (std::fabs(p - std::round(p)) > 1e-9) return false;
    }
    return true;
  }

  const Classifier& inner_;
  bool check_integer_;
  mutable std::atomic<long> forward_calls_{0};
  mutable std::atomic<long> gradient_calls_{0};
  mutable std::atomic<long> noninteger_inputs_{0};
};

// Runs one job per attacked image on a small pool; records land in a
// pre-sized vector indexed by position, so completion order is irrelevant.
template <typename Fn>
std::vector<AttackRecord> run_per_image(const std::vector<LabeledImage>& samples,
                                        const std::vector<int>& ids, int threads,
                                        Fn&& attack_one) {
  std::vector<AttackRecord> records(samples.size());
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  threads = std::min<int>(threads, static_cast<int>(samples.size()) == 0 ? 1 : static_cast<int>(samples.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= samples.size()) return;
      try {
        AttackRecord rec = attack_one(samples[i], ids[i]);
        rec.image_id = ids[i];
        records[i] = std::move(rec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return records;
}

AuditResult audit_records(const Classifier& model, const AuditingClassifier& wrapper,
                          const TestSetSummary& summary, bool blackbox,
                          const std::vector<LabeledImage>& samples,
                          const std::vector<int>& ids) {
  AuditResult audit;
  for (const auto& r : summary.records) audit.recorded_cost += r.cost;
  audit.measured_calls = blackbox ? wrapper.forward_calls() : wrapper.gradient_calls();
  audit.accounting_exact = audit.recorded_cost == audit.measured_calls;
  audit.noninteger_queries = blackbox ? wrapper.noninteger_inputs() : 0;
  for (std::size_t i = 0; i < summary.records.size(); ++i) {
    const auto& r = summary.records[i];
    if (!r.success) continue;
    ++audit.successes;
    if (r.adversarial && predict(model, *r.adversarial) != samples[i].label)
      ++audit.reverified;
    (void)ids;
  }
  return audit;
}

CurveOutcome fit_outcome(const TestSetSummary& records, int grid_points) {
  CurveOutcome out;
  try {
    out.curve = curve_from_records(records, default_grid(records, grid_points));
    out.ok = true;
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

bool AuditResult::ok() const {
  return accounting_exact && noninteger_queries == 0 && reverified == successes;
}

ModelHandle resolve_model(const BenchmarkConfig& cfg) {
  ModelHandle handle;
  if (cfg.model_source == "checkpoint") {
    if (cfg.checkpoint_path.empty())
      throw Error(ErrorKind::config, "config: checkpoint_path required when model=checkpoint");
    handle.model = load_checkpoint(cfg.checkpoint_path);
    handle.label = cfg.checkpoint_path;
    return handle;
  }
  TrainResult tr =
      cfg.adv_train
          ? train_adversarial(cfg.train_spec(), cfg.train_epochs, cfg.train_seed,
                              cfg.adv_pgd_steps, cfg.adv_eps)
          : train_standard(cfg.train_spec(), cfg.train_epochs, cfg.train_seed);
  handle.model = tr.model;
  handle.holdout_accuracy = tr.holdout_accuracy;
  handle.converged = tr.converged;
  handle.label = std::string(cfg.adv_train ? "adv" : "std") + "-c" +
                 std::to_string(cfg.classes) + "-s" + std::to_string(cfg.train_seed);
  return handle;
}

std::vector<LabeledImage> resolve_test_set(const BenchmarkConfig& cfg,
                                           const Classifier& model) {
  std::vector<LabeledImage> set;
  if (cfg.dataset_source == "ppm") {
    if (cfg.ppm_dir.empty() || cfg.label_file.empty())
      throw Error(ErrorKind::config, "config: ppm_dir and labels required when dataset=ppm");
    set = load_ppm_dataset(cfg.ppm_dir, cfg.label_file);
    if (static_cast<int>(set.size()) > cfg.images) set.resize(cfg.images);
  } else {
    SyntheticDatasetSpec spec = cfg.train_spec();
    spec.seed = cfg.test_seed;
    spec.per_class = (cfg.images + cfg.classes - 1) / cfg.classes;
    std::vector<LabeledImage> grouped = make_dataset(spec);
    // interleave classes so truncation keeps the class balance
    set.reserve(cfg.images);
    for (int i = 0; i < cfg.images; ++i) {
      const int k = i % cfg.classes;
      const int j = i / cfg.classes;
      set.push_back(grouped[static_cast<std::size_t>(k) * spec.per_class + j]);
    }
  }
  if (set.empty()) throw Error(ErrorKind::model_data, "test set is empty");
  for (const auto& s : set) {
    if (s.image.width != model.input_width() || s.image.height != model.input_height())
      throw Error(ErrorKind::model_data, "test image shape does not match the model input");
    if (s.label < 0 || s.label >= model.num_classes())
      throw Error(ErrorKind::model_data, "test label out of range for the model");
  }
  return set;
}

TestSetSummary run_single_attack(const BenchmarkConfig& cfg, const std::string& attack) {
  if (attack != "bp" && attack != "pgd" && attack != "boundary")
    throw Error(ErrorKind::config, "unknown attack '" + attack + "' (want bp|pgd|boundary)");
  ModelHandle handle = resolve_model(cfg);
  const Classifier& model = *handle.model;
  std::vector<LabeledImage> test_set = resolve_test_set(cfg, model);

  std::vector<LabeledImage> attacked;
  std::vector<int> ids;
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    if (predict(model, test_set[i].image) == test_set[i].label) {
      attacked.push_back(test_set[i]);
      ids.push_back(static_cast<int>(i));
    }
  }
  if (attacked.empty())
    throw Error(ErrorKind::model_data, "no test image is correctly classified; nothing to attack");

  TestSetSummary out;
  if (attack == "bp") {
    WhiteboxBudget budget{cfg.wb_budget};
    out.records = run_per_image(attacked, ids, cfg.threads,
                                [&](const LabeledImage& s, int) { return bp_attack(model, s, budget); });
  } else if (attack == "pgd") {
    const int steps = std::max(1, cfg.wb_budget / 20);
    out.records = run_per_image(attacked, ids, cfg.threads, [&](const LabeledImage& s, int) {
      return best_effort_pgd(model, s, steps);
    });
  } else {
    BlackboxOptions opts = cfg.blackbox_options();
    out.records = run_per_image(attacked, ids, cfg.threads, [&](const LabeledImage& s, int id) {
      return run_blackbox(model, s, Rng::mix(cfg.seed, static_cast<std::uint64_t>(id)), opts);
    });
  }
  return out;
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();
  BenchmarkReport report;
  report.config_echo = config_items(cfg);

  auto t_train = std::chrono::steady_clock::now();
  ModelHandle handle = resolve_model(cfg);
  report.train_seconds = seconds_since(t_train);
  report.model_label = handle.label;
  report.train_holdout_accuracy = handle.holdout_accuracy;
  report.train_converged = handle.converged;
  const Classifier& model = *handle.model;

  std::vector<LabeledImage> test_set = resolve_test_set(cfg, model);
  report.test_images = static_cast<int>(test_set.size());

  // the attacked set is exactly the correctly classified subset
  std::vector<LabeledImage> attacked;
  std::vector<int> ids;
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    if (predict(model, test_set[i].image) == test_set[i].label) {
      attacked.push_back(test_set[i]);
      ids.push_back(static_cast<int>(i));
    }
  }
  report.attacked = static_cast<int>(attacked.size());
  report.misclassified = report.test_images - report.attacked;
  report.eta0 = static_cast<double>(report.attacked) / report.test_images;
  if (attacked.empty())
    throw Error(ErrorKind::model_data, "no test image is correctly classified; nothing to attack");

  // white-box pass
  auto t_wb = std::chrono::steady_clock::now();
  {
    AuditingClassifier audited(model, false);
    WhiteboxBudget budget{cfg.wb_budget};
    report.wb_records.records = run_per_image(
        attacked, ids, cfg.threads, [&](const LabeledImage& s, int) {
          return bp_attack(audited, s, budget);
        });
    report.wb_audit = audit_records(model, audited, report.wb_records, false, attacked, ids);
  }
  report.whitebox_seconds = seconds_since(t_wb);

  // black-box pass
  auto t_bb = std::chrono::steady_clock::now();
  {
    AuditingClassifier audited(model, cfg.bb_quantize == "per_query");
    BlackboxOptions opts = cfg.blackbox_options();
    report.bb_records.records = run_per_image(
        attacked, ids, cfg.threads, [&](const LabeledImage& s, int id) {
          return run_blackbox(audited, s, Rng::mix(cfg.seed, static_cast<std::uint64_t>(id)), opts);
        });
    report.bb_audit = audit_records(model, audited, report.bb_records, true, attacked, ids);
  }
  report.blackbox_seconds = seconds_since(t_bb);

  report.whitebox = fit_outcome(report.wb_records, cfg.grid_points);
  report.blackbox = fit_outcome(report.bb_records, cfg.grid_points);
  report.total_seconds = seconds_since(t_start);
  return report;
}

}  // namespace hdb
