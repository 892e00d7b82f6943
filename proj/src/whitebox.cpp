#include "whitebox.hpp"

#include <cmath>

namespace hdb {

namespace {

double l2_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Tracks the best (lowest-distortion) quantized adversarial candidate seen
// so far. Success checks cost forward passes only, which white-box
// complexity accounting does not meter.
class CandidateTracker {
 public:
  CandidateTracker(const Classifier& m, const Image& origin, int label)
      : m_(m), origin_(origin), label_(label) {}

  void offer(const ContinuousImage& unit_scale, long cost, AttackRecord& rec) {
    Image q = quantize_unit(unit_scale);
    if (predict(m_, q) == label_) return;
    const double d = distortion(q, origin_).value;
    if (!rec.success || d < rec.distortion->value) {
      rec.success = true;
      rec.distortion = Distortion{d};
      rec.adversarial = std::move(q);
      rec.trajectory.push_back(TrajectoryPoint{cost, d});
    }
  }

 private:
  const Classifier& m_;
  const Image& origin_;
  int label_;
};

AttackRecord free_success(const LabeledImage& sample) {
  // Already-misclassified originals need no attack: distortion 0 at cost 0.
  AttackRecord rec;
  rec.success = true;
  rec.distortion = Distortion{0.0};
  rec.cost = 0;
  rec.adversarial = sample.image;
  rec.trajectory.push_back(TrajectoryPoint{0, 0.0});
  return rec;
}

}  // namespace

double rmse_to_unit_l2(double rmse_pixels, int n) {
  return rmse_pixels * std::sqrt(static_cast<double>(n)) / 255.0;
}

double compute_alpha(double l0, double grad_l2, int kappa) {
  if (!(l0 > 0.0))
    throw Error(ErrorKind::internal,
                "compute_alpha: loss must be positive (image already adversarial or on the boundary)");
  if (!(grad_l2 > 0.0))
    throw Error(ErrorKind::internal, "compute_alpha: zero gradient");
  if (kappa < 1) throw Error(ErrorKind::internal, "compute_alpha: kappa must be >= 1");
  const double gamma_sum = 0.5 * static_cast<double>(kappa) * (kappa + 1);
  return l0 / (grad_l2 * gamma_sum);
}

double compute_alpha(const Classifier& m, const Image& origin, int label, int kappa) {
  ValueGrad vg = m.margin_with_grad(to_unit(origin), label);
  return compute_alpha(vg.value, l2_norm(vg.grad.values), kappa);
}

AttackRecord bp_attack(const Classifier& m, const LabeledImage& sample,
                       WhiteboxBudget budget, const BpOptions& opts) {
  if (budget.total < 2)
    throw Error(ErrorKind::internal, "bp_attack: budget must be >= 2");
  if (predict(m, sample.image) != sample.label) return free_success(sample);

  AttackRecord rec;
  rec.cost = 0;
  CandidateTracker tracker(m, sample.image, sample.label);
  const ContinuousImage x0 = to_unit(sample.image);
  const long K = budget.total;
  const int kappa = budget.kappa();

  ContinuousImage x = x0;
  ValueGrad vg = m.margin_with_grad(x, sample.label);
  ++rec.cost;
  const double l0 = vg.value;
  double grad_norm = l2_norm(vg.grad.values);
  if (!(l0 > 0.0) || !(grad_norm > 0.0)) {
    // Boundary tie or flat loss: the analytic step scale is undefined.
    return rec;
  }
  const double alpha = compute_alpha(l0, grad_norm, kappa);

  // Stage 1: accelerated descent until the margin goes negative.
  int t = 0;
  while (rec.cost < K) {
    const double scale = alpha * static_cast<double>(t + 1) / grad_norm;
    for (std::size_t i = 0; i < x.values.size(); ++i)
      x.values[i] -= scale * vg.grad.values[i];
    ++t;
    if (opts.stage1_rmse_log) {
      double s = 0.0;
      for (std::size_t i = 0; i < x.values.size(); ++i) {
        const double d = (x.values[i] - x0.values[i]) * 255.0;
        s += d * d;
      }
      opts.stage1_rmse_log->push_back(std::sqrt(s / static_cast<double>(x.n())));
    }
    vg = m.margin_with_grad(x, sample.label);
    ++rec.cost;
    grad_norm = l2_norm(vg.grad.values);
    tracker.offer(x, rec.cost, rec);
    if (vg.value < 0.0) break;
    if (!(grad_norm > 0.0)) return rec;  // stuck on a flat region
  }

  // Stage 2: pull toward the original, then Newton-return past the boundary
  // whenever the pull left the adversarial region.
  const double mu = opts.mu_frac * l0;
  while (rec.cost < K) {
    for (std::size_t i = 0; i < x.values.size(); ++i)
      x.values[i] += opts.beta * (x0.values[i] - x.values[i]);
    vg = m.margin_with_grad(x, sample.label);
    ++rec.cost;
    grad_norm = l2_norm(vg.grad.values);
    if (vg.value >= 0.0 && grad_norm > 0.0) {
      const double scale = (vg.value + mu) / (grad_norm * grad_norm);
      for (std::size_t i = 0; i < x.values.size(); ++i)
        x.values[i] -= scale * vg.grad.values[i];
    }
    tracker.offer(x, rec.cost, rec);
  }
  return rec;
}

AttackRecord pgd_attack(const Classifier& m, const LabeledImage& sample,
                        double eps_unit, int steps) {
  if (!(eps_unit > 0.0)) throw Error(ErrorKind::internal, "pgd_attack: eps must be > 0");
  if (steps < 1) throw Error(ErrorKind::internal, "pgd_attack: steps must be >= 1");
  if (predict(m, sample.image) != sample.label) return free_success(sample);

  AttackRecord rec;
  CandidateTracker tracker(m, sample.image, sample.label);
  const ContinuousImage x0 = to_unit(sample.image);
  ContinuousImage x = x0;
  const double step = 2.5 * eps_unit / static_cast<double>(steps);

  for (int s = 0; s < steps; ++s) {
    ValueGrad vg = m.margin_with_grad(x, sample.label);
    ++rec.cost;
    const double norm = l2_norm(vg.grad.values);
    if (!(norm > 0.0)) break;
    for (std::size_t i = 0; i < x.values.size(); ++i)
      x.values[i] -= step * vg.grad.values[i] / norm;
    // project to the l2 ball around x0, then clip to the unit box
    double dist = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
      const double d = x.values[i] - x0.values[i];
      dist += d * d;
    }
    dist = std::sqrt(dist);
    if (dist > eps_unit) {
      const double shrink = eps_unit / dist;
      for (std::size_t i = 0; i < x.values.size(); ++i)
        x.values[i] = x0.values[i] + shrink * (x.values[i] - x0.values[i]);
    }
    for (auto& v : x.values) v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    tracker.offer(x, rec.cost, rec);
  }
  return rec;
}

AttackRecord best_effort_pgd(const Classifier& m, const LabeledImage& sample,
                             int steps, const BestEffortOptions& opts) {
  if (predict(m, sample.image) != sample.label) return free_success(sample);

  const int n = sample.image.n();
  AttackRecord best;
  long total_cost = 0;

  auto run_at = [&](double eps_rmse) {
    AttackRecord r = pgd_attack(m, sample, rmse_to_unit_l2(eps_rmse, n), steps);
    total_cost += r.cost;
    if (r.success && (!best.success || r.distortion->value < best.distortion->value)) {
      best.success = true;
      best.distortion = r.distortion;
      best.adversarial = r.adversarial;
      best.trajectory.push_back(TrajectoryPoint{total_cost, r.distortion->value});
    }
    return r.success;
  };

  // walk the ladder up to the first success
  double last_fail = 0.0;
  double first_success = -1.0;
  double eps = opts.ladder_start_rmse;
  for (int i = 0; i < opts.ladder_len; ++i, eps *= opts.ladder_ratio) {
    if (run_at(eps)) {
      first_success = eps;
      break;
    }
    last_fail = eps;
  }
  if (first_success < 0.0) {
    best.cost = total_cost;
    return best;
  }

  // bisect between the last failure and the first success
  double lo = last_fail, hi = first_success;
  for (int i = 0; i < opts.refine_steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (run_at(mid))
      hi = mid;
    else
      lo = mid;
  }
  best.cost = total_cost;
  return best;
}

}  // namespace hdb
