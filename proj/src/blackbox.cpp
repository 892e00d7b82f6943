#include "blackbox.hpp"

#include <cmath>

#include "dct.hpp"

namespace hdb {

namespace {

constexpr double kPi = 3.14159265358979323846;

double l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Queries one continuous pixel-scale candidate under the oracle's policy and
// stores the representation the model actually judged (quantized in
// per_query mode) into `seen`.
std::optional<bool> probe(QueryOracle& oracle, const ContinuousImage& cand,
                          ContinuousImage& seen) {
  if (oracle.policy() == BbQuantizePolicy::per_query) {
    Image q = quantize(cand);
    auto r = oracle.query(q);
    if (r) seen = to_continuous(q);
    return r;
  }
  ContinuousImage clamped = cand;
  for (auto& v : clamped.values) v = v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v);
  auto r = oracle.query_continuous(clamped);
  if (r) seen = std::move(clamped);
  return r;
}

void set_state(BoundaryState& st, ContinuousImage current,
               const std::vector<double>& origin_vals) {
  st.current = std::move(current);
  st.dist_l2 = l2(st.current.values, origin_vals);
  st.direction.resize(origin_vals.size());
  for (std::size_t i = 0; i < origin_vals.size(); ++i)
    st.direction[i] = (st.current.values[i] - origin_vals[i]) / st.dist_l2;
  st.adversarial = true;
}

}  // namespace

std::optional<bool> QueryOracle::query(const Image& img) {
  if (budget_.remaining() <= 0) return std::nullopt;
  ++budget_.used;
  return predict(m_, img) != label_;
}

std::optional<bool> QueryOracle::query_continuous(const ContinuousImage& x) {
  if (budget_.remaining() <= 0) return std::nullopt;
  ++budget_.used;
  ++continuous_queries_;
  ContinuousImage unit = x;
  for (auto& v : unit.values) v /= 255.0;
  return predict_unit(m_, unit) != label_;
}

std::optional<BoundaryState> init_adversarial(QueryOracle& oracle, const Image& origin,
                                              Rng& rng, const BlackboxOptions& opts) {
  const std::vector<double> origin_vals = to_continuous(origin).values;

  // random restarts until one lands in another class
  std::optional<ContinuousImage> start;
  for (int draw = 0; draw < opts.init_draw_cap && !start; ++draw) {
    Image r = random_image(origin.width, origin.height, rng);
    auto adv = oracle.query(r);
    if (!adv) return std::nullopt;  // budget exhausted
    if (*adv) start = to_continuous(r);
  }
  if (!start) return std::nullopt;

  // bisect along the segment toward the original; keep the adversarial end
  BoundaryState st;
  st.origin = origin;
  set_state(st, *start, origin_vals);
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < opts.init_bisect_steps; ++k) {
    const double mid = 0.5 * (lo + hi);
    ContinuousImage cand = make_continuous(origin.width, origin.height);
    for (std::size_t i = 0; i < cand.values.size(); ++i)
      cand.values[i] = origin_vals[i] + mid * (start->values[i] - origin_vals[i]);
    ContinuousImage seen;
    auto adv = probe(oracle, cand, seen);
    if (!adv) break;  // budget exhausted mid-bisection: keep the best so far
    if (*adv) {
      hi = mid;
      set_state(st, std::move(seen), origin_vals);
    } else {
      lo = mid;
    }
  }
  return st;
}

bool geometric_step(QueryOracle& oracle, BoundaryState& state, Rng& rng,
                    const BlackboxOptions& opts) {
  const int w = state.origin.width, h = state.origin.height;
  const std::vector<double> origin_vals = to_continuous(state.origin).values;
  const double d = state.dist_l2;

  // direction orthogonal to the current one, sampled in the low-frequency
  // DCT subspace and re-orthonormalized in pixel space
  std::vector<double> u;
  for (int attempt = 0; attempt < 10; ++attempt) {
    ContinuousImage raw = sample_lowfreq_direction(w, h, rng, opts.freq_div);
    double dot = 0.0;
    for (std::size_t i = 0; i < raw.values.size(); ++i)
      dot += raw.values[i] * state.direction[i];
    double norm = 0.0;
    for (std::size_t i = 0; i < raw.values.size(); ++i) {
      raw.values[i] -= dot * state.direction[i];
      norm += raw.values[i] * raw.values[i];
    }
    norm = std::sqrt(norm);
    if (norm > 1e-9) {
      u = std::move(raw.values);
      for (auto& v : u) v /= norm;
      break;
    }
  }
  if (u.empty()) return false;

  auto candidate_at = [&](double theta_rad) {
    ContinuousImage cand = make_continuous(w, h);
    const double ct = std::cos(theta_rad), st_ = std::sin(theta_rad);
    for (std::size_t i = 0; i < cand.values.size(); ++i)
      cand.values[i] = origin_vals[i] + d * ct * (ct * state.direction[i] + st_ * u[i]);
    return cand;
  };

  // probe +-{1,2,3} x theta_step in order of increasing magnitude
  const double step_rad = opts.theta_step_deg * kPi / 180.0;
  double found_theta = 0.0;
  double found_sign = 1.0;
  ContinuousImage best;
  bool found = false;
  for (int idx = 0; idx < 6 && !found; ++idx) {
    const double sign = (idx % 2 == 0) ? 1.0 : -1.0;
    const double mag = static_cast<double>(idx / 2 + 1) * step_rad;
    ContinuousImage seen;
    auto adv = probe(oracle, candidate_at(sign * mag), seen);
    if (!adv) return false;  // budget exhausted; state unchanged
    if (*adv) {
      found = true;
      found_theta = mag;
      found_sign = sign;
      best = std::move(seen);
    }
  }
  if (!found) return false;

  // push |theta| outward (smaller distance) while still adversarial
  double lo = found_theta;
  double hi = std::min(found_theta + step_rad, 89.0 * kPi / 180.0);
  for (int r = 0; r < opts.theta_refine_steps; ++r) {
    const double mid = 0.5 * (lo + hi);
    ContinuousImage seen;
    auto adv = probe(oracle, candidate_at(found_sign * mid), seen);
    if (!adv) break;
    if (*adv) {
      lo = mid;
      best = std::move(seen);
    } else {
      hi = mid;
    }
  }

  const double new_dist = l2(best.values, origin_vals);
  if (new_dist >= d) return false;  // quantization ate the gain; reject
  set_state(state, std::move(best), origin_vals);
  return true;
}

AttackRecord run_blackbox(const Classifier& m, const LabeledImage& sample,
                          std::uint64_t seed, const BlackboxOptions& opts) {
  if (opts.max_queries < 1)
    throw Error(ErrorKind::internal, "run_blackbox: budget must be >= 1");

  QueryBudget budget{opts.max_queries, 0};
  QueryOracle oracle(m, sample.label, budget, opts.policy);
  Rng rng(seed);  // callers derive one stream per image, e.g. Rng::mix(run_seed, image_id)

  AttackRecord rec;
  auto first = oracle.query(sample.image);
  if (first && *first) {
    rec.success = true;
    rec.distortion = Distortion{0.0};
    rec.cost = budget.used;
    rec.adversarial = sample.image;
    rec.trajectory.push_back(TrajectoryPoint{budget.used, 0.0});
    return rec;
  }

  auto state = init_adversarial(oracle, sample.image, rng, opts);
  if (!state) {
    rec.cost = budget.used;
    return rec;
  }
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(sample.image.n()));
  rec.trajectory.push_back(TrajectoryPoint{budget.used, state->dist_l2 * inv_sqrt_n});

  while (budget.remaining() > 0) {
    if (geometric_step(oracle, *state, rng, opts))
      rec.trajectory.push_back(TrajectoryPoint{budget.used, state->dist_l2 * inv_sqrt_n});
  }

  Image final_img = quantize(state->current);
  rec.cost = budget.used;
  if (opts.policy == BbQuantizePolicy::per_query) {
    rec.success = true;  // every accepted state was verified adversarial
  } else {
    rec.success = predict(m, final_img) != sample.label;  // harness-side check
  }
  if (rec.success) {
    rec.distortion = distortion(final_img, sample.image);
    rec.adversarial = std::move(final_img);
  } else {
    rec.trajectory.clear();
  }
  return rec;
}

}  // namespace hdb
