#pragma once

#include "classifier.hpp"
#include "metrics.hpp"
#include "rng.hpp"

namespace hdb {

// Whether black-box candidates are quantized before every model query (the
// benchmark default: the model only ever sees images) or only once at the
// end of the attack.
enum class BbQuantizePolicy { per_query, final_only };

struct QueryBudget {
  long max_queries = 5000;
  long used = 0;
  long remaining() const { return max_queries - used; }
};

// Decision oracle with exact query accounting. In per_query mode every query
// goes through an integer Image; the audit flag records whether any
// continuous query slipped through (it cannot, by construction, but the
// benchmark asserts it anyway).
class QueryOracle {
 public:
  QueryOracle(const Classifier& m, int label, QueryBudget& budget,
              BbQuantizePolicy policy)
      : m_(m), label_(label), budget_(budget), policy_(policy) {}

  // True when the image is misclassified. Returns nullopt once the budget is
  // exhausted.
  std::optional<bool> query(const Image& img);
  // final_only mode: query on the raw continuous candidate (0-255 scale,
  // clamped to the pixel range but not rounded).
  std::optional<bool> query_continuous(const ContinuousImage& x);

  BbQuantizePolicy policy() const { return policy_; }
  long used() const { return budget_.used; }
  long continuous_queries() const { return continuous_queries_; }

 private:
  const Classifier& m_;
  int label_;
  QueryBudget& budget_;
  BbQuantizePolicy policy_;
  long continuous_queries_ = 0;
};

struct BlackboxOptions {
  long max_queries = 5000;
  int init_draw_cap = 100;
  int init_bisect_steps = 10;
  int theta_refine_steps = 5;
  double theta_step_deg = 15.0;  // candidate rungs at 1x, 2x, 3x this angle
  int freq_div = 4;              // keep the lowest 1/4 of frequencies per axis
  BbQuantizePolicy policy = BbQuantizePolicy::per_query;
};

// Geometry of the search: the best adversarial found so far, its direction
// from the original, and its l2 distance (pixel scale).
struct BoundaryState {
  Image origin;
  ContinuousImage current;      // pixel-scale; integer-valued in per_query mode
  std::vector<double> direction;  // unit vector (current - origin)
  double dist_l2 = 0.0;
  bool adversarial = false;
};

// Draws seeded uniform random images until one is misclassified (up to the
// draw cap), then bisects along the segment toward the original. Every query
// in per_query mode is an integer image. Returns an empty optional when no
// adversarial starting point was found or the budget ran out.
std::optional<BoundaryState> init_adversarial(QueryOracle& oracle, const Image& origin,
                                              Rng& rng, const BlackboxOptions& opts);

// One candidate round: sample a low-frequency direction orthogonal to the
// current one, probe the circle z(theta) = origin + d cos(theta)
// (cos(theta) v + sin(theta) u) at +-{1,2,3} x theta_step, refine the first
// adversarial angle outward by bisection and accept if the distance
// strictly improved. Returns true when the state was updated.
bool geometric_step(QueryOracle& oracle, BoundaryState& state, Rng& rng,
                    const BlackboxOptions& opts);

// Full attack: initial query of the original (1 query), init, then geometric
// steps until the budget is exhausted. Trajectory milestones record every
// accepted improvement as (queries used, RMSE).
AttackRecord run_blackbox(const Classifier& m, const LabeledImage& sample,
                          std::uint64_t seed, const BlackboxOptions& opts);

}  // namespace hdb
