#pragma once

#include "classifier.hpp"
#include "metrics.hpp"

namespace hdb {

// Gradient-call budget for the two-stage white-box attack. Stage 1 is
// calibrated to reach the boundary in about kappa = floor(K/3) iterations
// (floored at 1 for tiny budgets), leaving the rest for distortion reduction.
struct WhiteboxBudget {
  int total = 200;
  int kappa() const { return std::max(1, total / 3); }
};

struct BpOptions {
  double beta = 0.1;         // stage-2 pull factor toward the original
  double mu_frac = 1e-3;     // boundary-return margin, as a fraction of L(I_o)
  // Diagnostic sink: stage-1 distortion from the origin after each iterate.
  std::vector<double>* stage1_rmse_log = nullptr;
};

// Step scale that cancels a first-order-approximated loss in kappa
// accelerated iterations with ramp gamma(t) = t:
//   alpha = L0 / (grad_l2 * kappa (kappa + 1) / 2).
// Throws for L0 <= 0 (already adversarial or on the boundary) and for a
// vanishing gradient.
double compute_alpha(double l0, double grad_l2, int kappa);
double compute_alpha(const Classifier& m, const Image& origin, int label, int kappa);

// Two-stage attack. Stage 1: accelerated normalized-gradient descent of the
// margin loss, x <- x - alpha gamma(t+1) grad/|grad|, until the loss goes
// negative. Stage 2: alternate a pull toward the original with a
// Newton-style return to just past the boundary. Arithmetic runs on the
// unit-scale continuous tensor; the reported image is quantized and success
// is judged on it. Cost counts margin gradient evaluations exactly.
AttackRecord bp_attack(const Classifier& m, const LabeledImage& sample,
                       WhiteboxBudget budget, const BpOptions& opts = {});

// L2 projected gradient descent on the margin loss inside the ball of radius
// eps (unit scale), step 2.5 eps / steps, clipped to [0,1] each iterate.
// Output quantized as post-processing; cost = steps gradient calls.
AttackRecord pgd_attack(const Classifier& m, const LabeledImage& sample,
                        double eps_unit, int steps);

struct BestEffortOptions {
  double ladder_start_rmse = 0.125;  // pixel levels
  double ladder_ratio = 2.0;
  int ladder_len = 12;
  int refine_steps = 8;
};

// Best-effort wrapper: walk the epsilon ladder up to the first success, then
// bisect between the last failure and the first success, returning the
// lowest-distortion successful record over everything explored.
AttackRecord best_effort_pgd(const Classifier& m, const LabeledImage& sample,
                             int steps, const BestEffortOptions& opts = {});

// RMSE in pixel levels -> unit-scale l2 radius for an n-component image.
double rmse_to_unit_l2(double rmse_pixels, int n);

}  // namespace hdb
