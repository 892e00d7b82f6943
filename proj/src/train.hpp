#pragma once

#include <memory>

#include "classifier.hpp"
#include "dataset.hpp"

namespace hdb {

struct TrainResult {
  std::shared_ptr<ConvNet> model;
  double holdout_accuracy = 0.0;
  // False when the model came out below the 0.9 accuracy floor. Reported,
  // not fatal; callers decide what to do with a weak model.
  bool converged = true;
};

constexpr double kAccuracyFloor = 0.9;

// Seeded single-threaded SGD on cross-entropy. Same (spec, epochs, seed)
// gives bit-identical parameters within one build.
TrainResult train_standard(const SyntheticDatasetSpec& spec, int epochs,
                           std::uint64_t seed);

// Madry-style adversarial training: every minibatch example is replaced by a
// PGD ascent on the cross-entropy loss inside the l2 ball of radius eps
// (pixel levels, 0-255 scale) before the gradient step. eps = 0 or
// pgd_steps = 0 reduces exactly to train_standard.
TrainResult train_adversarial(const SyntheticDatasetSpec& spec, int epochs,
                              std::uint64_t seed, int pgd_steps, double eps);

}  // namespace hdb
