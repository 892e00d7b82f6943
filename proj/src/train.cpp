#include "train.hpp"

#include <cmath>

namespace hdb {

namespace {

constexpr int kBatch = 16;
constexpr double kLearningRate = 0.06;

// Cross-entropy ascent step direction for one example; returns the l2-ball
// PGD perturbed input (starts at the clean point, no random init, so the
// procedure is a pure function of the model and the example).
ContinuousImage pgd_perturb(const ConvNet& net, const ContinuousImage& x0, int label,
                            int steps, double eps_unit) {
  ContinuousImage x = x0;
  const double step = 2.5 * eps_unit / static_cast<double>(steps);
  ConvNet::Tape tape;
  for (int s = 0; s < steps; ++s) {
    net.forward(x, tape);
    std::vector<double> p = softmax(tape.logits);
    p[label] -= 1.0;  // d(CE)/d(logits); ascend on CE = descend on -CE
    ContinuousImage g;
    net.backward(tape, p, nullptr, &g);
    double norm = 0.0;
    for (double v : g.values) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) break;
    for (std::size_t i = 0; i < x.values.size(); ++i)
      x.values[i] += step * g.values[i] / norm;
    // project back to the ball, then to the [0,1] box
    double dist = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
      double d = x.values[i] - x0.values[i];
      dist += d * d;
    }
    dist = std::sqrt(dist);
    if (dist > eps_unit) {
      const double scale = eps_unit / dist;
      for (std::size_t i = 0; i < x.values.size(); ++i)
        x.values[i] = x0.values[i] + scale * (x.values[i] - x0.values[i]);
    }
    for (auto& v : x.values) v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }
  return x;
}

}  // namespace

TrainResult train_adversarial(const SyntheticDatasetSpec& spec, int epochs,
                              std::uint64_t seed, int pgd_steps, double eps) {
  if (spec.classes < 2)
    throw Error(ErrorKind::model_data, "training needs >= 2 classes");
  if (epochs < 1) throw Error(ErrorKind::model_data, "training needs >= 1 epoch");
  if (eps < 0.0) throw Error(ErrorKind::model_data, "adversarial eps must be >= 0");

  std::vector<LabeledImage> train_set = make_dataset(spec);
  std::vector<ContinuousImage> inputs;
  inputs.reserve(train_set.size());
  for (const auto& s : train_set) inputs.push_back(to_unit(s.image));

  Rng rng(Rng::mix(seed, 0x545249ULL));
  auto net = std::make_shared<ConvNet>(ConvNet::random_init(
      spec.image_size, spec.image_size, spec.classes, rng));

  const bool adversarial = eps > 0.0 && pgd_steps > 0;
  const double eps_unit = eps / 255.0;
  const std::size_t n = train_set.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  std::vector<double> grad(net->param_count(), 0.0);
  ConvNet::Tape tape;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    // Fisher-Yates shuffle from the run's PRNG
    for (std::size_t i = n - 1; i > 0; --i) {
      std::size_t j = rng.uniform_below(i + 1);
      std::swap(order[i], order[j]);
    }
    for (std::size_t start = 0; start < n; start += kBatch) {
      const std::size_t end = std::min(n, start + kBatch);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t b = start; b < end; ++b) {
        const auto& sample = train_set[order[b]];
        ContinuousImage x = inputs[order[b]];
        if (adversarial) x = pgd_perturb(*net, x, sample.label, pgd_steps, eps_unit);
        net->forward(x, tape);
        std::vector<double> p = softmax(tape.logits);
        p[sample.label] -= 1.0;
        const double inv = 1.0 / static_cast<double>(end - start);
        for (auto& v : p) v *= inv;
        net->backward(tape, p, &grad, nullptr);
      }
      auto& params = net->params();
      for (std::size_t i = 0; i < params.size(); ++i)
        params[i] -= kLearningRate * grad[i];
    }
  }

  TrainResult result;
  result.model = net;
  result.holdout_accuracy = evaluate_accuracy(*net, make_dataset(holdout_spec(spec)));
  result.converged = result.holdout_accuracy >= kAccuracyFloor;
  return result;
}

TrainResult train_standard(const SyntheticDatasetSpec& spec, int epochs,
                           std::uint64_t seed) {
  return train_adversarial(spec, epochs, seed, 0, 0.0);
}

}  // namespace hdb
