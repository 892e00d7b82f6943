#pragma once

#include <memory>
#include <vector>

#include "image.hpp"
#include "rng.hpp"

namespace hdb {

struct LabeledImage {
  Image image;
  int label = 0;
};

struct ValueGrad {
  double value = 0.0;
  ContinuousImage grad;  // d(value)/d(input), unit scale
};

// Deterministic differentiable image classifier. Inputs are unit-scale
// tensors; identical input gives bit-identical logits within one build.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int num_classes() const = 0;
  virtual int input_width() const = 0;
  virtual int input_height() const = 0;
  virtual std::vector<double> logits(const ContinuousImage& x) const = 0;
  // Margin loss L(x) = logit_y - max_{j != y} logit_j together with its exact
  // gradient w.r.t. x (backpropagation). At max ties the lowest-index
  // maximizer supplies the subgradient.
  virtual ValueGrad margin_with_grad(const ContinuousImage& x, int label) const = 0;

 protected:
  void check_input(const ContinuousImage& x) const;
  void check_label(int label) const;
};

// Argmax of logits over to_unit(img); ties break to the lowest class index.
int predict(const Classifier& m, const Image& img);
int predict_unit(const Classifier& m, const ContinuousImage& x);

// L(x) = logit_y(x) - max_{j != y} logit_j(x). Negative exactly when x is
// adversarial against label y.
double margin_loss(const Classifier& m, const ContinuousImage& x, int y);
ContinuousImage margin_loss_grad(const Classifier& m, const ContinuousImage& x, int y);

// Numerically stable softmax; probabilities sum to 1.
std::vector<double> softmax(const std::vector<double>& logits);

// Linear classifier: logits = W x + b. Used as a closed-form fixture for
// attack optimality checks and as the simplest Classifier implementation.
class LinearModel : public Classifier {
 public:
  LinearModel(int width, int height, int classes);
  static LinearModel random(int width, int height, int classes, std::uint64_t seed);

  int num_classes() const override { return classes_; }
  int input_width() const override { return width_; }
  int input_height() const override { return height_; }
  std::vector<double> logits(const ContinuousImage& x) const override;
  ValueGrad margin_with_grad(const ContinuousImage& x, int label) const override;

  std::vector<std::vector<double>>& weights() { return w_; }
  std::vector<double>& biases() { return b_; }
  const std::vector<std::vector<double>>& weights() const { return w_; }
  const std::vector<double>& biases() const { return b_; }

 private:
  int width_, height_, classes_;
  std::vector<std::vector<double>> w_;  // [class][component]
  std::vector<double> b_;
};

// Small fixed-architecture CNN:
//   conv 3x3, 8 filters, pad 1 -> ReLU -> 2x2 average pool
//   -> conv 3x3, 16 filters, pad 1 -> ReLU -> global average pool
//   -> dense -> logits
// Forward, input gradients and parameter gradients are all hand-rolled so
// inference is a pure deterministic function of the parameters.
class ConvNet : public Classifier {
 public:
  static constexpr int kConv1Filters = 8;
  static constexpr int kConv2Filters = 16;
  static constexpr int kKernel = 3;

  ConvNet(int width, int height, int classes);
  static ConvNet random_init(int width, int height, int classes, Rng& rng);

  int num_classes() const override { return classes_; }
  int input_width() const override { return width_; }
  int input_height() const override { return height_; }
  std::vector<double> logits(const ContinuousImage& x) const override;
  ValueGrad margin_with_grad(const ContinuousImage& x, int label) const override;

  // Forward pass caching all activations; backward scatters d(loss)/d(logits)
  // into parameter gradients (accumulated) and/or the input gradient. Either
  // output may be null. Used by training and by the margin-loss gradient.
  struct Tape;
  void forward(const ContinuousImage& x, Tape& tape) const;
  void backward(const Tape& tape, const std::vector<double>& dlogits,
                std::vector<double>* param_grad, ContinuousImage* input_grad) const;

  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t param_count() const { return params_.size(); }

  // Parameter vector layout (order is part of the checkpoint format):
  // conv1 W [8][3][3][3], conv1 b [8], conv2 W [16][8][3][3], conv2 b [16],
  // fc W [classes][16], fc b [classes].
  static std::size_t param_count_for(int classes);

 private:
  int width_, height_, classes_;
  int pw_, ph_;  // pooled spatial dims
  std::vector<double> params_;

  // Offsets into params_.
  std::size_t w1_, b1_, w2_, b2_, wf_, bf_;
  void layout();
};

// Activation cache for one forward pass.
struct ConvNet::Tape {
  std::vector<double> input;  // unit scale copy
  std::vector<double> z1, a1, p1, z2, a2, gap;
  std::vector<double> logits;
};

}  // namespace hdb
