#include "classifier.hpp"

#include <algorithm>
#include <cmath>

namespace hdb {

void Classifier::check_input(const ContinuousImage& x) const {
  if (x.width != input_width() || x.height != input_height())
    throw Error(ErrorKind::internal, "classifier: input shape mismatch");
}

void Classifier::check_label(int label) const {
  if (label < 0 || label >= num_classes())
    throw Error(ErrorKind::internal, "classifier: label out of range");
}

int predict_unit(const Classifier& m, const ContinuousImage& x) {
  std::vector<double> l = m.logits(x);
  int best = 0;
  for (int j = 1; j < static_cast<int>(l.size()); ++j)
    if (l[j] > l[best]) best = j;  // strict >, so ties keep the lowest index
  return best;
}

int predict(const Classifier& m, const Image& img) {
  if (img.width != m.input_width() || img.height != m.input_height())
    throw Error(ErrorKind::internal, "predict: image shape mismatch");
  return predict_unit(m, to_unit(img));
}

namespace {
int best_other(const std::vector<double>& l, int y) {
  int j_star = -1;
  for (int j = 0; j < static_cast<int>(l.size()); ++j) {
    if (j == y) continue;
    if (j_star < 0 || l[j] > l[j_star]) j_star = j;
  }
  return j_star;
}
}  // namespace

double margin_loss(const Classifier& m, const ContinuousImage& x, int y) {
  std::vector<double> l = m.logits(x);
  if (y < 0 || y >= static_cast<int>(l.size()))
    throw Error(ErrorKind::internal, "margin_loss: label out of range");
  if (l.size() < 2)
    throw Error(ErrorKind::internal, "margin_loss: need at least 2 classes");
  return l[y] - l[best_other(l, y)];
}

ContinuousImage margin_loss_grad(const Classifier& m, const ContinuousImage& x, int y) {
  return m.margin_with_grad(x, y).grad;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  double max_l = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - max_l);
    sum += p[i];
  }
  for (auto& v : p) v /= sum;
  return p;
}

// ---------------------------------------------------------------------------
// LinearModel

LinearModel::LinearModel(int width, int height, int classes)
    : width_(width), height_(height), classes_(classes) {
  if (classes < 2) throw Error(ErrorKind::internal, "linear model: need >= 2 classes");
  w_.assign(classes, std::vector<double>(static_cast<std::size_t>(3) * width * height, 0.0));
  b_.assign(classes, 0.0);
}

LinearModel LinearModel::random(int width, int height, int classes, std::uint64_t seed) {
  LinearModel m(width, height, classes);
  Rng rng(seed);
  for (auto& row : m.w_)
    for (auto& v : row) v = 0.1 * rng.normal();
  for (auto& v : m.b_) v = 0.1 * rng.normal();
  return m;
}

std::vector<double> LinearModel::logits(const ContinuousImage& x) const {
  check_input(x);
  std::vector<double> out(classes_);
  for (int k = 0; k < classes_; ++k) {
    double s = b_[k];
    const auto& row = w_[k];
    for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * x.values[i];
    out[k] = s;
  }
  return out;
}

ValueGrad LinearModel::margin_with_grad(const ContinuousImage& x, int label) const {
  check_label(label);
  std::vector<double> l = logits(x);
  int j_star = best_other(l, label);
  ValueGrad vg;
  vg.value = l[label] - l[j_star];
  vg.grad = make_continuous(width_, height_);
  for (std::size_t i = 0; i < vg.grad.values.size(); ++i)
    vg.grad.values[i] = w_[label][i] - w_[j_star][i];
  return vg;
}

// ---------------------------------------------------------------------------
// ConvNet

std::size_t ConvNet::param_count_for(int classes) {
  std::size_t w1 = static_cast<std::size_t>(kConv1Filters) * 3 * kKernel * kKernel;
  std::size_t w2 = static_cast<std::size_t>(kConv2Filters) * kConv1Filters * kKernel * kKernel;
  return w1 + kConv1Filters + w2 + kConv2Filters +
         static_cast<std::size_t>(classes) * kConv2Filters + classes;
}

ConvNet::ConvNet(int width, int height, int classes)
    : width_(width), height_(height), classes_(classes) {
  if (classes < 2) throw Error(ErrorKind::internal, "convnet: need >= 2 classes");
  if (width < 4 || height < 4 || width % 2 != 0 || height % 2 != 0)
    throw Error(ErrorKind::internal, "convnet: input size must be even and >= 4");
  pw_ = width_ / 2;
  ph_ = height_ / 2;
  params_.assign(param_count_for(classes), 0.0);
  layout();
}

void ConvNet::layout() {
  w1_ = 0;
  b1_ = w1_ + static_cast<std::size_t>(kConv1Filters) * 3 * kKernel * kKernel;
  w2_ = b1_ + kConv1Filters;
  b2_ = w2_ + static_cast<std::size_t>(kConv2Filters) * kConv1Filters * kKernel * kKernel;
  wf_ = b2_ + kConv2Filters;
  bf_ = wf_ + static_cast<std::size_t>(classes_) * kConv2Filters;
}

ConvNet ConvNet::random_init(int width, int height, int classes, Rng& rng) {
  ConvNet net(width, height, classes);
  auto he = [&rng](double fan_in) { return rng.normal() * std::sqrt(2.0 / fan_in); };
  std::size_t i = net.w1_;
  for (; i < net.b1_; ++i) net.params_[i] = he(3.0 * kKernel * kKernel);
  i = net.w2_;
  for (; i < net.b2_; ++i) net.params_[i] = he(1.0 * kConv1Filters * kKernel * kKernel);
  i = net.wf_;
  for (; i < net.bf_; ++i) net.params_[i] = he(1.0 * kConv2Filters);
  // biases stay zero
  return net;
}

void ConvNet::forward(const ContinuousImage& x, Tape& tape) const {
  check_input(x);
  const int W = width_, H = height_;
  const double* P = params_.data();
  tape.input = x.values;

  // conv1 + pad 1: z1[f][y][x]
  tape.z1.assign(static_cast<std::size_t>(kConv1Filters) * H * W, 0.0);
  for (int f = 0; f < kConv1Filters; ++f) {
    const double bias = P[b1_ + f];
    for (int y = 0; y < H; ++y) {
      for (int xx = 0; xx < W; ++xx) {
        double s = bias;
        for (int c = 0; c < 3; ++c) {
          const double* k = P + w1_ + ((static_cast<std::size_t>(f) * 3 + c) * kKernel * kKernel);
          for (int ky = 0; ky < kKernel; ++ky) {
            int sy = y + ky - 1;
            if (sy < 0 || sy >= H) continue;
            for (int kx = 0; kx < kKernel; ++kx) {
              int sx = xx + kx - 1;
              if (sx < 0 || sx >= W) continue;
              s += k[ky * kKernel + kx] * tape.input[(static_cast<std::size_t>(sy) * W + sx) * 3 + c];
            }
          }
        }
        tape.z1[(static_cast<std::size_t>(f) * H + y) * W + xx] = s;
      }
    }
  }
  tape.a1.resize(tape.z1.size());
  for (std::size_t i = 0; i < tape.z1.size(); ++i)
    tape.a1[i] = tape.z1[i] > 0.0 ? tape.z1[i] : 0.0;

  // 2x2 average pool
  tape.p1.assign(static_cast<std::size_t>(kConv1Filters) * ph_ * pw_, 0.0);
  for (int f = 0; f < kConv1Filters; ++f)
    for (int y = 0; y < ph_; ++y)
      for (int xx = 0; xx < pw_; ++xx) {
        double s = 0.0;
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx)
            s += tape.a1[(static_cast<std::size_t>(f) * H + (2 * y + dy)) * W + (2 * xx + dx)];
        tape.p1[(static_cast<std::size_t>(f) * ph_ + y) * pw_ + xx] = s / 4.0;
      }

  // conv2 + pad 1 on pooled map
  tape.z2.assign(static_cast<std::size_t>(kConv2Filters) * ph_ * pw_, 0.0);
  for (int f = 0; f < kConv2Filters; ++f) {
    const double bias = P[b2_ + f];
    for (int y = 0; y < ph_; ++y) {
      for (int xx = 0; xx < pw_; ++xx) {
        double s = bias;
        for (int c = 0; c < kConv1Filters; ++c) {
          const double* k = P + w2_ + ((static_cast<std::size_t>(f) * kConv1Filters + c) * kKernel * kKernel);
          for (int ky = 0; ky < kKernel; ++ky) {
            int sy = y + ky - 1;
            if (sy < 0 || sy >= ph_) continue;
            for (int kx = 0; kx < kKernel; ++kx) {
              int sx = xx + kx - 1;
              if (sx < 0 || sx >= pw_) continue;
              s += k[ky * kKernel + kx] * tape.p1[(static_cast<std::size_t>(c) * ph_ + sy) * pw_ + sx];
            }
          }
        }
        tape.z2[(static_cast<std::size_t>(f) * ph_ + y) * pw_ + xx] = s;
      }
    }
  }
  tape.a2.resize(tape.z2.size());
  for (std::size_t i = 0; i < tape.z2.size(); ++i)
    tape.a2[i] = tape.z2[i] > 0.0 ? tape.z2[i] : 0.0;

  // global average pool
  tape.gap.assign(kConv2Filters, 0.0);
  const double inv_area = 1.0 / (static_cast<double>(ph_) * pw_);
  for (int f = 0; f < kConv2Filters; ++f) {
    double s = 0.0;
    for (int i = 0; i < ph_ * pw_; ++i) s += tape.a2[static_cast<std::size_t>(f) * ph_ * pw_ + i];
    tape.gap[f] = s * inv_area;
  }

  // dense
  tape.logits.assign(classes_, 0.0);
  for (int k = 0; k < classes_; ++k) {
    double s = P[bf_ + k];
    for (int f = 0; f < kConv2Filters; ++f)
      s += P[wf_ + static_cast<std::size_t>(k) * kConv2Filters + f] * tape.gap[f];
    tape.logits[k] = s;
  }
}

void ConvNet::backward(const Tape& tape, const std::vector<double>& dlogits,
                       std::vector<double>* param_grad, ContinuousImage* input_grad) const {
  const int W = width_, H = height_;
  const double* P = params_.data();
  double* G = param_grad ? param_grad->data() : nullptr;
  if (param_grad && param_grad->size() != params_.size())
    throw Error(ErrorKind::internal, "convnet: parameter gradient size mismatch");

  // dense
  std::vector<double> dgap(kConv2Filters, 0.0);
  for (int k = 0; k < classes_; ++k) {
    const double d = dlogits[k];
    if (G) {
      G[bf_ + k] += d;
      for (int f = 0; f < kConv2Filters; ++f)
        G[wf_ + static_cast<std::size_t>(k) * kConv2Filters + f] += d * tape.gap[f];
    }
    for (int f = 0; f < kConv2Filters; ++f)
      dgap[f] += P[wf_ + static_cast<std::size_t>(k) * kConv2Filters + f] * d;
  }

  // global average pool + ReLU2
  const double inv_area = 1.0 / (static_cast<double>(ph_) * pw_);
  std::vector<double> dz2(tape.z2.size(), 0.0);
  for (int f = 0; f < kConv2Filters; ++f) {
    const double d = dgap[f] * inv_area;
    for (int i = 0; i < ph_ * pw_; ++i) {
      std::size_t idx = static_cast<std::size_t>(f) * ph_ * pw_ + i;
      if (tape.z2[idx] > 0.0) dz2[idx] = d;
    }
  }

  // conv2 backward (scatter form)
  std::vector<double> dp1(tape.p1.size(), 0.0);
  for (int f = 0; f < kConv2Filters; ++f) {
    double dbias = 0.0;
    for (int y = 0; y < ph_; ++y) {
      for (int xx = 0; xx < pw_; ++xx) {
        const double d = dz2[(static_cast<std::size_t>(f) * ph_ + y) * pw_ + xx];
        if (d == 0.0) continue;
        dbias += d;
        for (int c = 0; c < kConv1Filters; ++c) {
          std::size_t kbase = w2_ + (static_cast<std::size_t>(f) * kConv1Filters + c) * kKernel * kKernel;
          for (int ky = 0; ky < kKernel; ++ky) {
            int sy = y + ky - 1;
            if (sy < 0 || sy >= ph_) continue;
            for (int kx = 0; kx < kKernel; ++kx) {
              int sx = xx + kx - 1;
              if (sx < 0 || sx >= pw_) continue;
              std::size_t pidx = (static_cast<std::size_t>(c) * ph_ + sy) * pw_ + sx;
              dp1[pidx] += P[kbase + ky * kKernel + kx] * d;
              if (G) G[kbase + ky * kKernel + kx] += tape.p1[pidx] * d;
            }
          }
        }
      }
    }
    if (G) G[b2_ + f] += dbias;
  }

  // average pool backward + ReLU1
  std::vector<double> dz1(tape.z1.size(), 0.0);
  for (int f = 0; f < kConv1Filters; ++f)
    for (int y = 0; y < ph_; ++y)
      for (int xx = 0; xx < pw_; ++xx) {
        const double d = dp1[(static_cast<std::size_t>(f) * ph_ + y) * pw_ + xx] / 4.0;
        if (d == 0.0) continue;
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx) {
            std::size_t idx = (static_cast<std::size_t>(f) * H + (2 * y + dy)) * W + (2 * xx + dx);
            if (tape.z1[idx] > 0.0) dz1[idx] += d;
          }
      }

  // conv1 backward
  if (input_grad) {
    *input_grad = make_continuous(W, H);
  }
  for (int f = 0; f < kConv1Filters; ++f) {
    double dbias = 0.0;
    for (int y = 0; y < H; ++y) {
      for (int xx = 0; xx < W; ++xx) {
        const double d = dz1[(static_cast<std::size_t>(f) * H + y) * W + xx];
        if (d == 0.0) continue;
        dbias += d;
        for (int c = 0; c < 3; ++c) {
          std::size_t kbase = w1_ + (static_cast<std::size_t>(f) * 3 + c) * kKernel * kKernel;
          for (int ky = 0; ky < kKernel; ++ky) {
            int sy = y + ky - 1;
            if (sy < 0 || sy >= H) continue;
            for (int kx = 0; kx < kKernel; ++kx) {
              int sx = xx + kx - 1;
              if (sx < 0 || sx >= W) continue;
              std::size_t iidx = (static_cast<std::size_t>(sy) * W + sx) * 3 + c;
              if (input_grad) input_grad->values[iidx] += P[kbase + ky * kKernel + kx] * d;
              if (G) G[kbase + ky * kKernel + kx] += tape.input[iidx] * d;
            }
          }
        }
      }
    }
    if (G) G[b1_ + f] += dbias;
  }
}

std::vector<double> ConvNet::logits(const ContinuousImage& x) const {
  Tape tape;
  forward(x, tape);
  return tape.logits;
}

ValueGrad ConvNet::margin_with_grad(const ContinuousImage& x, int label) const {
  check_label(label);
  Tape tape;
  forward(x, tape);
  int j_star = best_other(tape.logits, label);
  std::vector<double> dlogits(classes_, 0.0);
  dlogits[label] = 1.0;
  dlogits[j_star] = -1.0;
  ValueGrad vg;
  vg.value = tape.logits[label] - tape.logits[j_star];
  backward(tape, dlogits, nullptr, &vg.grad);
  return vg;
}

}  // namespace hdb
