#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace hdb {

// Quantized pixel-domain image: 3 channels, every component an integer in
// [0, 255]. Layout is row-major with interleaved RGB, matching the PPM P6
// payload byte for byte.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // size = 3 * width * height

  int n() const { return 3 * width * height; }
  bool same_shape(const Image& other) const {
    return width == other.width && height == other.height;
  }
};

// Real-valued working tensor with the shape of an Image. Components are
// unconstrained while an attack iterates; scale (0-255 vs 0-1) is up to the
// caller and is documented at each use site.
struct ContinuousImage {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  int n() const { return 3 * width * height; }
  bool same_shape(const ContinuousImage& other) const {
    return width == other.width && height == other.height;
  }
};

// RMSE distortion on the 0-255 pixel scale.
struct Distortion {
  double value = 0.0;
};

Image make_image(int width, int height);
ContinuousImage make_continuous(int width, int height);

// Every component drawn uniformly from {0, ..., 255}.
Image random_image(int width, int height, Rng& rng);

// d(a, b) = ||a - b||_2 / sqrt(n). Throws on shape mismatch.
Distortion distortion(const Image& a, const Image& b);

// Same formula on raw component vectors; used by attack internals that track
// continuous candidates on the 0-255 scale.
double rmse(const std::vector<double>& a, const std::vector<double>& b);

// PSNR in dB: 48.13 - 20 log10(d). Returns nullopt for d = 0 (infinite PSNR).
std::optional<double> psnr(Distortion d);

// Components divided by 255; values land in [0, 1].
ContinuousImage to_unit(const Image& img);

// Rounds every component to the nearest integer (ties away from zero) and
// clamps to [0, 255]. Input is expected on the 0-255 scale. Idempotent.
Image quantize(const ContinuousImage& x);

// quantize(x * 255) in one step for unit-scale tensors.
Image quantize_unit(const ContinuousImage& unit_scale);

// Image viewed as doubles on the 0-255 scale.
ContinuousImage to_continuous(const Image& img);

}  // namespace hdb
