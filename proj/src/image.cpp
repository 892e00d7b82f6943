#include "image.hpp"

#include <cmath>

namespace hdb {

Image make_image(int width, int height) {
  if (width <= 0 || height <= 0)
    throw Error(ErrorKind::internal, "image dimensions must be positive");
  Image img;
  img.width = width;
  img.height = height;
  img.pixels.assign(static_cast<std::size_t>(3) * width * height, 0);
  return img;
}

ContinuousImage make_continuous(int width, int height) {
  if (width <= 0 || height <= 0)
    throw Error(ErrorKind::internal, "image dimensions must be positive");
  ContinuousImage x;
  x.width = width;
  x.height = height;
  x.values.assign(static_cast<std::size_t>(3) * width * height, 0.0);
  return x;
}

Image random_image(int width, int height, Rng& rng) {
  Image img = make_image(width, height);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.uniform_below(256));
  return img;
}

Distortion distortion(const Image& a, const Image& b) {
  if (!a.same_shape(b))
    throw Error(ErrorKind::internal, "distortion: image shape mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    double diff = static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
    sum += diff * diff;
  }
  return Distortion{std::sqrt(sum / static_cast<double>(a.n()))};
}

double rmse(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::internal, "rmse: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum / static_cast<double>(a.size()));
}

std::optional<double> psnr(Distortion d) {
  if (d.value < 0.0)
    throw Error(ErrorKind::internal, "psnr: negative distortion");
  if (d.value == 0.0) return std::nullopt;
  return 48.13 - 20.0 * std::log10(d.value);
}

ContinuousImage to_unit(const Image& img) {
  ContinuousImage x = make_continuous(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    x.values[i] = static_cast<double>(img.pixels[i]) / 255.0;
  return x;
}

Image quantize(const ContinuousImage& x) {
  Image img = make_image(x.width, x.height);
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    double r = std::round(x.values[i]);  // ties away from zero
    if (r < 0.0) r = 0.0;
    if (r > 255.0) r = 255.0;
    img.pixels[i] = static_cast<std::uint8_t>(r);
  }
  return img;
}

Image quantize_unit(const ContinuousImage& unit_scale) {
  ContinuousImage scaled = unit_scale;
  for (auto& v : scaled.values) v *= 255.0;
  return quantize(scaled);
}

ContinuousImage to_continuous(const Image& img) {
  ContinuousImage x = make_continuous(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    x.values[i] = static_cast<double>(img.pixels[i]);
  return x;
}

}  // namespace hdb
