#include "dct.hpp"

#include <cmath>

namespace hdb {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 1-D orthonormal DCT-II along each row of a w x h plane.
std::vector<double> dct_rows(const std::vector<double>& in, int w, int h) {
  std::vector<double> out(in.size(), 0.0);
  const double s0 = std::sqrt(1.0 / w);
  const double sk = std::sqrt(2.0 / w);
  for (int y = 0; y < h; ++y)
    for (int k = 0; k < w; ++k) {
      double s = 0.0;
      for (int x = 0; x < w; ++x)
        s += in[static_cast<std::size_t>(y) * w + x] *
             std::cos(kPi * (2.0 * x + 1.0) * k / (2.0 * w));
      out[static_cast<std::size_t>(y) * w + k] = s * (k == 0 ? s0 : sk);
    }
  return out;
}

std::vector<double> idct_rows(const std::vector<double>& in, int w, int h) {
  std::vector<double> out(in.size(), 0.0);
  const double s0 = std::sqrt(1.0 / w);
  const double sk = std::sqrt(2.0 / w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = 0; k < w; ++k)
        s += (k == 0 ? s0 : sk) * in[static_cast<std::size_t>(y) * w + k] *
             std::cos(kPi * (2.0 * x + 1.0) * k / (2.0 * w));
      out[static_cast<std::size_t>(y) * w + x] = s;
    }
  return out;
}

std::vector<double> transpose(const std::vector<double>& in, int w, int h) {
  std::vector<double> out(in.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out[static_cast<std::size_t>(x) * h + y] = in[static_cast<std::size_t>(y) * w + x];
  return out;
}

}  // namespace

std::vector<double> dct2(const std::vector<double>& plane, int w, int h) {
  auto t = dct_rows(plane, w, h);
  t = transpose(t, w, h);
  t = dct_rows(t, h, w);
  return transpose(t, h, w);
}

std::vector<double> idct2(const std::vector<double>& coeffs, int w, int h) {
  auto t = idct_rows(coeffs, w, h);
  t = transpose(t, w, h);
  t = idct_rows(t, h, w);
  return transpose(t, h, w);
}

ContinuousImage sample_lowfreq_direction(int w, int h, Rng& rng, int freq_div) {
  const int kx_max = std::max(1, w / freq_div);
  const int ky_max = std::max(1, h / freq_div);
  ContinuousImage dir = make_continuous(w, h);
  std::vector<double> coeffs(static_cast<std::size_t>(w) * h);
  for (int c = 0; c < 3; ++c) {
    std::fill(coeffs.begin(), coeffs.end(), 0.0);
    for (int ky = 0; ky < ky_max; ++ky)
      for (int kx = 0; kx < kx_max; ++kx)
        coeffs[static_cast<std::size_t>(ky) * w + kx] = rng.normal();
    auto plane = idct2(coeffs, w, h);
    for (int i = 0; i < w * h; ++i) dir.values[static_cast<std::size_t>(i) * 3 + c] = plane[i];
  }
  return dir;
}

}  // namespace hdb
