#pragma once

#include <vector>

#include "image.hpp"
#include "rng.hpp"

namespace hdb {

// Orthonormal type-II DCT of a single channel plane (row-major, w x h) and
// its inverse (type-III). Naive O(N^2) per axis; plenty for desk-scale
// images.
std::vector<double> dct2(const std::vector<double>& plane, int w, int h);
std::vector<double> idct2(const std::vector<double>& coeffs, int w, int h);

// Random direction whose per-channel spectrum lives in the lowest quarter of
// frequencies per axis: coefficients with kx < max(1, w/4) and
// ky < max(1, h/4) are drawn i.i.d. standard normal, everything else is
// zero, then transformed back to pixel space. Not normalized.
ContinuousImage sample_lowfreq_direction(int w, int h, Rng& rng, int freq_div = 4);

}  // namespace hdb
