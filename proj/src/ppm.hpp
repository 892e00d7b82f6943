#pragma once

#include <string>
#include <vector>

#include "image.hpp"

namespace hdb {

// Binary PPM (P6, maxval 255) codec. Encoding always writes the header as
// "P6\n<width> <height>\n255\n" followed by the raw interleaved RGB payload,
// so decode(encode(img)) round-trips bit-exactly. Decoding accepts any
// standard-conforming P6 header (whitespace runs and '#' comments).
std::vector<std::uint8_t> ppm_encode(const Image& img);
Image ppm_decode(const std::vector<std::uint8_t>& bytes);

Image ppm_read_file(const std::string& path);
void ppm_write_file(const Image& img, const std::string& path);

}  // namespace hdb
