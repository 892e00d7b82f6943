#include "ppm.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>

namespace hdb {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
// Returns false when the input ends first.
bool next_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos,
                std::string& token) {
  token.clear();
  while (pos < bytes.size()) {
    char c = static_cast<char>(bytes[pos]);
    if (c == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  while (pos < bytes.size() &&
         !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
         bytes[pos] != '#') {
    token.push_back(static_cast<char>(bytes[pos]));
    ++pos;
  }
  return !token.empty();
}

int parse_positive_int(const std::string& token, const char* what) {
  if (token.empty() || token.size() > 9)
    throw Error(ErrorKind::internal, std::string("ppm: malformed ") + what);
  long value = 0;
  for (char c : token) {
    if (c < '0' || c > '9')
      throw Error(ErrorKind::internal, std::string("ppm: malformed ") + what);
    value = value * 10 + (c - '0');
  }
  if (value <= 0)
    throw Error(ErrorKind::internal, std::string("ppm: malformed ") + what);
  return static_cast<int>(value);
}

}  // namespace

std::vector<std::uint8_t> ppm_encode(const Image& img) {
  if (img.width <= 0 || img.height <= 0 ||
      img.pixels.size() != static_cast<std::size_t>(img.n()))
    throw Error(ErrorKind::internal, "ppm: invalid image");
  char header[64];
  int len = std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n",
                          img.width, img.height);
  std::vector<std::uint8_t> out(header, header + len);
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

Image ppm_decode(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 0;
  std::string token;
  if (!next_token(bytes, pos, token))
    throw Error(ErrorKind::internal, "ppm: empty input");
  if (token != "P6")
    throw Error(ErrorKind::internal,
                "ppm: unsupported format '" + token + "' (want binary P6)");
  std::string w_tok, h_tok, max_tok;
  if (!next_token(bytes, pos, w_tok) || !next_token(bytes, pos, h_tok) ||
      !next_token(bytes, pos, max_tok))
    throw Error(ErrorKind::internal, "ppm: truncated header");
  int width = parse_positive_int(w_tok, "width");
  int height = parse_positive_int(h_tok, "height");
  if (max_tok != "255")
    throw Error(ErrorKind::internal, "ppm: maxval must be 255, got " + max_tok);
  // Exactly one whitespace byte separates the header from the payload.
  if (pos >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw Error(ErrorKind::internal, "ppm: missing header terminator");
  ++pos;
  Image img = make_image(width, height);
  std::size_t need = static_cast<std::size_t>(img.n());
  if (bytes.size() - pos < need)
    throw Error(ErrorKind::internal, "ppm: truncated payload");
  std::copy(bytes.begin() + pos, bytes.begin() + pos + need, img.pixels.begin());
  return img;
}

Image ppm_read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::model_data, "ppm: cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return ppm_decode(bytes);
}

void ppm_write_file(const Image& img, const std::string& path) {
  auto bytes = ppm_encode(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::internal, "ppm: cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

}  // namespace hdb
