#include "checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace hdb {

namespace {

constexpr char kMagic[4] = {'H', 'D', 'B', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kArchConvNet = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
void put_f64(std::string& out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, 8);
  put_u64(out, bits);
}

struct Reader {
  const std::string& data;
  std::size_t pos = 0;
  void need(std::size_t n) {
    if (data.size() - pos < n)
      throw Error(ErrorKind::model_data, "checkpoint: truncated file");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
    return v;
  }
  double f64() {
    std::uint64_t bits = u64();
    double d;
    std::memcpy(&d, &bits, 8);
    return d;
  }
};

}  // namespace

void save_checkpoint(const ConvNet& net, const std::string& path) {
  std::string out;
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, kArchConvNet);
  put_u32(out, static_cast<std::uint32_t>(net.input_width()));
  put_u32(out, static_cast<std::uint32_t>(net.input_height()));
  put_u32(out, static_cast<std::uint32_t>(net.num_classes()));
  put_u64(out, net.param_count());
  for (double v : net.params()) put_f64(out, v);

  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::internal, "checkpoint: cannot write " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

std::shared_ptr<ConvNet> load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::model_data, "checkpoint: cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (data.size() < 4 || std::memcmp(data.data(), kMagic, 4) != 0)
    throw Error(ErrorKind::model_data, "checkpoint: bad magic");
  Reader r{data, 4};
  if (r.u32() != kVersion)
    throw Error(ErrorKind::model_data, "checkpoint: unsupported version");
  if (r.u32() != kArchConvNet)
    throw Error(ErrorKind::model_data, "checkpoint: unknown architecture id");
  const int width = static_cast<int>(r.u32());
  const int height = static_cast<int>(r.u32());
  const int classes = static_cast<int>(r.u32());
  const std::uint64_t count = r.u64();
  auto net = std::make_shared<ConvNet>(width, height, classes);
  if (count != net->param_count())
    throw Error(ErrorKind::model_data, "checkpoint: parameter count mismatch");
  for (auto& v : net->params()) v = r.f64();
  return net;
}

}  // namespace hdb
