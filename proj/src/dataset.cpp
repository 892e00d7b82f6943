#include "dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ppm.hpp"

namespace hdb {

namespace {

struct Rgb {
  double r, g, b;
};

// Fixed palette; class k reuses entry k mod 8.
const Rgb kPalette[8] = {
    {205.0, 70.0, 60.0},  {60.0, 195.0, 80.0},  {65.0, 80.0, 210.0},
    {210.0, 200.0, 60.0}, {200.0, 70.0, 205.0}, {60.0, 200.0, 200.0},
    {230.0, 150.0, 60.0}, {150.0, 60.0, 230.0},
};

}  // namespace

std::vector<LabeledImage> make_dataset(const SyntheticDatasetSpec& spec) {
  if (spec.classes < 1) throw Error(ErrorKind::model_data, "dataset: classes must be >= 1");
  if (spec.image_size < 4 || spec.image_size % 2 != 0)
    throw Error(ErrorKind::model_data, "dataset: image_size must be even and >= 4");
  if (spec.per_class < 1) throw Error(ErrorKind::model_data, "dataset: per_class must be >= 1");

  const int S = spec.image_size;
  const double center = 0.5 * (S - 1);
  const double ring = 0.22 * S;     // class centers sit on this ring
  const double sigma = 0.21 * S;    // blob radius
  const double jitter = 0.07 * S;   // per-sample center jitter
  const double pixel_noise = 52.0;  // iid noise, pixel levels

  Rng rng(spec.seed);
  std::vector<LabeledImage> out;
  out.reserve(static_cast<std::size_t>(spec.classes) * spec.per_class);

  for (int k = 0; k < spec.classes; ++k) {
    const Rgb color = kPalette[k % 8];
    const double angle = 2.0 * 3.14159265358979323846 * k / spec.classes;
    const double cx0 = center + ring * std::cos(angle);
    const double cy0 = center + ring * std::sin(angle);
    for (int s = 0; s < spec.per_class; ++s) {
      const double cx = cx0 + jitter * rng.normal();
      const double cy = cy0 + jitter * rng.normal();
      const double amp = 0.45 + 0.55 * rng.uniform();   // blob contrast varies per sample
      const double bg = 70.0 + 60.0 * rng.uniform();    // flat background gray
      const Rgb tint = {color.r + 16.0 * rng.normal(), color.g + 16.0 * rng.normal(),
                        color.b + 16.0 * rng.normal()};

      ContinuousImage x = make_continuous(S, S);
      for (int y = 0; y < S; ++y) {
        for (int xx = 0; xx < S; ++xx) {
          const double d2 = (xx - cx) * (xx - cx) + (y - cy) * (y - cy);
          const double w = amp * std::exp(-d2 / (2.0 * sigma * sigma));
          const std::size_t base = (static_cast<std::size_t>(y) * S + xx) * 3;
          x.values[base + 0] = bg + w * (tint.r - bg) + pixel_noise * rng.normal();
          x.values[base + 1] = bg + w * (tint.g - bg) + pixel_noise * rng.normal();
          x.values[base + 2] = bg + w * (tint.b - bg) + pixel_noise * rng.normal();
        }
      }
      out.push_back(LabeledImage{quantize(x), k});
    }
  }
  return out;
}

SyntheticDatasetSpec holdout_spec(const SyntheticDatasetSpec& spec, int per_class) {
  SyntheticDatasetSpec h = spec;
  h.per_class = per_class;
  h.seed = Rng::mix(spec.seed, 0x484F4C44ULL);  // independent stream
  return h;
}

double evaluate_accuracy(const Classifier& m, const std::vector<LabeledImage>& set) {
  if (set.empty()) throw Error(ErrorKind::model_data, "evaluate_accuracy: empty set");
  int correct = 0;
  for (const auto& s : set)
    if (predict(m, s.image) == s.label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(set.size());
}

std::vector<LabeledImage> load_ppm_dataset(const std::string& dir,
                                           const std::string& label_file) {
  std::ifstream in(label_file);
  if (!in) throw Error(ErrorKind::model_data, "cannot open label file " + label_file);
  std::vector<LabeledImage> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name;
    int label;
    if (!(ls >> name >> label))
      throw Error(ErrorKind::model_data, "label file: bad line '" + line + "'");
    out.push_back(LabeledImage{ppm_read_file(dir + "/" + name), label});
  }
  if (out.empty()) throw Error(ErrorKind::model_data, "label file lists no images");
  return out;
}

}  // namespace hdb
