#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "image.hpp"

namespace hdb {

// Spec for the synthetic desk-scale dataset. Generation is a pure function
// of the spec: the same spec always yields the same images.
struct SyntheticDatasetSpec {
  int classes = 2;
  int image_size = 16;  // square images
  int per_class = 200;
  std::uint64_t seed = 1;
};

// Class k is a soft color blob with a class-specific mean color and position
// plus per-sample jitter and per-pixel noise. Noise levels are chosen so the
// classes are separable but not trivially so.
std::vector<LabeledImage> make_dataset(const SyntheticDatasetSpec& spec);

// Companion held-out set drawn from the same distribution but a derived seed.
SyntheticDatasetSpec holdout_spec(const SyntheticDatasetSpec& spec, int per_class = 50);

double evaluate_accuracy(const Classifier& m, const std::vector<LabeledImage>& set);

// Loads a directory of PPM files with a label file. Each line of the label
// file is "<filename> <label>"; blank lines and '#' comments are skipped.
std::vector<LabeledImage> load_ppm_dataset(const std::string& dir,
                                           const std::string& label_file);

}  // namespace hdb
