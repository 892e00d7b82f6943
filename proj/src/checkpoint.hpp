#pragma once

#include <memory>
#include <string>

#include "classifier.hpp"

namespace hdb {

// Model checkpoint, little-endian binary:
//   bytes 0..3   magic "HDBM"
//   u32          format version (1)
//   u32          architecture id (1 = the fixed ConvNet)
//   u32 x 3      input width, input height, class count
//   u64          parameter count
//   f64 x count  parameters in ConvNet layout order
void save_checkpoint(const ConvNet& net, const std::string& path);
std::shared_ptr<ConvNet> load_checkpoint(const std::string& path);

}  // namespace hdb
