#pragma once

#include <stdexcept>
#include <string>

namespace hdb {

// Error categories. The numeric values double as process exit codes and as
// the status codes of the C API (see include/hdbench.h).
enum class ErrorKind : int {
  internal = 1,    // invalid argument, I/O failure, broken invariant
  config = 2,      // bad configuration key/value
  model_data = 3,  // model load / dataset problems
  fit = 4,         // curve fit failures (degenerate or non-decaying data)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hdb
