#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcc {

enum class ErrorKind {
  kInstanceInvalid,
  kInvalidPath,
  kCapacityExceeded,
  kIndex,
  kParse,
  kEvaluation,
  kSize,
  kGeneration,
  kUndefinedGain,
  kEmptyTable,
  kIo,
  kUsage,
  kInvalidParams,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pcc
