#pragma once

#include <stdexcept>
#include <string>

namespace deepfir {

// Precondition violations on arguments (sizes, ranges, mode mismatches).
class InvalidArgument : public std::invalid_argument {
 public:
  explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed external data: DFW1 weight files, WAV files.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// A filter whose spectrum is identically zero; log-magnitude and
// group-delay computations are undefined for it.
class DegenerateFilter : public std::domain_error {
 public:
  explicit DegenerateFilter(const std::string& what) : std::domain_error(what) {}
};

}  // namespace deepfir
