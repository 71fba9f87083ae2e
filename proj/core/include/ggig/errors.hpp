#pragma once

#include <stdexcept>
#include <string>

namespace ggig {

// Root of the toolkit's exception hierarchy.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad argument values: out-of-range class index, negative epsilon, percent
// outside (0,100], unknown method name, mismatched baseline shape, ...
struct ArgumentError : Error {
  using Error::Error;
};

// Tensor or layer shape mismatch.
struct ShapeError : Error {
  using Error::Error;
};

// Malformed or inconsistent file contents (IDX, weight files, map files).
struct FormatError : Error {
  using Error::Error;
};

// Non-finite values produced during training or gradient ascent.
struct DivergedError : Error {
  using Error::Error;
};

}  // namespace ggig
