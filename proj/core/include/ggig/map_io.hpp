#pragma once

#include <string>

#include "ggig/tensor.hpp"

namespace ggig {

// Portable float array file:
//   FMAP 1
//   shape <d0> <d1> ...
//   data
//   <row-major little-endian float32 payload>
// Carries no method metadata, so two methods that agree numerically produce
// byte-identical files; provenance lives in the file name.
void write_map_file(const std::string& path, const Tensor& t);
Tensor read_map_file(const std::string& path);

}  // namespace ggig
