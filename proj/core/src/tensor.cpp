#include "ggig/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ggig/errors.hpp"

namespace ggig {

std::size_t shape_numel(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeError("negative tensor dimension " + std::to_string(d));
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor::Tensor(std::vector<int> shape)
    : shape_(std::move(shape)), values_(shape_numel(shape_), 0.0f) {}

Tensor::Tensor(std::vector<int> shape, std::vector<float> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (shape_numel(shape_) != values_.size()) {
    throw ShapeError("tensor shape does not match value count: shape holds " +
                     std::to_string(shape_numel(shape_)) + " elements, got " +
                     std::to_string(values_.size()));
  }
}

Tensor Tensor::full(std::vector<int> shape, float value) {
  Tensor t(std::move(shape));
  std::fill(t.values_.begin(), t.values_.end(), value);
  return t;
}

Tensor Tensor::zeros_like(const Tensor& other) { return Tensor(other.shape_); }

float& Tensor::at(int r, int c) {
  return values_[static_cast<std::size_t>(r) * static_cast<std::size_t>(shape_[1]) +
                 static_cast<std::size_t>(c)];
}

float Tensor::at(int r, int c) const {
  return values_[static_cast<std::size_t>(r) * static_cast<std::size_t>(shape_[1]) +
                 static_cast<std::size_t>(c)];
}

float& Tensor::at(int c, int h, int w) {
  const std::size_t hw = static_cast<std::size_t>(shape_[1]) * static_cast<std::size_t>(shape_[2]);
  return values_[static_cast<std::size_t>(c) * hw +
                 static_cast<std::size_t>(h) * static_cast<std::size_t>(shape_[2]) +
                 static_cast<std::size_t>(w)];
}

float Tensor::at(int c, int h, int w) const {
  const std::size_t hw = static_cast<std::size_t>(shape_[1]) * static_cast<std::size_t>(shape_[2]);
  return values_[static_cast<std::size_t>(c) * hw +
                 static_cast<std::size_t>(h) * static_cast<std::size_t>(shape_[2]) +
                 static_cast<std::size_t>(w)];
}

bool Tensor::all_finite() const {
  for (float v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

float Tensor::min_value() const {
  if (values_.empty()) throw ArgumentError("min_value on empty tensor");
  return *std::min_element(values_.begin(), values_.end());
}

float Tensor::max_value() const {
  if (values_.empty()) throw ArgumentError("max_value on empty tensor");
  return *std::max_element(values_.begin(), values_.end());
}

Tensor Tensor::reshaped(std::vector<int> new_shape) const {
  if (shape_numel(new_shape) != values_.size()) {
    throw ShapeError("reshape to incompatible element count");
  }
  return Tensor(std::move(new_shape), values_);
}

}  // namespace ggig
