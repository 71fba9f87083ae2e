#pragma once

#include <cstddef>
#include <vector>

namespace ggig {

std::size_t shape_numel(const std::vector<int>& shape);

// Dense row-major float32 tensor. Shapes use the conventions
// [C,H,W] for images, [N,C,H,W] for batches, [H,W] for maps, [F] for vectors.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape);  // zero-filled
  Tensor(std::vector<int> shape, std::vector<float> values);

  static Tensor full(std::vector<int> shape, float value);
  static Tensor zeros_like(const Tensor& other);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  int dim(int i) const { return shape_[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  float* data() { return values_.data(); }
  const float* data() const { return values_.data(); }
  std::vector<float>& values() { return values_; }
  const std::vector<float>& values() const { return values_; }

  float& operator[](std::size_t i) { return values_[i]; }
  float operator[](std::size_t i) const { return values_[i]; }
  float& at(int r, int c);
  float at(int r, int c) const;
  float& at(int c, int h, int w);
  float at(int c, int h, int w) const;

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;
  float min_value() const;
  float max_value() const;

  // Same storage reinterpreted under a new shape of equal element count.
  Tensor reshaped(std::vector<int> new_shape) const;

  bool operator==(const Tensor& other) const = default;

 private:
  std::vector<int> shape_;
  std::vector<float> values_;
};

}  // namespace ggig
