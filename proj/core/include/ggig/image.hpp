#pragma once

#include <vector>

#include "ggig/tensor.hpp"

namespace ggig {

// [H,W] grayscale view: [H,W] copies through, [1,H,W] drops the channel axis,
// [3,H,W] takes luma (0.299 R + 0.587 G + 0.114 B), other channel counts the
// channel mean.
Tensor to_grayscale(const Tensor& img);

// Normalized 1-D Gaussian taps with radius ceil(3σ); weights sum to 1.
std::vector<float> gaussian_kernel(float sigma);

// Separable Gaussian blur with replicate borders; accepts [C,H,W] or [H,W].
Tensor gaussian_blur(const Tensor& img, float sigma);

// The blurred image with the top `percent`% of map-ranked pixels restored
// from the original: exactly floor(percent/100 · H·W) of them, ordered by
// descending map value with row-major scan order breaking ties; every channel
// of a chosen pixel is copied. percent ∈ (0,100]; at 100 the result is the
// original image, bit for bit.
Tensor saliency_focused_image(const Tensor& img, const Tensor& blurred,
                              const Tensor& map, double percent);

// Shannon entropy (bits) of the 256-bin histogram of the grayscale image,
// values clamped to [0,1] before binning.
double shannon_entropy(const Tensor& img);

// H(test) / H(reference); ArgumentError when the reference entropy is zero.
double normalized_entropy(const Tensor& test_img, const Tensor& reference_img);

}  // namespace ggig
