#include "ggig/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ggig/errors.hpp"

namespace ggig {

Tensor to_grayscale(const Tensor& img) {
  if (img.rank() == 2) return img;
  if (img.rank() != 3) {
    throw ShapeError("to_grayscale expects [H,W] or [C,H,W], got rank " +
                     std::to_string(img.rank()));
  }
  const int c = img.dim(0), h = img.dim(1), w = img.dim(2);
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  Tensor out({h, w});
  if (c == 1) {
    std::copy_n(img.data(), hw, out.data());
  } else if (c == 3) {
    for (std::size_t p = 0; p < hw; ++p) {
      out[p] = 0.299f * img[p] + 0.587f * img[hw + p] + 0.114f * img[2 * hw + p];
    }
  } else {
    for (std::size_t p = 0; p < hw; ++p) {
      float sum = 0.0f;
      for (int ch = 0; ch < c; ++ch) sum += img[static_cast<std::size_t>(ch) * hw + p];
      out[p] = sum / static_cast<float>(c);
    }
  }
  return out;
}

std::vector<float> gaussian_kernel(float sigma) {
  if (!(sigma > 0.0f)) throw ArgumentError("gaussian sigma must be positive");
  const int radius = static_cast<int>(std::ceil(3.0f * sigma));
  std::vector<float> k(static_cast<std::size_t>(2 * radius + 1));
  const float inv = 1.0f / (2.0f * sigma * sigma);
  float sum = 0.0f;
  for (int d = -radius; d <= radius; ++d) {
    const float v = std::exp(-static_cast<float>(d * d) * inv);
    k[static_cast<std::size_t>(d + radius)] = v;
    sum += v;
  }
  for (float& v : k) v /= sum;
  return k;
}

namespace {

// One separable pass along a row-major axis with replicate borders.
void blur_axis(const float* src, float* dst, int h, int w, const std::vector<float>& k,
               bool horizontal) {
  const int radius = static_cast<int>(k.size() / 2);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      if (horizontal) {
        for (int d = -radius; d <= radius; ++d) {
          const int xx = std::clamp(x + d, 0, w - 1);
          acc += k[static_cast<std::size_t>(d + radius)] *
                 src[static_cast<std::size_t>(y) * w + xx];
        }
      } else {
        for (int d = -radius; d <= radius; ++d) {
          const int yy = std::clamp(y + d, 0, h - 1);
          acc += k[static_cast<std::size_t>(d + radius)] *
                 src[static_cast<std::size_t>(yy) * w + x];
        }
      }
      dst[static_cast<std::size_t>(y) * w + x] = acc;
    }
  }
}

}  // namespace

Tensor gaussian_blur(const Tensor& img, float sigma) {
  const std::vector<float> k = gaussian_kernel(sigma);
  if (img.rank() == 2) {
    Tensor tmp(img.shape()), out(img.shape());
    blur_axis(img.data(), tmp.data(), img.dim(0), img.dim(1), k, true);
    blur_axis(tmp.data(), out.data(), img.dim(0), img.dim(1), k, false);
    return out;
  }
  if (img.rank() != 3) {
    throw ShapeError("gaussian_blur expects [H,W] or [C,H,W], got rank " +
                     std::to_string(img.rank()));
  }
  const int c = img.dim(0), h = img.dim(1), w = img.dim(2);
  const std::size_t hw = static_cast<std::size_t>(h) * w;
  Tensor out(img.shape());
  Tensor tmp({h, w});
  for (int ch = 0; ch < c; ++ch) {
    blur_axis(img.data() + static_cast<std::size_t>(ch) * hw, tmp.data(), h, w, k, true);
    blur_axis(tmp.data(), out.data() + static_cast<std::size_t>(ch) * hw, h, w, k, false);
  }
  return out;
}

Tensor saliency_focused_image(const Tensor& img, const Tensor& blurred,
                              const Tensor& map, double percent) {
  if (!(percent > 0.0 && percent <= 100.0)) {
    throw ArgumentError("focus percent must lie in (0,100], got " + std::to_string(percent));
  }
  if (!img.same_shape(blurred)) {
    throw ShapeError("saliency_focused_image: blurred image shape differs from the original");
  }
  int h = 0, w = 0;
  if (img.rank() == 3) {
    h = img.dim(1);
    w = img.dim(2);
  } else if (img.rank() == 2) {
    h = img.dim(0);
    w = img.dim(1);
  } else {
    throw ShapeError("saliency_focused_image expects [H,W] or [C,H,W] images");
  }
  if (map.rank() != 2 || map.dim(0) != h || map.dim(1) != w) {
    throw ShapeError("saliency map shape does not match the image's spatial shape");
  }

  const std::size_t hw = static_cast<std::size_t>(h) * w;
  const std::size_t keep =
      static_cast<std::size_t>(std::floor(percent / 100.0 * static_cast<double>(hw)));
  std::vector<int> order(hw);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return map[static_cast<std::size_t>(a)] > map[static_cast<std::size_t>(b)];
  });

  Tensor out = blurred;
  const int channels = img.rank() == 3 ? img.dim(0) : 1;
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t p = static_cast<std::size_t>(order[i]);
    for (int ch = 0; ch < channels; ++ch) {
      out[static_cast<std::size_t>(ch) * hw + p] = img[static_cast<std::size_t>(ch) * hw + p];
    }
  }
  return out;
}

double shannon_entropy(const Tensor& img) {
  const Tensor gray = to_grayscale(img);
  if (gray.size() == 0) throw ArgumentError("entropy of an empty image");
  unsigned long hist[256] = {};
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const float v = std::clamp(gray[i], 0.0f, 1.0f);
    int bin = static_cast<int>(v * 256.0f);
    if (bin > 255) bin = 255;
    ++hist[bin];
  }
  const double n = static_cast<double>(gray.size());
  double h = 0.0;
  for (unsigned long count : hist) {
    if (count == 0) continue;
    const double p = static_cast<double>(count) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double normalized_entropy(const Tensor& test_img, const Tensor& reference_img) {
  const double ref = shannon_entropy(reference_img);
  if (ref == 0.0) {
    throw ArgumentError("normalized_entropy: reference image has zero entropy");
  }
  return shannon_entropy(test_img) / ref;
}

}  // namespace ggig
