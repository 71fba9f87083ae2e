#pragma once

// Layer primitives shared by the inference/gradient paths in network.cpp and
// the batched training path in train.cpp. Not part of the installed API.

#include <cstddef>
#include <vector>

#include "ggig/network.hpp"

namespace ggig::detail {

struct ConvGeom {
  int ic, ih, iw;
  int oc, oh, ow;
  int k, stride, pad;
  int col_rows() const { return ic * k * k; }
  std::size_t col_size() const {
    return static_cast<std::size_t>(col_rows()) * out_pix();
  }
  int out_pix() const { return oh * ow; }
};

ConvGeom conv_geom(const LayerSpec& spec, const std::vector<int>& in_shape);

// col is [col_rows × out_pix]; row (c*k+ky)*k+kx holds the input value under
// kernel offset (ky,kx) for every output position, zero where padding reaches
// outside the image.
void im2col(const ConvGeom& g, const float* x, float* col);
// Transpose-scatter of im2col; accumulates into dx (caller zero-fills).
void col2im_acc(const ConvGeom& g, const float* col, float* dx);

void conv_forward(const ConvGeom& g, const LayerParams& p, const float* x,
                  float* col, float* y);
void conv_backward_input(const ConvGeom& g, const LayerParams& p, const float* dy,
                         float* dcol, float* dx);

// idx records the flat input offset of each window max (first occurrence on
// ties, row-major scan).
void maxpool_forward(const float* x, int c, int ih, int iw, int window,
                     float* y, int* idx);
void maxpool_backward(const int* idx, const float* dy, std::size_t out_n, float* dx);

void relu_forward(const float* x, float* y, std::size_t n);
// x is the layer's input (pre-activation); gradient at exactly zero is zero.
void relu_backward(const float* x, const float* dy, float* dx, std::size_t n);

// y[1×out] = x[1×in] · Wᵀ + b   (bias added after the product)
void dense_forward(const LayerParams& p, const float* x, float* y);
void dense_backward_input(const LayerParams& p, const float* dy, float* dx);

// Y[batch×out] = X[batch×in] · Wᵀ + b. Row s is bit-identical to
// dense_forward on sample s (the dot kernel's pattern depends only on K).
void dense_forward_batch(const LayerParams& p, const float* X, int batch, float* Y);

// Batched evaluation state: acts[i] holds the whole batch's input to layer i,
// sample-major. With keep_cols, im2col output is retained per sample (the
// trainer needs it for weight gradients); otherwise one sample's worth of
// scratch is reused.
struct BatchBuffers {
  int capacity = 0;
  bool keep_cols = false;
  std::vector<std::vector<float>> acts;
  std::vector<std::vector<float>> cols;
  std::vector<std::vector<int>> pool_idx;
};

void prepare_batch_buffers(const Network& net, int batch, bool keep_cols,
                           BatchBuffers& bb);
// xs: batch·numel(input_shape) floats. Logits land in bb.acts.back().
void forward_batch_into(const Network& net, const float* xs, int batch, BatchBuffers& bb);

}  // namespace ggig::detail
