#include "ggig/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "engine_detail.hpp"
#include "ggig/errors.hpp"
#include "ggig/gemm.hpp"

namespace ggig {

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::Conv2d: return "conv2d";
    case LayerKind::MaxPool2d: return "maxpool2d";
    case LayerKind::Relu: return "relu";
    case LayerKind::Flatten: return "flatten";
    case LayerKind::Dense: return "dense";
  }
  return "?";
}

LayerSpec LayerSpec::conv2d(int in_channels, int out_channels, int kernel,
                            int stride, int pad) {
  if (in_channels < 1 || out_channels < 1 || kernel < 1 || stride < 1 || pad < 0) {
    throw ArgumentError("conv2d: channels/kernel/stride must be positive, pad >= 0");
  }
  LayerSpec s;
  s.kind = LayerKind::Conv2d;
  s.in_channels = in_channels;
  s.out_channels = out_channels;
  s.kernel = kernel;
  s.stride = stride;
  s.pad = pad;
  return s;
}

LayerSpec LayerSpec::maxpool2d(int window) {
  if (window < 1) throw ArgumentError("maxpool2d: window must be positive");
  LayerSpec s;
  s.kind = LayerKind::MaxPool2d;
  s.window = window;
  return s;
}

LayerSpec LayerSpec::relu() {
  LayerSpec s;
  s.kind = LayerKind::Relu;
  return s;
}

LayerSpec LayerSpec::flatten() {
  LayerSpec s;
  s.kind = LayerKind::Flatten;
  return s;
}

LayerSpec LayerSpec::dense(int in_features, int out_features) {
  if (in_features < 1 || out_features < 1) {
    throw ArgumentError("dense: feature counts must be positive");
  }
  LayerSpec s;
  s.kind = LayerKind::Dense;
  s.in_features = in_features;
  s.out_features = out_features;
  return s;
}

namespace {

std::string shape_str(const std::vector<int>& shape) {
  std::string s = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

std::vector<int> infer_output_shape(int layer_index, const LayerSpec& spec,
                                    const std::vector<int>& in) {
  const std::string where =
      "layer " + std::to_string(layer_index) + " (" + layer_kind_name(spec.kind) + "): ";
  switch (spec.kind) {
    case LayerKind::Conv2d: {
      if (in.size() != 3) throw ShapeError(where + "needs [C,H,W] input, got " + shape_str(in));
      if (in[0] != spec.in_channels) {
        throw ShapeError(where + "expects " + std::to_string(spec.in_channels) +
                         " input channels, got " + std::to_string(in[0]));
      }
      const int oh = (in[1] + 2 * spec.pad - spec.kernel) / spec.stride + 1;
      const int ow = (in[2] + 2 * spec.pad - spec.kernel) / spec.stride + 1;
      if (in[1] + 2 * spec.pad < spec.kernel || in[2] + 2 * spec.pad < spec.kernel) {
        throw ShapeError(where + "kernel larger than padded input " + shape_str(in));
      }
      return {spec.out_channels, oh, ow};
    }
    case LayerKind::MaxPool2d: {
      if (in.size() != 3) throw ShapeError(where + "needs [C,H,W] input, got " + shape_str(in));
      const int oh = in[1] / spec.window;
      const int ow = in[2] / spec.window;
      if (oh < 1 || ow < 1) throw ShapeError(where + "window larger than input " + shape_str(in));
      return {in[0], oh, ow};
    }
    case LayerKind::Relu:
      return in;
    case LayerKind::Flatten:
      return {static_cast<int>(shape_numel(in))};
    case LayerKind::Dense: {
      if (in.size() != 1) throw ShapeError(where + "needs a flat input, got " + shape_str(in));
      if (in[0] != spec.in_features) {
        throw ShapeError(where + "expects " + std::to_string(spec.in_features) +
                         " features, got " + std::to_string(in[0]));
      }
      return {spec.out_features};
    }
  }
  throw ShapeError(where + "unknown layer kind");
}

LayerParams make_params(const LayerSpec& spec) {
  LayerParams p;
  if (spec.kind == LayerKind::Conv2d) {
    p.weight = Tensor({spec.out_channels, spec.in_channels, spec.kernel, spec.kernel});
    p.bias = Tensor({spec.out_channels});
  } else if (spec.kind == LayerKind::Dense) {
    p.weight = Tensor({spec.out_features, spec.in_features});
    p.bias = Tensor({spec.out_features});
  }
  return p;
}

}  // namespace

Network::Network(std::vector<int> input_shape, std::vector<LayerSpec> layers)
    : input_shape_(std::move(input_shape)), layers_(std::move(layers)) {
  if (layers_.empty()) throw ArgumentError("network needs at least one layer");
  if (input_shape_.empty() || shape_numel(input_shape_) == 0) {
    throw ShapeError("empty network input shape");
  }
  std::vector<int> cur = input_shape_;
  output_shapes_.reserve(layers_.size());
  params_.reserve(layers_.size());
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    cur = infer_output_shape(static_cast<int>(i), layers_[i], cur);
    output_shapes_.push_back(cur);
    params_.push_back(make_params(layers_[i]));
  }
  if (cur.size() != 1) {
    throw ShapeError("network output must be a vector of class scores, got " + shape_str(cur));
  }
  class_count_ = cur[0];
}

const std::vector<int>& Network::output_shape(int layer) const {
  return output_shapes_[static_cast<std::size_t>(layer)];
}

const LayerParams& Network::params(int layer) const {
  return params_[static_cast<std::size_t>(layer)];
}

LayerParams& Network::params(int layer) {
  return params_[static_cast<std::size_t>(layer)];
}

std::vector<int> Network::parameterized_layers() const {
  std::vector<int> idx;
  for (int i = 0; i < layer_count(); ++i) {
    if (layers_[static_cast<std::size_t>(i)].has_params()) idx.push_back(i);
  }
  return idx;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const LayerParams& p : params_) n += p.weight.size() + p.bias.size();
  return n;
}

std::vector<float> Network::flat_parameters() const {
  std::vector<float> flat;
  flat.reserve(parameter_count());
  for (const LayerParams& p : params_) {
    flat.insert(flat.end(), p.weight.values().begin(), p.weight.values().end());
    flat.insert(flat.end(), p.bias.values().begin(), p.bias.values().end());
  }
  return flat;
}

void Network::set_flat_parameters(const std::vector<float>& values) {
  if (values.size() != parameter_count()) {
    throw ArgumentError("flat parameter vector has " + std::to_string(values.size()) +
                        " values, network holds " + std::to_string(parameter_count()));
  }
  std::size_t off = 0;
  for (LayerParams& p : params_) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(off), p.weight.size(),
                p.weight.values().begin());
    off += p.weight.size();
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(off), p.bias.size(),
                p.bias.values().begin());
    off += p.bias.size();
  }
}

// ---------------------------------------------------------------------------
// layer primitives

namespace detail {

ConvGeom conv_geom(const LayerSpec& spec, const std::vector<int>& in_shape) {
  ConvGeom g;
  g.ic = in_shape[0];
  g.ih = in_shape[1];
  g.iw = in_shape[2];
  g.k = spec.kernel;
  g.stride = spec.stride;
  g.pad = spec.pad;
  g.oc = spec.out_channels;
  g.oh = (g.ih + 2 * g.pad - g.k) / g.stride + 1;
  g.ow = (g.iw + 2 * g.pad - g.k) / g.stride + 1;
  return g;
}

void im2col(const ConvGeom& g, const float* x, float* col) {
  const int opix = g.out_pix();
  for (int c = 0; c < g.ic; ++c) {
    for (int ky = 0; ky < g.k; ++ky) {
      for (int kx = 0; kx < g.k; ++kx) {
        float* dst = col + static_cast<std::size_t>((c * g.k + ky) * g.k + kx) * opix;
        for (int oy = 0; oy < g.oh; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          float* drow = dst + static_cast<std::size_t>(oy) * g.ow;
          if (iy < 0 || iy >= g.ih) {
            std::fill(drow, drow + g.ow, 0.0f);
            continue;
          }
          const float* srow = x + (static_cast<std::size_t>(c) * g.ih + iy) * g.iw;
          for (int ox = 0; ox < g.ow; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            drow[ox] = (ix >= 0 && ix < g.iw) ? srow[ix] : 0.0f;
          }
        }
      }
    }
  }
}

void col2im_acc(const ConvGeom& g, const float* col, float* dx) {
  const int opix = g.out_pix();
  for (int c = 0; c < g.ic; ++c) {
    for (int ky = 0; ky < g.k; ++ky) {
      for (int kx = 0; kx < g.k; ++kx) {
        const float* src = col + static_cast<std::size_t>((c * g.k + ky) * g.k + kx) * opix;
        for (int oy = 0; oy < g.oh; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          if (iy < 0 || iy >= g.ih) continue;
          float* drow = dx + (static_cast<std::size_t>(c) * g.ih + iy) * g.iw;
          const float* srow = src + static_cast<std::size_t>(oy) * g.ow;
          for (int ox = 0; ox < g.ow; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            if (ix >= 0 && ix < g.iw) drow[ix] += srow[ox];
          }
        }
      }
    }
  }
}

void conv_forward(const ConvGeom& g, const LayerParams& p, const float* x,
                  float* col, float* y) {
  im2col(g, x, col);
  const int opix = g.out_pix();
  std::fill(y, y + static_cast<std::size_t>(g.oc) * opix, 0.0f);
  gemm_nn_acc(y, p.weight.data(), col, g.oc, g.col_rows(), opix);
  for (int o = 0; o < g.oc; ++o) {
    const float b = p.bias[static_cast<std::size_t>(o)];
    float* row = y + static_cast<std::size_t>(o) * opix;
    for (int j = 0; j < opix; ++j) row[j] += b;
  }
}

void conv_backward_input(const ConvGeom& g, const LayerParams& p, const float* dy,
                         float* dcol, float* dx) {
  const int opix = g.out_pix();
  const int rows = g.col_rows();
  std::fill(dcol, dcol + static_cast<std::size_t>(rows) * opix, 0.0f);
  gemm_tn_acc(dcol, p.weight.data(), dy, rows, g.oc, opix);
  std::fill(dx, dx + static_cast<std::size_t>(g.ic) * g.ih * g.iw, 0.0f);
  col2im_acc(g, dcol, dx);
}

void maxpool_forward(const float* x, int c, int ih, int iw, int window,
                     float* y, int* idx) {
  const int oh = ih / window, ow = iw / window;
  std::size_t out = 0;
  for (int ch = 0; ch < c; ++ch) {
    const float* plane = x + static_cast<std::size_t>(ch) * ih * iw;
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox) {
        int best = (oy * window) * iw + ox * window;
        float bv = plane[best];
        for (int wy = 0; wy < window; ++wy) {
          const int row = (oy * window + wy) * iw + ox * window;
          for (int wx = 0; wx < window; ++wx) {
            const float v = plane[row + wx];
            if (v > bv) {  // strict: first occurrence wins on ties
              bv = v;
              best = row + wx;
            }
          }
        }
        y[out] = bv;
        idx[out] = ch * ih * iw + best;
        ++out;
      }
    }
  }
}

void maxpool_backward(const int* idx, const float* dy, std::size_t out_n, float* dx) {
  for (std::size_t i = 0; i < out_n; ++i) {
    dx[static_cast<std::size_t>(idx[i])] += dy[i];
  }
}

void relu_forward(const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] > 0.0f ? x[i] : 0.0f;
}

void relu_backward(const float* x, const float* dy, float* dx, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dx[i] = x[i] > 0.0f ? dy[i] : 0.0f;
}

void dense_forward(const LayerParams& p, const float* x, float* y) {
  const int out = p.weight.dim(0), in = p.weight.dim(1);
  std::fill(y, y + out, 0.0f);
  gemm_nt_acc(y, x, p.weight.data(), 1, in, out);
  for (int o = 0; o < out; ++o) y[o] += p.bias[static_cast<std::size_t>(o)];
}

void dense_backward_input(const LayerParams& p, const float* dy, float* dx) {
  const int out = p.weight.dim(0), in = p.weight.dim(1);
  std::fill(dx, dx + in, 0.0f);
  gemm_tn_acc(dx, p.weight.data(), dy, in, out, 1);
}

void dense_forward_batch(const LayerParams& p, const float* X, int batch, float* Y) {
  const int out = p.weight.dim(0), in = p.weight.dim(1);
  std::fill(Y, Y + static_cast<std::size_t>(batch) * out, 0.0f);
  gemm_nt_acc(Y, X, p.weight.data(), batch, in, out);
  for (int s = 0; s < batch; ++s) {
    float* row = Y + static_cast<std::size_t>(s) * out;
    for (int o = 0; o < out; ++o) row[o] += p.bias[static_cast<std::size_t>(o)];
  }
}

void prepare_batch_buffers(const Network& net, int batch, bool keep_cols,
                           BatchBuffers& bb) {
  const std::size_t L = static_cast<std::size_t>(net.layer_count());
  bb.capacity = batch;
  bb.keep_cols = keep_cols;
  bb.acts.resize(L + 1);
  bb.cols.resize(L);
  bb.pool_idx.resize(L);
  auto grow = [](auto& buf, std::size_t n) {
    if (buf.size() < n) buf.resize(n);
  };
  const std::size_t b = static_cast<std::size_t>(batch);
  grow(bb.acts[0], b * shape_numel(net.input_shape()));
  for (std::size_t i = 0; i < L; ++i) {
    grow(bb.acts[i + 1], b * shape_numel(net.output_shape(static_cast<int>(i))));
    const LayerSpec& spec = net.layers()[i];
    const std::vector<int>& in =
        i == 0 ? net.input_shape() : net.output_shape(static_cast<int>(i) - 1);
    if (spec.kind == LayerKind::Conv2d) {
      grow(bb.cols[i], (keep_cols ? b : 1) * conv_geom(spec, in).col_size());
    } else if (spec.kind == LayerKind::MaxPool2d) {
      grow(bb.pool_idx[i], b * shape_numel(net.output_shape(static_cast<int>(i))));
    }
  }
}

void forward_batch_into(const Network& net, const float* xs, int batch, BatchBuffers& bb) {
  const std::size_t in_stride = shape_numel(net.input_shape());
  std::copy_n(xs, static_cast<std::size_t>(batch) * in_stride, bb.acts[0].data());
  for (int i = 0; i < net.layer_count(); ++i) {
    const LayerSpec& spec = net.layers()[static_cast<std::size_t>(i)];
    const std::vector<int>& in = i == 0 ? net.input_shape() : net.output_shape(i - 1);
    const std::size_t in_n = shape_numel(in);
    const std::size_t out_n = shape_numel(net.output_shape(i));
    const float* src = bb.acts[static_cast<std::size_t>(i)].data();
    float* dst = bb.acts[static_cast<std::size_t>(i) + 1].data();
    switch (spec.kind) {
      case LayerKind::Conv2d: {
        const ConvGeom g = conv_geom(spec, in);
        for (int s = 0; s < batch; ++s) {
          float* col = bb.cols[static_cast<std::size_t>(i)].data() +
                       (bb.keep_cols ? static_cast<std::size_t>(s) * g.col_size() : 0);
          conv_forward(g, net.params(i), src + static_cast<std::size_t>(s) * in_n, col,
                       dst + static_cast<std::size_t>(s) * out_n);
        }
        break;
      }
      case LayerKind::MaxPool2d:
        for (int s = 0; s < batch; ++s) {
          maxpool_forward(src + static_cast<std::size_t>(s) * in_n, in[0], in[1], in[2],
                          spec.window, dst + static_cast<std::size_t>(s) * out_n,
                          bb.pool_idx[static_cast<std::size_t>(i)].data() +
                              static_cast<std::size_t>(s) * out_n);
        }
        break;
      case LayerKind::Relu:
        relu_forward(src, dst, static_cast<std::size_t>(batch) * in_n);
        break;
      case LayerKind::Flatten:
        std::copy_n(src, static_cast<std::size_t>(batch) * in_n, dst);
        break;
      case LayerKind::Dense:
        dense_forward_batch(net.params(i), src, batch, dst);
        break;
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// forward / gradient

namespace {

void ensure(std::vector<float>& buf, std::size_t n) {
  if (buf.size() < n) buf.resize(n);
}

void prepare_workspace(const Network& net, EvalWorkspace& ws, bool for_backward) {
  const std::size_t L = static_cast<std::size_t>(net.layer_count());
  ws.acts.resize(L + 1);
  ws.cols.resize(L);
  ws.pool_idx.resize(L);
  ensure(ws.acts[0], shape_numel(net.input_shape()));
  for (std::size_t i = 0; i < L; ++i) {
    ensure(ws.acts[i + 1], shape_numel(net.output_shape(static_cast<int>(i))));
    const LayerSpec& spec = net.layers()[i];
    if (spec.kind == LayerKind::Conv2d) {
      const std::vector<int>& in =
          i == 0 ? net.input_shape() : net.output_shape(static_cast<int>(i) - 1);
      ensure(ws.cols[i], detail::conv_geom(spec, in).col_size());
    } else if (spec.kind == LayerKind::MaxPool2d) {
      std::size_t n = shape_numel(net.output_shape(static_cast<int>(i)));
      if (ws.pool_idx[i].size() < n) ws.pool_idx[i].resize(n);
    }
  }
  if (for_backward) {
    ws.grads.resize(L + 1);
    for (std::size_t i = 0; i <= L; ++i) ensure(ws.grads[i], ws.acts[i].size());
  }
}

void run_forward(const Network& net, const Tensor& x, EvalWorkspace& ws) {
  if (x.shape() != net.input_shape()) {
    throw ShapeError("input shape " + std::to_string(x.rank()) +
                     "-d does not match network input");
  }
  std::copy(x.values().begin(), x.values().end(), ws.acts[0].begin());
  for (int i = 0; i < net.layer_count(); ++i) {
    const LayerSpec& spec = net.layers()[static_cast<std::size_t>(i)];
    const std::vector<int>& in = i == 0 ? net.input_shape() : net.output_shape(i - 1);
    const float* src = ws.acts[static_cast<std::size_t>(i)].data();
    float* dst = ws.acts[static_cast<std::size_t>(i) + 1].data();
    switch (spec.kind) {
      case LayerKind::Conv2d:
        detail::conv_forward(detail::conv_geom(spec, in), net.params(i), src,
                             ws.cols[static_cast<std::size_t>(i)].data(), dst);
        break;
      case LayerKind::MaxPool2d:
        detail::maxpool_forward(src, in[0], in[1], in[2], spec.window, dst,
                                ws.pool_idx[static_cast<std::size_t>(i)].data());
        break;
      case LayerKind::Relu:
        detail::relu_forward(src, dst, shape_numel(in));
        break;
      case LayerKind::Flatten:
        std::copy_n(src, shape_numel(in), dst);
        break;
      case LayerKind::Dense:
        detail::dense_forward(net.params(i), src, dst);
        break;
    }
  }
}

}  // namespace

Tensor forward(const Network& net, const Tensor& x, EvalWorkspace& ws) {
  prepare_workspace(net, ws, false);
  run_forward(net, x, ws);
  const std::vector<float>& out = ws.acts[static_cast<std::size_t>(net.layer_count())];
  return Tensor({net.class_count()},
                std::vector<float>(out.begin(), out.begin() + net.class_count()));
}

Tensor forward(const Network& net, const Tensor& x) {
  EvalWorkspace ws;
  return forward(net, x, ws);
}

Tensor forward_batch(const Network& net, const Tensor& xs) {
  if (xs.rank() < 2) throw ShapeError("forward_batch input must be [N, ...]");
  const std::vector<int> sample_shape(xs.shape().begin() + 1, xs.shape().end());
  if (sample_shape != net.input_shape()) {
    throw ShapeError("forward_batch sample shape does not match network input");
  }
  const int n = xs.dim(0);
  const std::size_t stride = shape_numel(sample_shape);
  const int classes = net.class_count();
  Tensor out({n, classes});
  detail::BatchBuffers bb;
  constexpr int kChunk = 256;
  for (int s0 = 0; s0 < n; s0 += kChunk) {
    const int chunk = std::min(kChunk, n - s0);
    detail::prepare_batch_buffers(net, chunk, false, bb);
    detail::forward_batch_into(net, xs.data() + static_cast<std::size_t>(s0) * stride,
                               chunk, bb);
    std::copy_n(bb.acts.back().data(), static_cast<std::size_t>(chunk) * classes,
                out.data() + static_cast<std::size_t>(s0) * classes);
  }
  return out;
}

Tensor softmax(const Tensor& logits) {
  if (logits.rank() != 1 || logits.size() == 0) {
    throw ShapeError("softmax expects a non-empty vector");
  }
  Tensor p(logits.shape());
  const float m = logits.max_value();
  float sum = 0.0f;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) p[i] /= sum;
  return p;
}

GradientResult logit_gradient(const Network& net, const Tensor& x, int target_class,
                              EvalWorkspace& ws) {
  if (target_class < 0 || target_class >= net.class_count()) {
    throw ArgumentError("target class " + std::to_string(target_class) +
                        " outside [0, " + std::to_string(net.class_count()) + ")");
  }
  prepare_workspace(net, ws, true);
  run_forward(net, x, ws);

  const int L = net.layer_count();
  std::vector<float>& seed = ws.grads[static_cast<std::size_t>(L)];
  std::fill(seed.begin(), seed.begin() + net.class_count(), 0.0f);
  seed[static_cast<std::size_t>(target_class)] = 1.0f;

  for (int i = L - 1; i >= 0; --i) {
    const LayerSpec& spec = net.layers()[static_cast<std::size_t>(i)];
    const std::vector<int>& in = i == 0 ? net.input_shape() : net.output_shape(i - 1);
    const std::size_t in_n = shape_numel(in);
    const std::size_t out_n = shape_numel(net.output_shape(i));
    const float* dy = ws.grads[static_cast<std::size_t>(i) + 1].data();
    float* dx = ws.grads[static_cast<std::size_t>(i)].data();
    switch (spec.kind) {
      case LayerKind::Conv2d:
        detail::conv_backward_input(detail::conv_geom(spec, in), net.params(i), dy,
                                    ws.cols[static_cast<std::size_t>(i)].data(), dx);
        break;
      case LayerKind::MaxPool2d:
        std::fill(dx, dx + in_n, 0.0f);
        detail::maxpool_backward(ws.pool_idx[static_cast<std::size_t>(i)].data(), dy,
                                 out_n, dx);
        break;
      case LayerKind::Relu:
        detail::relu_backward(ws.acts[static_cast<std::size_t>(i)].data(), dy, dx, in_n);
        break;
      case LayerKind::Flatten:
        std::copy_n(dy, in_n, dx);
        break;
      case LayerKind::Dense:
        detail::dense_backward_input(net.params(i), dy, dx);
        break;
    }
  }

  GradientResult r;
  const std::vector<float>& logits = ws.acts[static_cast<std::size_t>(L)];
  r.logits = Tensor({net.class_count()},
                    std::vector<float>(logits.begin(), logits.begin() + net.class_count()));
  r.input_grad = Tensor(net.input_shape(),
                        std::vector<float>(ws.grads[0].begin(),
                                           ws.grads[0].begin() + shape_numel(net.input_shape())));
  return r;
}

GradientResult logit_gradient(const Network& net, const Tensor& x, int target_class) {
  EvalWorkspace ws;
  return logit_gradient(net, x, target_class, ws);
}

// ---------------------------------------------------------------------------
// parameter manipulation

namespace {

void glorot_fill(LayerParams& p, const LayerSpec& spec, std::mt19937& gen) {
  int fan_in = 0, fan_out = 0;
  if (spec.kind == LayerKind::Conv2d) {
    fan_in = spec.in_channels * spec.kernel * spec.kernel;
    fan_out = spec.out_channels * spec.kernel * spec.kernel;
  } else {
    fan_in = spec.in_features;
    fan_out = spec.out_features;
  }
  const float limit = std::sqrt(6.0f / static_cast<float>(fan_in + fan_out));
  std::uniform_real_distribution<float> dist(-limit, limit);
  for (float& w : p.weight.values()) w = dist(gen);
  std::fill(p.bias.values().begin(), p.bias.values().end(), 0.0f);
}

}  // namespace

void init_glorot_uniform(Network& net, std::uint64_t seed) {
  std::mt19937 gen(static_cast<std::mt19937::result_type>(seed));
  for (int i : net.parameterized_layers()) {
    glorot_fill(net.params(i), net.layers()[static_cast<std::size_t>(i)], gen);
  }
}

float weight_std(const Network& net) {
  const std::size_t n = net.parameter_count();
  if (n < 2) throw ArgumentError("weight_std needs at least two parameters");
  const std::vector<float> w = net.flat_parameters();
  double mean = 0.0;
  for (float v : w) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (float v : w) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);
  return static_cast<float>(std::sqrt(var));
}

Network perturb_weights(const Network& net, float epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0f)) throw ArgumentError("perturbation epsilon must be >= 0");
  Network out = net;
  if (epsilon == 0.0f) return out;
  std::mt19937 gen(static_cast<std::mt19937::result_type>(seed));
  std::normal_distribution<float> noise(0.0f, epsilon);
  for (int i : out.parameterized_layers()) {
    LayerParams& p = out.params(i);
    for (float& w : p.weight.values()) w += noise(gen);
    for (float& b : p.bias.values()) b += noise(gen);
  }
  return out;
}

Network randomize_cascade(const Network& net, int layers_from_top, std::uint64_t seed) {
  const std::vector<int> plist = net.parameterized_layers();
  if (layers_from_top < 0 || layers_from_top > static_cast<int>(plist.size())) {
    throw ArgumentError("layers_from_top " + std::to_string(layers_from_top) +
                        " outside [0, " + std::to_string(plist.size()) + "]");
  }
  Network out = net;
  std::mt19937 gen(static_cast<std::mt19937::result_type>(seed));
  for (int t = 0; t < layers_from_top; ++t) {
    const int layer = plist[plist.size() - 1 - static_cast<std::size_t>(t)];
    glorot_fill(out.params(layer), out.layers()[static_cast<std::size_t>(layer)], gen);
  }
  return out;
}

}  // namespace ggig
