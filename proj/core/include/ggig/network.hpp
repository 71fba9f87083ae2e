#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ggig/tensor.hpp"

namespace ggig {

enum class LayerKind { Conv2d, MaxPool2d, Relu, Flatten, Dense };

const char* layer_kind_name(LayerKind kind);

// Hyperparameters of one layer; only the fields of the active kind matter.
struct LayerSpec {
  LayerKind kind = LayerKind::Relu;
  int in_channels = 0, out_channels = 0, kernel = 0, stride = 1, pad = 0;  // conv2d
  int window = 0;                                                          // maxpool2d
  int in_features = 0, out_features = 0;                                   // dense

  static LayerSpec conv2d(int in_channels, int out_channels, int kernel,
                          int stride = 1, int pad = 0);
  static LayerSpec maxpool2d(int window);
  static LayerSpec relu();
  static LayerSpec flatten();
  static LayerSpec dense(int in_features, int out_features);

  bool has_params() const {
    return kind == LayerKind::Conv2d || kind == LayerKind::Dense;
  }
};

struct LayerParams {
  Tensor weight;  // conv: [oc,ic,k,k]; dense: [out,in]; empty otherwise
  Tensor bias;    // conv: [oc]; dense: [out]; empty otherwise
};

struct GradientResult {
  Tensor logits;      // [class_count]
  Tensor input_grad;  // shape of the input
};

// A feed-forward stack of layers with their parameters. Construction infers
// and validates every intermediate shape; the final output must be a vector,
// whose length is the class count. Parameters start at zero — callers
// initialize explicitly (init_glorot_uniform) or load saved weights.
//
// Treat a Network as immutable once built: forward and logit_gradient never
// mutate it and may run concurrently on a shared instance; perturb_weights,
// randomize_cascade and load_weights return fresh copies.
class Network {
 public:
  Network() = default;
  Network(std::vector<int> input_shape, std::vector<LayerSpec> layers);

  const std::vector<int>& input_shape() const { return input_shape_; }
  const std::vector<LayerSpec>& layers() const { return layers_; }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  // Output shape of layer i; input_shape() feeds layer 0.
  const std::vector<int>& output_shape(int layer) const;
  int class_count() const { return class_count_; }

  const LayerParams& params(int layer) const;
  LayerParams& params(int layer);
  // Indices of conv/dense layers in forward order.
  std::vector<int> parameterized_layers() const;

  std::size_t parameter_count() const;
  // Concatenation of per-layer weight-then-bias, in layer order.
  std::vector<float> flat_parameters() const;
  void set_flat_parameters(const std::vector<float>& values);

 private:
  std::vector<int> input_shape_;
  std::vector<LayerSpec> layers_;
  std::vector<LayerParams> params_;
  std::vector<std::vector<int>> output_shapes_;
  int class_count_ = 0;
};

// Reusable scratch buffers for forward/gradient passes. Callers that evaluate
// in a loop should keep one alive to avoid reallocation; buffers grow lazily
// and hold no state between calls. Not shareable across concurrent calls.
struct EvalWorkspace {
  std::vector<std::vector<float>> acts;   // acts[i] = input of layer i; back() = logits
  std::vector<std::vector<float>> grads;  // mirrors acts during backward
  std::vector<std::vector<float>> cols;   // im2col scratch per conv layer
  std::vector<std::vector<int>> pool_idx; // argmax routing per maxpool layer
};

// Pre-softmax logits for one sample (shape = input_shape).
Tensor forward(const Network& net, const Tensor& x);
Tensor forward(const Network& net, const Tensor& x, EvalWorkspace& ws);

// Logits for a batch: xs is [N, ...input_shape], result [N, class_count].
// Row s is bit-identical to forward() of sample s alone.
Tensor forward_batch(const Network& net, const Tensor& xs);

Tensor softmax(const Tensor& logits);

// d logits[target_class] / d input, plus the logits of the same pass.
GradientResult logit_gradient(const Network& net, const Tensor& x, int target_class);
GradientResult logit_gradient(const Network& net, const Tensor& x, int target_class,
                              EvalWorkspace& ws);

// Glorot uniform on weights (limit sqrt(6/(fan_in+fan_out))), zero biases.
// Layers are drawn in forward order from one generator — the scheme used for
// training and reused by randomize_cascade.
void init_glorot_uniform(Network& net, std::uint64_t seed);

// Population standard deviation of all parameters.
float weight_std(const Network& net);

// Copy with N(0, epsilon) noise added independently to every parameter.
// epsilon == 0 returns a bit-identical copy.
Network perturb_weights(const Network& net, float epsilon, std::uint64_t seed);

// Copy with the top `layers_from_top` parameterized layers (output side first)
// freshly re-initialized from the training distribution. Draws are made in
// top-down order from one generator seeded with `seed`, so the layers shared
// between depths d and d+1 receive identical values — randomization cascades.
Network randomize_cascade(const Network& net, int layers_from_top, std::uint64_t seed);

// Text header (architecture) + little-endian float32 parameter payload.
void save_weights(const Network& net, const std::string& path);
Network load_weights(const std::string& path);

}  // namespace ggig
