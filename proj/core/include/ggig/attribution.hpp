#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ggig/network.hpp"

namespace ggig {

enum class Method { Grad, IG, GGIG, Edge, Random };

const char* method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);
// "grad, ig, ggig, edge, random" — for error messages and usage text.
std::string known_method_names();

// A saliency map over the input's spatial layout: [H,W] for image inputs,
// [F] for flat ones. Under the default absolute-value convention all values
// are >= 0; the experimental signed_max switch on ggig relaxes that.
struct AttributionMap {
  Tensor values;
  Method method = Method::Grad;
  int target_class = -1;  // -1 when the method ignores the class
  std::string params;     // human-readable knob record
};

struct IGConfig {
  int steps = 64;
  Tensor baseline;  // empty = zeros like the input
  bool multiply_by_delta = false;
};

struct GGIGConfig {
  int interpolation_points = 8;  // n; trajectories start at the n+1 path points
  int ascent_steps = 200;        // m gradient-ascent steps per trajectory
  float ascent_lr = 1e-4f;
  Tensor baseline;         // empty = zeros like the input
  bool signed_max = false;  // experimental: keep the sign of the max-|·| gradient
};

// |d logits[c] / d x| at x, channel-reduced.
AttributionMap grad_saliency(const Network& net, const Tensor& x, int target_class);

// Mean gradient along the straight path: (1/k)·Σ_{i=1..k} ∇F(x̄ + (i/k)(x−x̄)),
// optionally multiplied by (x−x̄), then |·| and channel reduction. The sum is
// accumulated in double so a constant gradient averages exactly.
AttributionMap integrated_gradients(const Network& net, const Tensor& x,
                                    int target_class, const IGConfig& cfg = {});

// The signed attributions (full input shape, before |·|/reduction); summing
// these gives the completeness diagnostic against F(x) − F(x̄).
Tensor integrated_gradients_signed(const Network& net, const Tensor& x,
                                   int target_class, const IGConfig& cfg = {});

// Geometrically guided IG. For each of the n+1 interpolation points the input
// is pushed uphill for m steps of plain gradient ascent on the target logit
// (x ← x + lr·∇F, recording each ∇F before the step that uses it); the map is
// the pixel-wise maximum of |∇F| over all (n+1)·m recorded gradients,
// channel-reduced. Equal magnitudes keep the earliest gradient. Throws
// DivergedError naming (k, j) if a gradient or iterate turns non-finite.
AttributionMap ggig(const Network& net, const Tensor& x, int target_class,
                    const GGIGConfig& cfg = {});

// Sobel magnitude of the grayscale input (replicate borders), rescaled to
// [0,1]. Class-independent baseline.
AttributionMap edge_detector(const Tensor& x);

// Uniform [0,1) noise of the given shape. Class-independent baseline.
AttributionMap random_map(const std::vector<int>& shape, std::uint64_t seed);

// |v| then max over channels: [C,H,W] → [H,W]; [H,W]/[F] pass through |·|.
Tensor reduce_abs_max_channels(const Tensor& g);

// The exact float expressions the path methods use, exposed so independent
// transcriptions (oracles) can reproduce their arithmetic bit-for-bit:
//   lerp_into:  out[i] = a[i] + alpha·(b[i] − a[i])
//   axpy_into:  x[i] += scale·g[i]
void lerp_into(const float* a, const float* b, float alpha, float* out, std::size_t n);
void axpy_into(float* x, const float* g, float scale, std::size_t n);

// A method with its knobs, dispatchable uniformly. compute() stamps
// target_class on the result for all methods (edge/random just ignore it).
struct AttributionRequest {
  Method method = Method::GGIG;
  IGConfig ig_cfg;
  GGIGConfig ggig_cfg;
  std::uint64_t random_seed = 0;

  AttributionMap compute(const Network& net, const Tensor& x, int target_class) const;
};

}  // namespace ggig
