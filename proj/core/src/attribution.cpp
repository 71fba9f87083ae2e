#include "ggig/attribution.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "ggig/errors.hpp"
#include "ggig/image.hpp"
#include "ggig/metrics.hpp"

namespace ggig {

const char* method_name(Method m) {
  switch (m) {
    case Method::Grad: return "grad";
    case Method::IG: return "ig";
    case Method::GGIG: return "ggig";
    case Method::Edge: return "edge";
    case Method::Random: return "random";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  if (name == "grad") return Method::Grad;
  if (name == "ig") return Method::IG;
  if (name == "ggig") return Method::GGIG;
  if (name == "edge") return Method::Edge;
  if (name == "random") return Method::Random;
  return std::nullopt;
}

std::string known_method_names() { return "grad, ig, ggig, edge, random"; }

void lerp_into(const float* a, const float* b, float alpha, float* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + alpha * (b[i] - a[i]);
}

void axpy_into(float* x, const float* g, float scale, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] += scale * g[i];
}

Tensor reduce_abs_max_channels(const Tensor& g) {
  if (g.rank() == 3) {
    const int c = g.dim(0), h = g.dim(1), w = g.dim(2);
    const std::size_t hw = static_cast<std::size_t>(h) * w;
    Tensor out({h, w});
    for (std::size_t p = 0; p < hw; ++p) {
      float best = std::fabs(g[p]);
      for (int ch = 1; ch < c; ++ch) {
        best = std::max(best, std::fabs(g[static_cast<std::size_t>(ch) * hw + p]));
      }
      out[p] = best;
    }
    return out;
  }
  if (g.rank() == 2 || g.rank() == 1) {
    Tensor out(g.shape());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::fabs(g[i]);
    return out;
  }
  throw ShapeError("cannot channel-reduce a rank-" + std::to_string(g.rank()) + " gradient");
}

namespace {

// Signed counterpart: per spatial cell, the channel value of largest
// magnitude (earliest channel wins ties).
Tensor reduce_signed_max_channels(const Tensor& g) {
  if (g.rank() == 3) {
    const int c = g.dim(0), h = g.dim(1), w = g.dim(2);
    const std::size_t hw = static_cast<std::size_t>(h) * w;
    Tensor out({h, w});
    for (std::size_t p = 0; p < hw; ++p) {
      float best = g[p];
      for (int ch = 1; ch < c; ++ch) {
        const float v = g[static_cast<std::size_t>(ch) * hw + p];
        if (std::fabs(v) > std::fabs(best)) best = v;
      }
      out[p] = best;
    }
    return out;
  }
  if (g.rank() == 2 || g.rank() == 1) return g;
  throw ShapeError("cannot channel-reduce a rank-" + std::to_string(g.rank()) + " gradient");
}

Tensor resolve_baseline(const Tensor& baseline, const Tensor& x, const char* what) {
  if (baseline.empty()) return Tensor(x.shape());
  if (!baseline.same_shape(x)) {
    throw ArgumentError(std::string(what) + " baseline shape does not match the input");
  }
  return baseline;
}

}  // namespace

AttributionMap grad_saliency(const Network& net, const Tensor& x, int target_class) {
  const GradientResult r = logit_gradient(net, x, target_class);
  AttributionMap m;
  m.values = reduce_abs_max_channels(r.input_grad);
  m.method = Method::Grad;
  m.target_class = target_class;
  return m;
}

Tensor integrated_gradients_signed(const Network& net, const Tensor& x,
                                   int target_class, const IGConfig& cfg) {
  if (cfg.steps < 1) throw ArgumentError("integrated_gradients needs steps >= 1");
  const Tensor baseline = resolve_baseline(cfg.baseline, x, "integrated_gradients");
  const std::size_t n = x.size();
  std::vector<double> acc(n, 0.0);
  EvalWorkspace ws;
  Tensor xi(x.shape());
  for (int i = 1; i <= cfg.steps; ++i) {
    const float alpha = static_cast<float>(i) / static_cast<float>(cfg.steps);
    lerp_into(baseline.data(), x.data(), alpha, xi.data(), n);
    const GradientResult r = logit_gradient(net, xi, target_class, ws);
    for (std::size_t j = 0; j < n; ++j) acc[j] += static_cast<double>(r.input_grad[j]);
  }
  Tensor out(x.shape());
  for (std::size_t j = 0; j < n; ++j) {
    double v = acc[j] / cfg.steps;
    if (cfg.multiply_by_delta) {
      v *= static_cast<double>(x[j]) - static_cast<double>(baseline[j]);
    }
    out[j] = static_cast<float>(v);
  }
  return out;
}

AttributionMap integrated_gradients(const Network& net, const Tensor& x,
                                    int target_class, const IGConfig& cfg) {
  AttributionMap m;
  m.values = reduce_abs_max_channels(integrated_gradients_signed(net, x, target_class, cfg));
  m.method = Method::IG;
  m.target_class = target_class;
  m.params = "k=" + std::to_string(cfg.steps) +
             " multiply_by_delta=" + (cfg.multiply_by_delta ? "1" : "0");
  return m;
}

AttributionMap ggig(const Network& net, const Tensor& x, int target_class,
                    const GGIGConfig& cfg) {
  if (cfg.interpolation_points < 1) throw ArgumentError("ggig needs interpolation_points >= 1");
  if (cfg.ascent_steps < 1) throw ArgumentError("ggig needs ascent_steps >= 1");
  if (!(cfg.ascent_lr > 0.0f) || !std::isfinite(cfg.ascent_lr)) {
    throw ArgumentError("ggig needs a positive finite ascent learning rate");
  }
  const Tensor baseline = resolve_baseline(cfg.baseline, x, "ggig");
  const std::size_t n = x.size();
  const int points = cfg.interpolation_points;

  Tensor max_abs(x.shape());   // running max of |gradient|
  Tensor max_signed(x.shape()); // gradient value at that max
  Tensor cur(x.shape());
  EvalWorkspace ws;
  for (int k = 0; k <= points; ++k) {
    const float alpha = static_cast<float>(k) / static_cast<float>(points);
    lerp_into(baseline.data(), x.data(), alpha, cur.data(), n);
    for (int j = 0; j < cfg.ascent_steps; ++j) {
      const GradientResult r = logit_gradient(net, cur, target_class, ws);
      const Tensor& g = r.input_grad;
      if (!g.all_finite()) {
        throw DivergedError("ggig gradient ascent diverged at interpolation point " +
                            std::to_string(k) + ", ascent step " + std::to_string(j));
      }
      for (std::size_t p = 0; p < n; ++p) {
        const float a = std::fabs(g[p]);
        if (a > max_abs[p]) {  // strict: earliest gradient kept on ties
          max_abs[p] = a;
          max_signed[p] = g[p];
        }
      }
      axpy_into(cur.data(), g.data(), cfg.ascent_lr, n);
      if (!cur.all_finite()) {
        throw DivergedError("ggig gradient ascent diverged at interpolation point " +
                            std::to_string(k) + ", ascent step " + std::to_string(j));
      }
    }
  }

  AttributionMap m;
  m.values = cfg.signed_max ? reduce_signed_max_channels(max_signed)
                            : reduce_abs_max_channels(max_abs);
  m.method = Method::GGIG;
  m.target_class = target_class;
  m.params = "n=" + std::to_string(cfg.interpolation_points) +
             " m=" + std::to_string(cfg.ascent_steps) +
             " lr=" + std::to_string(cfg.ascent_lr) +
             (cfg.signed_max ? " signed_max=1" : "");
  return m;
}

AttributionMap edge_detector(const Tensor& x) {
  const Tensor gray = to_grayscale(x);
  const int h = gray.dim(0), w = gray.dim(1);
  Tensor mag({h, w});
  auto px = [&](int r, int c) {
    r = std::clamp(r, 0, h - 1);
    c = std::clamp(c, 0, w - 1);
    return gray.at(r, c);
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const float gx = (px(r - 1, c + 1) + 2.0f * px(r, c + 1) + px(r + 1, c + 1)) -
                       (px(r - 1, c - 1) + 2.0f * px(r, c - 1) + px(r + 1, c - 1));
      const float gy = (px(r + 1, c - 1) + 2.0f * px(r + 1, c) + px(r + 1, c + 1)) -
                       (px(r - 1, c - 1) + 2.0f * px(r - 1, c) + px(r - 1, c + 1));
      mag.at(r, c) = std::sqrt(gx * gx + gy * gy);
    }
  }
  AttributionMap m;
  m.values = mag.max_value() > mag.min_value() ? rescale01(mag) : mag;
  m.method = Method::Edge;
  m.params = "sobel";
  return m;
}

AttributionMap random_map(const std::vector<int>& shape, std::uint64_t seed) {
  Tensor values(shape);
  if (values.size() == 0) throw ArgumentError("random_map needs a non-empty shape");
  std::mt19937 gen(static_cast<std::mt19937::result_type>(seed));
  std::uniform_real_distribution<float> dist(0.0f, 1.0f);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = dist(gen);
  AttributionMap m;
  m.values = std::move(values);
  m.method = Method::Random;
  m.params = "seed=" + std::to_string(seed);
  return m;
}

AttributionMap AttributionRequest::compute(const Network& net, const Tensor& x,
                                           int target_class) const {
  AttributionMap m;
  switch (method) {
    case Method::Grad:
      m = grad_saliency(net, x, target_class);
      break;
    case Method::IG:
      m = integrated_gradients(net, x, target_class, ig_cfg);
      break;
    case Method::GGIG:
      m = ggig(net, x, target_class, ggig_cfg);
      break;
    case Method::Edge:
      m = edge_detector(x);
      break;
    case Method::Random: {
      std::vector<int> shape = x.rank() == 3
                                   ? std::vector<int>{x.dim(1), x.dim(2)}
                                   : x.shape();
      m = random_map(shape, random_seed);
      break;
    }
  }
  m.target_class = target_class;
  return m;
}

}  // namespace ggig
