#include "ggig/pic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ggig/errors.hpp"
#include "ggig/image.hpp"
#include "ggig/metrics.hpp"

namespace ggig {

namespace {

// True-class probability from float logits, evaluated in double for stable
// ratios at extreme logits.
double softmax_prob(const float* logits, int count, int cls) {
  float m = logits[0];
  for (int c = 1; c < count; ++c) m = std::max(m, logits[c]);
  double sum = 0.0;
  for (int c = 0; c < count; ++c) sum += std::exp(static_cast<double>(logits[c] - m));
  return std::exp(static_cast<double>(logits[cls] - m)) / sum;
}

int argmax(const float* v, int count) {
  int best = 0;
  for (int c = 1; c < count; ++c) {
    if (v[c] > v[best]) best = c;
  }
  return best;
}

}  // namespace

double curve_auc(std::vector<PICPoint> points) {
  if (points.size() < 2) throw ArgumentError("curve_auc needs at least two points");
  std::stable_sort(points.begin(), points.end(),
                   [](const PICPoint& a, const PICPoint& b) { return a.entropy < b.entropy; });
  const double lo = points.front().entropy, hi = points.back().entropy;
  if (!(hi > lo)) throw ArgumentError("curve_auc: degenerate curve with zero entropy span");
  const double span = hi - lo;
  double auc = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double dx = (points[i + 1].entropy - points[i].entropy) / span;
    auc += dx * 0.5 * (points[i].score + points[i + 1].score);
  }
  return auc;
}

PICResult pic_curves(const Network& net, const std::vector<Tensor>& images,
                     const std::vector<int>& labels, const std::vector<Tensor>& maps,
                     const PICConfig& cfg) {
  const std::size_t n = images.size();
  if (n == 0 || labels.size() != n || maps.size() != n) {
    throw ArgumentError("pic_curves needs matching non-empty images/labels/maps");
  }
  for (double p : cfg.percents) {
    if (!(p > 0.0 && p < 100.0)) {
      throw ArgumentError("PIC thresholds must lie in (0,100); endpoints are implicit");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (images[i].shape() != net.input_shape()) {
      throw ShapeError("PIC image " + std::to_string(i) + " does not match the network input");
    }
    if (labels[i] < 0 || labels[i] >= net.class_count()) {
      throw ArgumentError("PIC label " + std::to_string(labels[i]) + " out of range");
    }
  }

  const std::size_t pix = shape_numel(net.input_shape());
  const int C = net.class_count();

  // Per-image invariants: blurred reference, its entropy, original scores.
  std::vector<Tensor> blurred(n);
  std::vector<double> blur_entropy(n);
  Tensor batch({static_cast<int>(n)});  // reshaped below
  {
    std::vector<int> bshape = net.input_shape();
    bshape.insert(bshape.begin(), static_cast<int>(n));
    batch = Tensor(bshape);
  }
  for (std::size_t i = 0; i < n; ++i) {
    blurred[i] = gaussian_blur(images[i], cfg.blur_sigma);
    blur_entropy[i] = shannon_entropy(blurred[i]);
    if (blur_entropy[i] == 0.0) {
      throw ArgumentError("PIC: fully blurred image " + std::to_string(i) +
                          " has zero entropy");
    }
    std::copy_n(images[i].data(), pix, batch.data() + i * pix);
  }
  const Tensor orig_logits = forward_batch(net, batch);
  std::vector<double> orig_prob(n);
  for (std::size_t i = 0; i < n; ++i) {
    orig_prob[i] = softmax_prob(orig_logits.data() + i * C, C, labels[i]);
  }

  PICResult result;
  result.sic.kind = PICKind::SIC;
  result.aic.kind = PICKind::AIC;

  // The fully-blurred endpoint (percent → 0), then each threshold, then 100.
  std::vector<double> sweep;
  sweep.push_back(0.0);
  sweep.insert(sweep.end(), cfg.percents.begin(), cfg.percents.end());
  sweep.push_back(100.0);

  std::vector<double> ent(n), rel(n);
  for (double percent : sweep) {
    long correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (percent == 0.0) {
        std::copy_n(blurred[i].data(), pix, batch.data() + i * pix);
        ent[i] = 1.0;  // H(blurred)/H(blurred)
      } else {
        const Tensor focused =
            saliency_focused_image(images[i], blurred[i], maps[i], percent);
        ent[i] = shannon_entropy(focused) / blur_entropy[i];
        std::copy_n(focused.data(), pix, batch.data() + i * pix);
      }
    }
    const Tensor logits = forward_batch(net, batch);
    for (std::size_t i = 0; i < n; ++i) {
      const float* row = logits.data() + i * C;
      rel[i] = std::min(1.0, softmax_prob(row, C, labels[i]) / orig_prob[i]);
      if (argmax(row, C) == labels[i]) ++correct;
    }
    const double x = median(ent);
    result.sic.points.push_back({percent, x, median(rel)});
    result.aic.points.push_back(
        {percent, x, static_cast<double>(correct) / static_cast<double>(n)});
  }

  result.sic.auc = curve_auc(result.sic.points);
  result.aic.auc = curve_auc(result.aic.points);
  const auto by_x = [](const PICPoint& a, const PICPoint& b) { return a.entropy < b.entropy; };
  std::stable_sort(result.sic.points.begin(), result.sic.points.end(), by_x);
  std::stable_sort(result.aic.points.begin(), result.aic.points.end(), by_x);
  return result;
}

}  // namespace ggig
