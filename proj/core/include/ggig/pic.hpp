#pragma once

#include <vector>

#include "ggig/network.hpp"
#include "ggig/tensor.hpp"

namespace ggig {

enum class PICKind { SIC, AIC };

struct PICPoint {
  double percent;  // 0 marks the fully-blurred endpoint
  double entropy;  // median normalized entropy across images
  double score;    // SIC: median capped relative softmax; AIC: accuracy
};

struct PICCurve {
  PICKind kind = PICKind::SIC;
  std::vector<PICPoint> points;  // sorted by entropy, endpoints included
  double auc = 0.0;
};

struct PICConfig {
  float blur_sigma = 5.0f;
  // Interior focus thresholds, each in (0,100); the fully-blurred point and
  // percent = 100 are always added.
  std::vector<double> percents = {1, 2, 3, 5, 8, 13, 21, 30, 40, 60, 80};
};

struct PICResult {
  PICCurve sic;
  PICCurve aic;
};

// Performance-information curves for one method's maps over a sample set.
// Per threshold p, every image is replaced by its saliency-focused version
// and re-classified; the x coordinate is the median normalized entropy
// (against the fully blurred image), SIC scores relative true-class softmax
// capped at 1, AIC the fraction classified correctly. maps[i] must be a
// [H,W] map for images[i] computed on the same net. AUC integrates the curve
// by trapezoid over the entropy axis rescaled to [0,1].
PICResult pic_curves(const Network& net, const std::vector<Tensor>& images,
                     const std::vector<int>& labels, const std::vector<Tensor>& maps,
                     const PICConfig& cfg = {});

// AUC helper (exposed for tests): sorts by entropy, rescales the x axis to
// [0,1], integrates score by trapezoid. ArgumentError on zero entropy span.
double curve_auc(std::vector<PICPoint> points);

}  // namespace ggig
