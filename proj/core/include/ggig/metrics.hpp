#pragma once

#include <vector>

#include "ggig/tensor.hpp"

namespace ggig {

// (v − min)/(max − min); ArgumentError on a constant input.
Tensor rescale01(const Tensor& t);

// Spearman rank correlation, average ranks on ties, computed in double.
// Inputs must have equal element counts (>= 2) and must not be constant.
// Identical rankings return exactly 1.0.
double spearman(const Tensor& a, const Tensor& b);

// Σ min(aᵢ,bᵢ) / Σ max(aᵢ,bᵢ) for non-negative maps; 1.0 when both are
// entirely zero (the only case with a zero denominator).
double weighted_jaccard(const Tensor& a, const Tensor& b);

// Mean SSIM over every fully-interior 7×7 window, uniform weighting,
// c1 = 0.01², c2 = 0.03². Inputs are [H,W] in [0,1] with H,W >= 7.
double ssim(const Tensor& a, const Tensor& b);

// 1 − mean squared error; inputs in [0,1] so the result lands in [0,1].
double reverse_mse(const Tensor& a, const Tensor& b);

double median(std::vector<double> v);                  // even count: mean of the middle two
double population_std(const std::vector<double>& v);

struct MetricStats {
  double median = 0.0;
  double stddev = 0.0;
};

// Per-sample agreement between attribution maps and their input images
// (both rescaled to [0,1] before comparison).
struct SimilarityReport {
  std::vector<double> spearman;
  std::vector<double> weighted_jaccard;
  std::vector<double> ssim;
  std::vector<double> reverse_mse;

  MetricStats spearman_stats() const;
  MetricStats weighted_jaccard_stats() const;
  MetricStats ssim_stats() const;
  MetricStats reverse_mse_stats() const;
};

SimilarityReport compare_maps_to_inputs(const std::vector<Tensor>& inputs,
                                        const std::vector<Tensor>& maps);

}  // namespace ggig
