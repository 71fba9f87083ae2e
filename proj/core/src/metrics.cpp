#include "ggig/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ggig/errors.hpp"

namespace ggig {

namespace {

bool is_constant(const Tensor& t) {
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] != t[0]) return false;
  }
  return true;
}

void require_unit_range(const Tensor& t, const char* what) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] >= 0.0f && t[i] <= 1.0f)) {
      throw ArgumentError(std::string(what) + " expects values in [0,1]");
    }
  }
}

// 1-based ranks, ties averaged.
std::vector<double> fractional_ranks(const Tensor& t) {
  const std::size_t n = t.size();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return t[static_cast<std::size_t>(a)] <
                                              t[static_cast<std::size_t>(b)]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n &&
           t[static_cast<std::size_t>(idx[j + 1])] == t[static_cast<std::size_t>(idx[i])]) {
      ++j;
    }
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[static_cast<std::size_t>(idx[k])] = r;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

Tensor rescale01(const Tensor& t) {
  if (t.size() == 0) throw ArgumentError("rescale01 on an empty tensor");
  const float lo = t.min_value(), hi = t.max_value();
  if (lo == hi) throw ArgumentError("rescale01 undefined for a constant tensor");
  Tensor out(t.shape());
  const float span = hi - lo;
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = (t[i] - lo) / span;
  return out;
}

double spearman(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) throw ArgumentError("spearman inputs differ in size");
  if (a.size() < 2) throw ArgumentError("spearman needs at least two elements");
  if (is_constant(a) || is_constant(b)) {
    throw ArgumentError("spearman undefined for constant input");
  }
  const std::vector<double> ra = fractional_ranks(a);
  const std::vector<double> rb = fractional_ranks(b);
  if (ra == rb) return 1.0;  // identical rankings, exactly
  const double n = static_cast<double>(ra.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - ma, db = rb[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  return cov / std::sqrt(va * vb);
}

double weighted_jaccard(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) throw ArgumentError("weighted_jaccard inputs differ in size");
  if (a.size() == 0) throw ArgumentError("weighted_jaccard on empty tensors");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const float x = a[i], y = b[i];
    if (x < 0.0f || y < 0.0f) {
      throw ArgumentError("weighted_jaccard requires non-negative values");
    }
    num += std::min(x, y);
    den += std::max(x, y);
  }
  if (den == 0.0) return 1.0;  // both maps entirely zero
  return num / den;
}

double ssim(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || !a.same_shape(b)) {
    throw ShapeError("ssim expects two [H,W] tensors of equal shape");
  }
  constexpr int kWin = 7;
  const int h = a.dim(0), w = a.dim(1);
  if (h < kWin || w < kWin) {
    throw ArgumentError("ssim window (7x7) does not fit the image");
  }
  require_unit_range(a, "ssim");
  require_unit_range(b, "ssim");
  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  constexpr double inv_n = 1.0 / (kWin * kWin);
  double total = 0.0;
  long windows = 0;
  for (int y = 0; y + kWin <= h; ++y) {
    for (int x = 0; x + kWin <= w; ++x) {
      double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
      for (int dy = 0; dy < kWin; ++dy) {
        for (int dx = 0; dx < kWin; ++dx) {
          const double va = a.at(y + dy, x + dx);
          const double vb = b.at(y + dy, x + dx);
          sa += va;
          sb += vb;
          saa += va * va;
          sbb += vb * vb;
          sab += va * vb;
        }
      }
      const double mu_a = sa * inv_n, mu_b = sb * inv_n;
      const double var_a = saa * inv_n - mu_a * mu_a;
      const double var_b = sbb * inv_n - mu_b * mu_b;
      const double cov = sab * inv_n - mu_a * mu_b;
      total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2)) /
               ((mu_a * mu_a + mu_b * mu_b + c1) * (var_a + var_b + c2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

double reverse_mse(const Tensor& a, const Tensor& b) {
  if (!a.same_shape(b) || a.size() == 0) {
    throw ShapeError("reverse_mse expects matching non-empty tensors");
  }
  require_unit_range(a, "reverse_mse");
  require_unit_range(b, "reverse_mse");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return 1.0 - acc / static_cast<double>(a.size());
}

double median(std::vector<double> v) {
  if (v.empty()) throw ArgumentError("median of an empty vector");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double population_std(const std::vector<double>& v) {
  if (v.empty()) throw ArgumentError("population_std of an empty vector");
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(v.size()));
}

namespace {
MetricStats stats_of(const std::vector<double>& v) {
  return {median(v), population_std(v)};
}
}  // namespace

MetricStats SimilarityReport::spearman_stats() const { return stats_of(spearman); }
MetricStats SimilarityReport::weighted_jaccard_stats() const {
  return stats_of(weighted_jaccard);
}
MetricStats SimilarityReport::ssim_stats() const { return stats_of(ssim); }
MetricStats SimilarityReport::reverse_mse_stats() const { return stats_of(reverse_mse); }

SimilarityReport compare_maps_to_inputs(const std::vector<Tensor>& inputs,
                                        const std::vector<Tensor>& maps) {
  if (inputs.size() != maps.size() || inputs.empty()) {
    throw ArgumentError("compare_maps_to_inputs needs matching non-empty lists");
  }
  SimilarityReport r;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!inputs[i].same_shape(maps[i])) {
      throw ShapeError("map " + std::to_string(i) + " does not match its input's shape");
    }
    const Tensor in01 = rescale01(inputs[i]);
    const Tensor map01 = rescale01(maps[i]);
    r.spearman.push_back(ggig::spearman(in01, map01));
    r.weighted_jaccard.push_back(ggig::weighted_jaccard(in01, map01));
    r.ssim.push_back(ggig::ssim(in01, map01));
    r.reverse_mse.push_back(ggig::reverse_mse(in01, map01));
  }
  return r;
}

}  // namespace ggig
