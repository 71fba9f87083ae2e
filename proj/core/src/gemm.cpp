#include "ggig/gemm.hpp"

#include <algorithm>

namespace ggig {

namespace {
// Panel sizes chosen for a single-core L1/L2 resident working set; they do not
// affect results (see the reproducibility contract in the header).
constexpr int kColBlock = 1024;  // output columns per panel in gemm_nn
constexpr int kDepthBlock = 256; // k panel kept hot in gemm_nn
constexpr int kRowPanel = 64;    // rows per panel in gemm_nt / gemm_tn
}  // namespace

float dot_fixed(const float* a, const float* b, int k) {
  float acc[32] = {};
  int i = 0;
  for (; i + 32 <= k; i += 32) {
    for (int l = 0; l < 32; ++l) acc[l] += a[i + l] * b[i + l];
  }
  float tail = 0.0f;
  for (; i < k; ++i) tail += a[i] * b[i];
  float sum = 0.0f;
  for (int l = 0; l < 32; ++l) sum += acc[l];
  return sum + tail;
}

void gemm_nn_acc(float* C, const float* A, const float* B, int M, int K, int N) {
  for (int j0 = 0; j0 < N; j0 += kColBlock) {
    const int j1 = std::min(N, j0 + kColBlock);
    for (int k0 = 0; k0 < K; k0 += kDepthBlock) {
      const int k1 = std::min(K, k0 + kDepthBlock);
      for (int i = 0; i < M; ++i) {
        float* c = C + static_cast<std::size_t>(i) * N;
        const float* a = A + static_cast<std::size_t>(i) * K;
        for (int k = k0; k < k1; ++k) {
          const float av = a[k];
          const float* b = B + static_cast<std::size_t>(k) * N;
          for (int j = j0; j < j1; ++j) c[j] += av * b[j];
        }
      }
    }
  }
}

void gemm_nt_acc(float* C, const float* A, const float* B, int M, int K, int N) {
  for (int j0 = 0; j0 < N; j0 += kRowPanel) {
    const int j1 = std::min(N, j0 + kRowPanel);
    for (int i = 0; i < M; ++i) {
      const float* a = A + static_cast<std::size_t>(i) * K;
      float* c = C + static_cast<std::size_t>(i) * N;
      for (int j = j0; j < j1; ++j) {
        c[j] += dot_fixed(a, B + static_cast<std::size_t>(j) * K, K);
      }
    }
  }
}

void gemm_tn_acc(float* C, const float* A, const float* B, int M, int K, int N) {
  for (int i0 = 0; i0 < M; i0 += kRowPanel) {
    const int i1 = std::min(M, i0 + kRowPanel);
    if (N >= 8) {
      for (int k = 0; k < K; ++k) {
        const float* arow = A + static_cast<std::size_t>(k) * M;
        const float* b = B + static_cast<std::size_t>(k) * N;
        for (int i = i0; i < i1; ++i) {
          const float av = arow[i];
          float* c = C + static_cast<std::size_t>(i) * N;
          for (int j = 0; j < N; ++j) c[j] += av * b[j];
        }
      }
    } else {
      // Narrow C (notably N == 1, the single-sample dense backward): run the
      // contiguous-in-i form so stores still vectorize. Per-element k order is
      // the same as the wide branch.
      for (int k = 0; k < K; ++k) {
        const float* arow = A + static_cast<std::size_t>(k) * M;
        const float* b = B + static_cast<std::size_t>(k) * N;
        for (int j = 0; j < N; ++j) {
          const float bv = b[j];
          for (int i = i0; i < i1; ++i) {
            C[static_cast<std::size_t>(i) * N + j] += arow[i] * bv;
          }
        }
      }
    }
  }
}

}  // namespace ggig
