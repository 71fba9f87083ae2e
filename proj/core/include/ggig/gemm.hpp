#pragma once

#include <cstddef>

namespace ggig {

// Accumulating matrix kernels (C += op(A)·op(B), all buffers row-major, caller
// zero-fills C when a plain product is wanted).
//
// Reproducibility contract, relied on throughout the engine: every kernel
// accumulates each output element in strictly ascending k order, and the
// summation pattern for an element depends only on K — never on M, N, blocking
// or aliasing of the other elements. Consequences the tests pin down:
//   * gemm_nn_acc / gemm_tn_acc are bit-identical to the naive triple loop;
//   * gemm_nt_acc(C, A, B, M, K, N) produces, per output element, the same
//     bits as a one-row (M=1, N=1) call on the corresponding operands, so
//     batched and single-sample dense layers agree exactly;
//   * results are independent of how callers tile or batch their data.

// C[M×N] += A[M×K] · B[K×N]
void gemm_nn_acc(float* C, const float* A, const float* B, int M, int K, int N);

// C[M×N] += A[M×K] · B[N×K]ᵀ  (rows of B are the right-hand vectors)
void gemm_nt_acc(float* C, const float* A, const float* B, int M, int K, int N);

// C[M×N] += A[K×M]ᵀ · B[K×N]
void gemm_tn_acc(float* C, const float* A, const float* B, int M, int K, int N);

// The fixed-order dot product used by gemm_nt_acc, exposed so tests can state
// the lane pattern once: 32 interleaved partial sums over the main body, a
// sequential tail, combined left to right.
float dot_fixed(const float* a, const float* b, int k);

}  // namespace ggig
