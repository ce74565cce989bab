#pragma once

#include "lrbench/matrix.hpp"
#include "lrbench/thread_pool.hpp"

namespace lrbench {

// How the reducing kernels (matrix_col_sum, norm2) accumulate.
//   deterministic: each output is summed in ascending index order, so results
//                  are bit-identical regardless of thread count.
//   free_order:    per-worker partial sums merged in completion order; faster
//                  on wide reductions, not bit-reproducible.
enum class ReductionMode { deterministic, free_order };

// Scales row i of M by v[i], in place. Parallel over rows.
void vector_matrix_mul(const RowVector& v, DenseMatrix& M, ThreadPool& pool);

// Overwrites res with the column sums of M: res[j] = sum_i M[i][j]. Prior
// contents of res are discarded. Parallel over columns in deterministic mode,
// over row blocks in free_order mode.
void matrix_col_sum(const DenseMatrix& M, RowVector& res, ThreadPool& pool,
                    ReductionMode mode = ReductionMode::deterministic);

// Returns acc + sum_i v[i]^2 — the squared norm on top of the caller's
// accumulator. Callers take the square root themselves.
double norm2(const RowVector& v, double acc, ThreadPool& pool,
             ReductionMode mode = ReductionMode::deterministic);

// res2[i] -= vec1[i], in place. Parallel over elements.
void subtract(const RowVector& vec1, RowVector& res2, ThreadPool& pool);

// y_pred[i] = sigmoid(res[i]), overflow-safe, every output strictly in (0,1).
// res and y_pred may alias. Parallel over elements.
void sigmoid_map(const RowVector& res, RowVector& y_pred, ThreadPool& pool);

}  // namespace lrbench
