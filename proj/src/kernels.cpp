#include "lrbench/kernels.hpp"

#include <mutex>
#include <string>
#include <vector>

#include "lrbench/numeric.hpp"

namespace lrbench {

void vector_matrix_mul(const RowVector& v, DenseMatrix& M, ThreadPool& pool) {
    if (v.len() != M.rows()) {
        throw ShapeError("vector_matrix_mul: v.len=" + std::to_string(v.len()) +
                         " does not match M.rows=" + std::to_string(M.rows()));
    }
    const std::size_t n = M.cols();
    pool.for_chunks(0, M.rows(), [&](std::size_t r0, std::size_t r1) {
        for (std::size_t i = r0; i < r1; ++i) {
            const double scale = v[i];
            double* row = M.row_ptr(i);
            for (std::size_t j = 0; j < n; ++j) row[j] *= scale;
        }
    });
}

void matrix_col_sum(const DenseMatrix& M, RowVector& res, ThreadPool& pool, ReductionMode mode) {
    if (res.len() != M.cols()) {
        throw ShapeError("matrix_col_sum: res.len=" + std::to_string(res.len()) +
                         " does not match M.cols=" + std::to_string(M.cols()));
    }
    const std::size_t m = M.rows();
    const std::size_t n = M.cols();
    if (mode == ReductionMode::deterministic) {
        // One worker owns a contiguous column range and sweeps the rows in
        // order, so each res[j] is accumulated in ascending row order.
        pool.for_chunks(0, n, [&](std::size_t c0, std::size_t c1) {
            for (std::size_t j = c0; j < c1; ++j) res[j] = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double* row = M.row_ptr(i);
                for (std::size_t j = c0; j < c1; ++j) res[j] += row[j];
            }
        });
    } else {
        res.fill(0.0);
        std::mutex merge_mutex;
        pool.for_chunks(0, m, [&](std::size_t r0, std::size_t r1) {
            std::vector<double> partial(n, 0.0);
            for (std::size_t i = r0; i < r1; ++i) {
                const double* row = M.row_ptr(i);
                for (std::size_t j = 0; j < n; ++j) partial[j] += row[j];
            }
            std::lock_guard<std::mutex> lock(merge_mutex);
            for (std::size_t j = 0; j < n; ++j) res[j] += partial[j];
        });
    }
}

double norm2(const RowVector& v, double acc, ThreadPool& pool, ReductionMode mode) {
    if (mode == ReductionMode::deterministic) {
        // Single ascending chain starting from the caller's accumulator.
        double result = acc;
        for (std::size_t i = 0; i < v.len(); ++i) result += v[i] * v[i];
        return result;
    }
    double total = 0.0;
    std::mutex merge_mutex;
    pool.for_chunks(0, v.len(), [&](std::size_t i0, std::size_t i1) {
        double partial = 0.0;
        for (std::size_t i = i0; i < i1; ++i) partial += v[i] * v[i];
        std::lock_guard<std::mutex> lock(merge_mutex);
        total += partial;
    });
    return acc + total;
}

void subtract(const RowVector& vec1, RowVector& res2, ThreadPool& pool) {
    if (vec1.len() != res2.len()) {
        throw ShapeError("subtract: vec1.len=" + std::to_string(vec1.len()) +
                         " does not match res2.len=" + std::to_string(res2.len()));
    }
    pool.for_chunks(0, res2.len(), [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) res2[i] -= vec1[i];
    });
}

void sigmoid_map(const RowVector& res, RowVector& y_pred, ThreadPool& pool) {
    if (res.len() != y_pred.len()) {
        throw ShapeError("sigmoid_map: res.len=" + std::to_string(res.len()) +
                         " does not match y_pred.len=" + std::to_string(y_pred.len()));
    }
    pool.for_chunks(0, res.len(), [&](std::size_t i0, std::size_t i1) {
        for (std::size_t i = i0; i < i1; ++i) y_pred[i] = stable_sigmoid(res[i]);
    });
}

}  // namespace lrbench
