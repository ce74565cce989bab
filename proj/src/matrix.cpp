#include "lrbench/matrix.hpp"

#include <cmath>

namespace lrbench {

namespace {

void check_all_finite(const std::vector<double>& values, const char* what) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw std::invalid_argument(std::string(what) + ": non-finite element at index " +
                                        std::to_string(i));
        }
    }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("DenseMatrix: data length " + std::to_string(data_.size()) +
                         " does not equal rows*cols = " + std::to_string(rows_) + "*" +
                         std::to_string(cols_));
    }
    check_all_finite(data_, "DenseMatrix");
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t m = rows.size();
    const std::size_t n = m == 0 ? 0 : rows.begin()->size();
    std::vector<double> values;
    values.reserve(m * n);
    for (const auto& row : rows) {
        if (row.size() != n) {
            throw ShapeError("DenseMatrix: ragged row of length " + std::to_string(row.size()) +
                             ", expected " + std::to_string(n));
        }
        values.insert(values.end(), row.begin(), row.end());
    }
    return DenseMatrix(m, n, std::move(values));
}

DenseMatrix DenseMatrix::transposed() const {
    DenseMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            out(j, i) = (*this)(i, j);
        }
    }
    return out;
}

RowVector::RowVector(std::size_t len) : data_(len, 0.0) {}

RowVector::RowVector(std::vector<double> values) : data_(std::move(values)) {
    check_all_finite(data_, "RowVector");
}

RowVector::RowVector(std::initializer_list<double> values) : data_(values) {
    check_all_finite(data_, "RowVector");
}

void RowVector::fill(double value) {
    for (double& x : data_) x = value;
}

}  // namespace lrbench
