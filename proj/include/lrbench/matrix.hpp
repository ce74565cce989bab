#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lrbench {

// Thrown when two operands do not conform; the message names both dimensions.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Row-major m-by-n matrix of doubles. Construction checks that every element
// is finite; in-place mutation afterwards is the caller's business.
// Zero-row instances are allowed so empty dataset partitions can be represented.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols);
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

    const double* row_ptr(std::size_t i) const { return data_.data() + i * cols_; }
    double* row_ptr(std::size_t i) { return data_.data() + i * cols_; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    DenseMatrix transposed() const;

    bool operator==(const DenseMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// 1-by-k row vector of doubles, finite-checked on construction like DenseMatrix.
class RowVector {
public:
    RowVector() = default;
    explicit RowVector(std::size_t len);
    explicit RowVector(std::vector<double> values);
    RowVector(std::initializer_list<double> values);

    std::size_t len() const { return data_.size(); }

    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    void fill(double value);

    bool operator==(const RowVector& other) const = default;

private:
    std::vector<double> data_;
};

}  // namespace lrbench
