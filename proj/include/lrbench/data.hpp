#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "lrbench/matrix.hpp"
#include "lrbench/model.hpp"

namespace lrbench {

struct CsvSource {
    std::string path;
};

struct BlobsSource {
    std::uint64_t seed = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    double separation = 1.0;
};

struct RandomSource {
    std::uint64_t seed = 0;
    std::size_t m = 0;
    std::size_t n = 0;
};

// Where a dataset comes from and how it is prepared before training.
struct DatasetSpec {
    std::variant<CsvSource, BlobsSource, RandomSource> source;
    double test_fraction = 0.2;
    bool standardize = true;
    std::optional<std::size_t> limit_rows;

    void validate() const;
};

// Reads a label-first CSV (no header); a .gz path is decompressed on the fly.
// Reads at most limit_rows rows when given. Parse failures report the line number.
LabeledDataset load_csv(const std::string& path,
                        std::optional<std::size_t> limit_rows = std::nullopt);

// Reads a features-only CSV (no label column). An empty file yields a
// zero-row matrix, unlike load_csv which rejects it.
DenseMatrix load_features_csv(const std::string& path);

void save_csv(const std::string& path, const LabeledDataset& dataset);

// Two Gaussian clusters in n dimensions with means at -separation/2 and
// +separation/2 along every axis, unit variance. First m/2 rows are class 0.
LabeledDataset make_blobs(std::uint64_t seed, std::size_t m, std::size_t n, double separation);

// Standard-normal features; labels drawn from a logistic model with a random
// planted weight vector, so the dataset is learnable but not separable.
LabeledDataset make_random(std::uint64_t seed, std::size_t m, std::size_t n);

// Materializes the DatasetSpec source (split and standardization are separate steps).
LabeledDataset load_dataset(const DatasetSpec& spec);

// Seeded shuffle, then ceil(m*(1-f)) rows train and the remainder test.
std::pair<LabeledDataset, LabeledDataset> train_test_split(const LabeledDataset& dataset,
                                                           double test_fraction,
                                                           std::uint64_t seed);

struct StandardizeStats {
    RowVector means;
    RowVector stds;
};

struct StandardizedSplit {
    LabeledDataset train;
    LabeledDataset test;
    StandardizeStats stats;
};

// Centers and scales each feature column by the TRAIN mean and population
// standard deviation; the test set is transformed with the train statistics.
// Columns with (numerically) zero variance become all zeros with std recorded
// as 1 so downstream division is harmless.
StandardizedSplit standardize(const LabeledDataset& train, const LabeledDataset& test);

DenseMatrix apply_standardization(const DenseMatrix& X, const StandardizeStats& stats);

}  // namespace lrbench
