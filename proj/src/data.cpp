#include "lrbench/data.hpp"

#include <zlib.h>

#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lrbench/numeric.hpp"

namespace lrbench {

namespace {

// Line-by-line reader over zlib's gz layer, which passes uncompressed files
// through unchanged, so .csv and .csv.gz share one code path.
class LineReader {
public:
    explicit LineReader(const std::string& path) : path_(path), file_(gzopen(path.c_str(), "rb")) {
        if (!file_) throw std::runtime_error("cannot open " + path);
    }
    ~LineReader() {
        if (file_) gzclose(file_);
    }
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    bool next(std::string& line) {
        line.clear();
        char buf[1 << 16];
        for (;;) {
            if (gzgets(file_, buf, sizeof(buf)) == nullptr) {
                int errnum = Z_OK;
                const char* msg = gzerror(file_, &errnum);
                if (errnum != Z_OK && errnum != Z_STREAM_END) {
                    throw std::runtime_error(path_ + ": read failed: " +
                                             (msg ? msg : "unknown zlib error"));
                }
                return !line.empty();
            }
            line += buf;
            if (!line.empty() && line.back() == '\n') {
                line.pop_back();
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return true;
            }
        }
    }

private:
    std::string path_;
    gzFile file_;
};

void parse_row(const std::string& line, const std::string& path, std::size_t line_no,
               std::vector<double>& out) {
    out.clear();
    const char* p = line.data();
    const char* end = p + line.size();
    for (;;) {
        const char* comma = static_cast<const char*>(std::memchr(p, ',', end - p));
        const char* stop = comma ? comma : end;
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(p, stop, value);
        if (ec != std::errc() || ptr != stop) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": field " +
                                     std::to_string(out.size() + 1) + " is not a number");
        }
        if (!std::isfinite(value)) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": field " +
                                     std::to_string(out.size() + 1) + " is not finite");
        }
        out.push_back(value);
        if (!comma) break;
        p = comma + 1;
    }
}

void check_width(std::size_t found, std::size_t expected, const std::string& path,
                 std::size_t line_no) {
    if (found != expected) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                 std::to_string(expected) + " fields, found " +
                                 std::to_string(found));
    }
}

void write_double(std::ofstream& out, double value) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    out.write(buf, static_cast<std::streamsize>(ptr - buf));
}

// Gaussian draws built from raw engine bits rather than std::normal_distribution,
// whose output is implementation-defined and would break cross-platform
// reproducibility of seeded datasets.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

LabeledDataset take_rows(const LabeledDataset& dataset, const std::vector<std::size_t>& indices) {
    DenseMatrix X(indices.size(), dataset.X.cols());
    std::vector<double> y(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        std::memcpy(X.row_ptr(i), dataset.X.row_ptr(indices[i]),
                    dataset.X.cols() * sizeof(double));
        y[i] = dataset.Y[indices[i]];
    }
    return LabeledDataset(std::move(X), RowVector(std::move(y)));
}

LabeledDataset head_rows(LabeledDataset dataset, std::size_t count) {
    if (count >= dataset.size()) return dataset;
    std::vector<std::size_t> indices(count);
    std::iota(indices.begin(), indices.end(), std::size_t{0});
    return take_rows(dataset, indices);
}

}  // namespace

void DatasetSpec::validate() const {
    if (!(test_fraction >= 0.0) || !(test_fraction < 1.0)) {
        throw std::invalid_argument("test_fraction must lie in [0,1)");
    }
    if (limit_rows && *limit_rows < 1) {
        throw std::invalid_argument("limit_rows must be at least 1");
    }
    if (const auto* blobs = std::get_if<BlobsSource>(&source)) {
        if (blobs->m < 2 || blobs->n < 1 || !(blobs->separation > 0.0)) {
            throw std::invalid_argument("blobs need m >= 2, n >= 1 and positive separation");
        }
    } else if (const auto* random = std::get_if<RandomSource>(&source)) {
        if (random->m < 1 || random->n < 1) {
            throw std::invalid_argument("random source needs m >= 1 and n >= 1");
        }
    }
}

LabeledDataset load_csv(const std::string& path, std::optional<std::size_t> limit_rows) {
    LineReader reader(path);
    std::string line;
    std::vector<double> fields;
    std::vector<double> xdata;
    std::vector<double> ydata;
    std::size_t ncols = 0;
    std::size_t line_no = 0;
    while ((!limit_rows || ydata.size() < *limit_rows) && reader.next(line)) {
        ++line_no;
        parse_row(line, path, line_no, fields);
        if (ydata.empty()) {
            if (fields.size() < 2) {
                throw std::runtime_error(path + ":1: need a label and at least one feature, found " +
                                         std::to_string(fields.size()) + " field(s)");
            }
            ncols = fields.size();
        } else {
            check_width(fields.size(), ncols, path, line_no);
        }
        if (fields[0] != 0.0 && fields[0] != 1.0) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": label is not 0 or 1");
        }
        ydata.push_back(fields[0]);
        xdata.insert(xdata.end(), fields.begin() + 1, fields.end());
    }
    if (ydata.empty()) {
        throw std::runtime_error(path + ": no data rows");
    }
    const std::size_t nrows = ydata.size();
    return LabeledDataset(DenseMatrix(nrows, ncols - 1, std::move(xdata)),
                          RowVector(std::move(ydata)));
}

DenseMatrix load_features_csv(const std::string& path) {
    LineReader reader(path);
    std::string line;
    std::vector<double> fields;
    std::vector<double> xdata;
    std::size_t ncols = 0;
    std::size_t rows = 0;
    std::size_t line_no = 0;
    while (reader.next(line)) {
        ++line_no;
        parse_row(line, path, line_no, fields);
        if (rows == 0) {
            ncols = fields.size();
        } else {
            check_width(fields.size(), ncols, path, line_no);
        }
        xdata.insert(xdata.end(), fields.begin(), fields.end());
        ++rows;
    }
    return DenseMatrix(rows, ncols, std::move(xdata));
}

void save_csv(const std::string& path, const LabeledDataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        write_double(out, dataset.Y[i]);
        const double* row = dataset.X.row_ptr(i);
        for (std::size_t j = 0; j < dataset.X.cols(); ++j) {
            out.put(',');
            write_double(out, row[j]);
        }
        out.put('\n');
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

LabeledDataset make_blobs(std::uint64_t seed, std::size_t m, std::size_t n, double separation) {
    if (m < 2 || n < 1 || !(separation > 0.0) || !std::isfinite(separation)) {
        throw std::invalid_argument("blobs need m >= 2, n >= 1 and positive separation");
    }
    NormalSampler sampler(seed);
    const std::size_t class0 = m / 2;
    DenseMatrix X(m, n);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double center = i < class0 ? -separation / 2.0 : separation / 2.0;
        y[i] = i < class0 ? 0.0 : 1.0;
        double* row = X.row_ptr(i);
        for (std::size_t j = 0; j < n; ++j) row[j] = center + sampler.normal();
    }
    return LabeledDataset(std::move(X), RowVector(std::move(y)));
}

LabeledDataset make_random(std::uint64_t seed, std::size_t m, std::size_t n) {
    if (m < 1 || n < 1) {
        throw std::invalid_argument("random source needs m >= 1 and n >= 1");
    }
    NormalSampler sampler(seed);
    DenseMatrix X(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        double* row = X.row_ptr(i);
        for (std::size_t j = 0; j < n; ++j) row[j] = sampler.normal();
    }
    std::vector<double> truth(n);
    for (std::size_t j = 0; j < n; ++j) truth[j] = sampler.normal();
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = X.row_ptr(i);
        double z = 0.0;
        for (std::size_t j = 0; j < n; ++j) z += truth[j] * row[j];
        y[i] = sampler.uniform() < stable_sigmoid(z) ? 1.0 : 0.0;
    }
    return LabeledDataset(std::move(X), RowVector(std::move(y)));
}

LabeledDataset load_dataset(const DatasetSpec& spec) {
    spec.validate();
    LabeledDataset dataset = std::visit(
        [&](const auto& source) -> LabeledDataset {
            using T = std::decay_t<decltype(source)>;
            if constexpr (std::is_same_v<T, CsvSource>) {
                return load_csv(source.path, spec.limit_rows);
            } else if constexpr (std::is_same_v<T, BlobsSource>) {
                return make_blobs(source.seed, source.m, source.n, source.separation);
            } else {
                return make_random(source.seed, source.m, source.n);
            }
        },
        spec.source);
    if (spec.limit_rows) dataset = head_rows(std::move(dataset), *spec.limit_rows);
    return dataset;
}

std::pair<LabeledDataset, LabeledDataset> train_test_split(const LabeledDataset& dataset,
                                                           double test_fraction,
                                                           std::uint64_t seed) {
    if (!(test_fraction >= 0.0) || !(test_fraction < 1.0)) {
        throw std::invalid_argument("test_fraction must lie in [0,1)");
    }
    const std::size_t m = dataset.size();
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 gen(seed);
    for (std::size_t i = m; i-- > 1;) {
        std::swap(perm[i], perm[gen() % (i + 1)]);
    }
    auto train_count = static_cast<std::size_t>(
        std::ceil(static_cast<double>(m) * (1.0 - test_fraction)));
    if (train_count > m) train_count = m;
    const std::vector<std::size_t> train_idx(perm.begin(), perm.begin() + train_count);
    const std::vector<std::size_t> test_idx(perm.begin() + train_count, perm.end());
    return {take_rows(dataset, train_idx), take_rows(dataset, test_idx)};
}

StandardizedSplit standardize(const LabeledDataset& train, const LabeledDataset& test) {
    if (train.size() == 0) throw std::invalid_argument("cannot standardize an empty train set");
    if (test.size() > 0 && test.features() != train.features()) {
        throw ShapeError("standardize: test has " + std::to_string(test.features()) +
                         " features, train has " + std::to_string(train.features()));
    }
    const std::size_t m = train.size();
    const std::size_t n = train.features();
    const double md = static_cast<double>(m);
    RowVector means(n), stds(n);
    std::vector<bool> degenerate(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) sum += train.X(i, j);
        const double mean = sum / md;
        double sq = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = train.X(i, j) - mean;
            sq += d * d;
        }
        const double std_dev = std::sqrt(sq / md);
        means[j] = mean;
        // A constant column measures a tiny nonzero variance through rounding,
        // so "zero variance" is tested against a relative threshold.
        if (std_dev < 1e-12 * (1.0 + std::abs(mean))) {
            degenerate[j] = true;
            stds[j] = 1.0;
        } else {
            stds[j] = std_dev;
        }
    }
    StandardizeStats stats{std::move(means), std::move(stds)};
    DenseMatrix train_x = apply_standardization(train.X, stats);
    for (std::size_t j = 0; j < n; ++j) {
        if (!degenerate[j]) continue;
        for (std::size_t i = 0; i < m; ++i) train_x(i, j) = 0.0;
    }
    DenseMatrix test_x = test.size() > 0 ? apply_standardization(test.X, stats)
                                         : DenseMatrix(0, test.X.cols());
    return {LabeledDataset(std::move(train_x), train.Y),
            LabeledDataset(std::move(test_x), test.Y), std::move(stats)};
}

DenseMatrix apply_standardization(const DenseMatrix& X, const StandardizeStats& stats) {
    if (X.cols() != stats.means.len() || X.cols() != stats.stds.len()) {
        throw ShapeError("apply_standardization: X.cols=" + std::to_string(X.cols()) +
                         " does not match stats length " + std::to_string(stats.means.len()));
    }
    DenseMatrix out(X.rows(), X.cols());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double* src = X.row_ptr(i);
        double* dst = out.row_ptr(i);
        for (std::size_t j = 0; j < X.cols(); ++j) {
            dst[j] = (src[j] - stats.means[j]) / stats.stds[j];
        }
    }
    return out;
}

}  // namespace lrbench
