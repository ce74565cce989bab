#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>
#include <zlib.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "lrbench/data.hpp"
#include "test_util.hpp"

using namespace lrbench;
using testutil::Rng;

namespace {

namespace fs = std::filesystem;

// Every temporary lives in its own directory so parallel test runs never collide.
struct TempDir {
    fs::path dir;
    TempDir() {
        dir = fs::temp_directory_path() /
              ("lrbench_data_" + std::to_string(::getpid()) + "_" +
               std::to_string(counter()++));
        fs::create_directories(dir);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    std::string file(const std::string& name) const { return (dir / name).string(); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

void write_gz(const std::string& path, const std::string& content) {
    gzFile f = gzopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    REQUIRE(gzwrite(f, content.data(), static_cast<unsigned>(content.size())) ==
            static_cast<int>(content.size()));
    gzclose(f);
}

// Zero training errors from a perceptron pass certify linear separability.
bool perceptron_separable(const LabeledDataset& d, std::size_t max_epochs) {
    const std::size_t n = d.features();
    std::vector<double> w(n + 1, 0.0);
    for (std::size_t epoch = 0; epoch < max_epochs; ++epoch) {
        std::size_t mistakes = 0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double target = d.Y[i] == 1.0 ? 1.0 : -1.0;
            double z = w[n];
            for (std::size_t j = 0; j < n; ++j) z += w[j] * d.X(i, j);
            if (target * z <= 0.0) {
                for (std::size_t j = 0; j < n; ++j) w[j] += target * d.X(i, j);
                w[n] += target;
                ++mistakes;
            }
        }
        if (mistakes == 0) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("load_csv reads label-first rows") {
    TempDir tmp;
    const std::string path = tmp.file("basic.csv");
    write_text(path, "1.0,0.5,0.2\n0.0,-1.0,0.3\n1.0,0.0,0.0\n");
    const LabeledDataset d = load_csv(path);
    CHECK(d.X == DenseMatrix::from_rows({{0.5, 0.2}, {-1.0, 0.3}, {0.0, 0.0}}));
    CHECK(d.Y == RowVector{1, 0, 1});
}

TEST_CASE("load_csv handles gzip input and missing trailing newline") {
    TempDir tmp;
    const std::string gz_path = tmp.file("basic.csv.gz");
    write_gz(gz_path, "1.0,0.5,0.2\n0.0,-1.0,0.3\n1.0,0.0,0.0");
    const LabeledDataset d = load_csv(gz_path);
    CHECK(d.X.rows() == 3);
    CHECK(d.X(1, 0) == -1.0);
    CHECK(d.Y == RowVector{1, 0, 1});
}

TEST_CASE("load_csv enforces the row and label contracts") {
    TempDir tmp;

    SUBCASE("missing file") {
        CHECK_THROWS_WITH_AS(load_csv(tmp.file("nope.csv")), doctest::Contains("cannot open"),
                             std::runtime_error);
    }
    SUBCASE("empty file is malformed, not an empty dataset") {
        const std::string path = tmp.file("empty.csv");
        write_text(path, "");
        CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("no data rows"),
                             std::runtime_error);
    }
    SUBCASE("bad number reports the line") {
        const std::string path = tmp.file("badnum.csv");
        write_text(path, "1.0,0.5\n0.0,zebra\n");
        CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains(":2:"), std::runtime_error);
    }
    SUBCASE("non-binary label reports the line") {
        const std::string path = tmp.file("badlabel.csv");
        write_text(path, "1.0,0.5\n2.0,0.5\n");
        CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains(":2:"), std::runtime_error);
    }
    SUBCASE("ragged widths report expected and found counts") {
        const std::string path = tmp.file("ragged.csv");
        write_text(path, "1.0,0.5,0.2\n0.0,1.0\n");
        CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("expected 3 fields, found 2"),
                             std::runtime_error);
    }
    SUBCASE("label-only rows are rejected") {
        const std::string path = tmp.file("labelonly.csv");
        write_text(path, "1.0\n0.0\n");
        CHECK_THROWS_AS(load_csv(path), std::runtime_error);
    }
    SUBCASE("non-finite feature values are rejected") {
        const std::string path = tmp.file("inf.csv");
        write_text(path, "1.0,inf\n");
        CHECK_THROWS_WITH_AS(load_csv(path), doctest::Contains("not finite"),
                             std::runtime_error);
    }
}

TEST_CASE("load_csv honors limit_rows") {
    TempDir tmp;
    const std::string path = tmp.file("limit.csv");
    write_text(path, "1.0,1\n0.0,2\n1.0,3\n0.0,4\n1.0,5\n");
    const LabeledDataset d = load_csv(path, 2);
    CHECK(d.size() == 2);
    CHECK(d.X == DenseMatrix::from_rows({{1}, {2}}));
}

TEST_CASE("load_features_csv allows empty input") {
    TempDir tmp;
    const std::string path = tmp.file("features.csv");
    write_text(path, "");
    CHECK(load_features_csv(path).rows() == 0);

    write_text(path, "0.5,0.2\n-1.0,0.3\n");
    const DenseMatrix X = load_features_csv(path);
    CHECK(X == DenseMatrix::from_rows({{0.5, 0.2}, {-1.0, 0.3}}));

    write_text(path, "0.5,0.2\n-1.0\n");
    CHECK_THROWS_AS(load_features_csv(path), std::runtime_error);
}

TEST_CASE("save then load reproduces a dataset bit for bit") {
    TempDir tmp;
    Rng rng(13131313);
    for (int round = 0; round < 5; ++round) {
        const auto m = static_cast<std::size_t>(rng.integer(1, 40));
        const auto n = static_cast<std::size_t>(rng.integer(1, 7));
        DenseMatrix X(m, n);
        std::vector<double> y(m);
        for (std::size_t i = 0; i < m; ++i) {
            y[i] = rng.uniform() < 0.5 ? 0.0 : 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                switch (rng.integer(0, 3)) {
                    case 0: X(i, j) = rng.uniform(-1e6, 1e6); break;
                    case 1: X(i, j) = rng.uniform(-1.0, 1.0) * 1e-300; break;
                    case 2: X(i, j) = 1.0 / 3.0 * rng.uniform(-9.0, 9.0); break;
                    default: X(i, j) = 0.1 * static_cast<double>(rng.integer(0, 99)); break;
                }
            }
        }
        const LabeledDataset original(std::move(X), RowVector(std::move(y)));
        const std::string path = tmp.file("roundtrip_" + std::to_string(round) + ".csv");
        save_csv(path, original);
        const LabeledDataset reloaded = load_csv(path);
        REQUIRE(reloaded.X == original.X);
        REQUIRE(reloaded.Y == original.Y);
    }
}

TEST_CASE("make_blobs yields balanced deterministic clusters") {
    SUBCASE("same seed, same bits") {
        const LabeledDataset a = make_blobs(7, 200, 2, 8.0);
        const LabeledDataset b = make_blobs(7, 200, 2, 8.0);
        CHECK(a.X == b.X);
        CHECK(a.Y == b.Y);
        const LabeledDataset c = make_blobs(8, 200, 2, 8.0);
        CHECK_FALSE(a.X == c.X);
    }
    SUBCASE("minimal size has one point per class") {
        const LabeledDataset d = make_blobs(3, 2, 1, 4.0);
        CHECK(d.size() == 2);
        CHECK(d.Y == RowVector{0, 1});
    }
    SUBCASE("clusters sit near their configured centers") {
        const LabeledDataset d = make_blobs(21, 2000, 3, 10.0);
        double mean0 = 0.0, mean1 = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i) {
            (d.Y[i] == 0.0 ? mean0 : mean1) += d.X(i, 0);
        }
        mean0 /= 1000.0;
        mean1 /= 1000.0;
        CHECK(mean0 == doctest::Approx(-5.0).epsilon(0.05));
        CHECK(mean1 == doctest::Approx(5.0).epsilon(0.05));
    }
    SUBCASE("the standard fixture is linearly separable") {
        const LabeledDataset d = make_blobs(7, 200, 2, 8.0);
        CHECK(perceptron_separable(d, 5000));
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(make_blobs(1, 1, 2, 8.0), std::invalid_argument);
        CHECK_THROWS_AS(make_blobs(1, 10, 0, 8.0), std::invalid_argument);
        CHECK_THROWS_AS(make_blobs(1, 10, 2, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(make_blobs(1, 10, 2, -3.0), std::invalid_argument);
    }
}

TEST_CASE("make_random produces learnable deterministic labels") {
    const LabeledDataset a = make_random(42, 1000, 10);
    const LabeledDataset b = make_random(42, 1000, 10);
    CHECK(a.X == b.X);
    CHECK(a.Y == b.Y);
    CHECK(a.size() == 1000);
    CHECK(a.features() == 10);
    std::size_t positives = 0;
    for (std::size_t i = 0; i < a.size(); ++i) positives += a.Y[i] == 1.0 ? 1 : 0;
    CHECK(positives > 100);
    CHECK(positives < 900);
    CHECK_THROWS_AS(make_random(1, 0, 5), std::invalid_argument);
}

TEST_CASE("load_dataset dispatches on the source") {
    TempDir tmp;
    const std::string path = tmp.file("src.csv");
    write_text(path, "1.0,0.5\n0.0,0.25\n");

    DatasetSpec csv_spec;
    csv_spec.source = CsvSource{path};
    CHECK(load_dataset(csv_spec).size() == 2);

    DatasetSpec blob_spec;
    blob_spec.source = BlobsSource{7, 200, 2, 8.0};
    const LabeledDataset blobs = load_dataset(blob_spec);
    CHECK(blobs.X == make_blobs(7, 200, 2, 8.0).X);

    DatasetSpec random_spec;
    random_spec.source = RandomSource{42, 50, 3};
    random_spec.limit_rows = 20;
    CHECK(load_dataset(random_spec).size() == 20);

    DatasetSpec bad;
    bad.source = BlobsSource{7, 200, 2, 8.0};
    bad.test_fraction = 1.0;
    CHECK_THROWS_AS(load_dataset(bad), std::invalid_argument);
    bad.test_fraction = 0.2;
    bad.limit_rows = 0;
    CHECK_THROWS_AS(load_dataset(bad), std::invalid_argument);
}

TEST_CASE("train_test_split partitions deterministically") {
    SUBCASE("zero fraction keeps everything in train") {
        const LabeledDataset d = make_blobs(3, 20, 2, 4.0);
        const auto [train, test] = train_test_split(d, 0.0, 5);
        CHECK(train.size() == 20);
        CHECK(test.size() == 0);
    }
    SUBCASE("ten rows at thirty percent go seven and three") {
        const LabeledDataset d = make_blobs(3, 10, 2, 4.0);
        const auto [train, test] = train_test_split(d, 0.3, 5);
        CHECK(train.size() == 7);
        CHECK(test.size() == 3);
    }
    SUBCASE("same seed gives identical splits") {
        const LabeledDataset d = make_random(9, 100, 4);
        const auto [a_train, a_test] = train_test_split(d, 0.25, 11);
        const auto [b_train, b_test] = train_test_split(d, 0.25, 11);
        CHECK(a_train.X == b_train.X);
        CHECK(a_test.X == b_test.X);
        const auto [c_train, c_test] = train_test_split(d, 0.25, 12);
        CHECK_FALSE(a_train.X == c_train.X);
    }
    SUBCASE("every row lands in exactly one part") {
        Rng rng(2468);
        for (int trial = 0; trial < 100; ++trial) {
            const auto m = static_cast<std::size_t>(rng.integer(1, 200));
            const double f = rng.uniform(0.0, 0.95);
            const auto seed = rng.integer(0, 1u << 30);
            DenseMatrix X(m, 1);
            std::vector<double> y(m);
            for (std::size_t i = 0; i < m; ++i) {
                X(i, 0) = static_cast<double>(i);
                y[i] = static_cast<double>(i % 2);
            }
            const LabeledDataset d(std::move(X), RowVector(std::move(y)));
            const auto [train, test] = train_test_split(d, f, seed);

            const auto expected_train =
                static_cast<std::size_t>(std::ceil(static_cast<double>(m) * (1.0 - f)));
            REQUIRE(train.size() == expected_train);
            REQUIRE(train.size() + test.size() == m);

            std::set<double> seen;
            for (std::size_t i = 0; i < train.size(); ++i) seen.insert(train.X(i, 0));
            for (std::size_t i = 0; i < test.size(); ++i) seen.insert(test.X(i, 0));
            REQUIRE(seen.size() == m);
        }
    }
    SUBCASE("invalid fraction") {
        const LabeledDataset d = make_blobs(3, 10, 2, 4.0);
        CHECK_THROWS_AS(train_test_split(d, 1.0, 1), std::invalid_argument);
        CHECK_THROWS_AS(train_test_split(d, -0.1, 1), std::invalid_argument);
    }
}

TEST_CASE("standardize centers and scales with train statistics") {
    SUBCASE("three-point column by hand") {
        const LabeledDataset train(DenseMatrix::from_rows({{1}, {2}, {3}}), RowVector{0, 1, 0});
        const LabeledDataset test(DenseMatrix::from_rows({{4}}), RowVector{1});
        const StandardizedSplit s = standardize(train, test);
        const double std_dev = std::sqrt(2.0 / 3.0);
        CHECK(s.train.X(0, 0) == doctest::Approx(-1.0 / std_dev).epsilon(1e-12));
        CHECK(s.train.X(0, 0) == doctest::Approx(-1.2247).epsilon(1e-4));
        CHECK(s.train.X(1, 0) == 0.0);
        CHECK(s.train.X(2, 0) == doctest::Approx(1.0 / std_dev).epsilon(1e-12));
        CHECK(s.test.X(0, 0) == doctest::Approx(2.0 / std_dev).epsilon(1e-12));
        CHECK(s.stats.means[0] == 2.0);
        CHECK(s.stats.stds[0] == doctest::Approx(std_dev).epsilon(1e-12));
        CHECK(s.train.Y == train.Y);
    }
    SUBCASE("constant columns become zeros with std one") {
        const LabeledDataset train(DenseMatrix::from_rows({{0.1, 1}, {0.1, 2}, {0.1, 3}}),
                                   RowVector{0, 1, 0});
        const LabeledDataset test(DenseMatrix::from_rows({{0.1, 4}}), RowVector{1});
        const StandardizedSplit s = standardize(train, test);
        CHECK(s.train.X(0, 0) == 0.0);
        CHECK(s.train.X(1, 0) == 0.0);
        CHECK(s.train.X(2, 0) == 0.0);
        CHECK(s.stats.stds[0] == 1.0);
        CHECK(s.stats.means[0] == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(std::abs(s.test.X(0, 0)) < 1e-12);
    }
    SUBCASE("standardizing twice changes nothing further") {
        const LabeledDataset blobs = make_blobs(5, 60, 3, 4.0);
        const LabeledDataset none(DenseMatrix(0, 3), RowVector());
        const StandardizedSplit once = standardize(blobs, none);
        const StandardizedSplit again = standardize(once.train, none);
        for (std::size_t i = 0; i < once.train.size(); ++i) {
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(again.train.X(i, j) ==
                      doctest::Approx(once.train.X(i, j)).epsilon(1e-10).scale(1.0));
            }
        }
    }
    SUBCASE("post-transform columns have zero mean and unit deviation") {
        Rng rng(56565);
        for (int trial = 0; trial < 10; ++trial) {
            const auto m = static_cast<std::size_t>(rng.integer(2, 60));
            const auto n = static_cast<std::size_t>(rng.integer(1, 6));
            DenseMatrix X(m, n);
            std::vector<double> y(m);
            for (std::size_t i = 0; i < m; ++i) {
                y[i] = static_cast<double>(i % 2);
                for (std::size_t j = 0; j < n; ++j) {
                    X(i, j) = rng.uniform(-50.0, 50.0) + 100.0 * static_cast<double>(j);
                }
            }
            const LabeledDataset train(std::move(X), RowVector(std::move(y)));
            const LabeledDataset none(DenseMatrix(0, n), RowVector());
            const StandardizedSplit s = standardize(train, none);
            for (std::size_t j = 0; j < n; ++j) {
                double mean = 0.0;
                for (std::size_t i = 0; i < m; ++i) mean += s.train.X(i, j);
                mean /= static_cast<double>(m);
                double var = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    const double dct = s.train.X(i, j) - mean;
                    var += dct * dct;
                }
                var /= static_cast<double>(m);
                REQUIRE(std::abs(mean) <= 1e-10);
                REQUIRE(std::abs(std::sqrt(var) - 1.0) <= 1e-10);
            }
        }
    }
    SUBCASE("empty train set is rejected") {
        const LabeledDataset none(DenseMatrix(0, 2), RowVector());
        CHECK_THROWS_AS(standardize(none, none), std::invalid_argument);
    }
    SUBCASE("apply_standardization validates widths") {
        StandardizeStats stats{RowVector{0.0, 1.0}, RowVector{1.0, 2.0}};
        CHECK_THROWS_AS(apply_standardization(DenseMatrix(2, 3), stats), ShapeError);
        const DenseMatrix out =
            apply_standardization(DenseMatrix::from_rows({{2, 5}}), stats);
        CHECK(out == DenseMatrix::from_rows({{2, 2}}));
    }
}
