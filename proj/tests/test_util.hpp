#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "lrbench/matrix.hpp"

namespace testutil {

// Uniform doubles straight from engine bits so fixtures are reproducible
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {
        return lo + gen_() % (hi - lo + 1);
    }

private:
    std::mt19937_64 gen_;
};

inline std::vector<double> random_vector(Rng& rng, std::size_t len, double lo, double hi) {
    std::vector<double> v(len);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

inline std::vector<std::vector<double>> random_nested(Rng& rng, std::size_t rows,
                                                      std::size_t cols, double lo, double hi) {
    std::vector<std::vector<double>> M(rows);
    for (auto& row : M) row = random_vector(rng, cols, lo, hi);
    return M;
}

inline lrbench::DenseMatrix to_dense(const std::vector<std::vector<double>>& M) {
    std::vector<double> flat;
    for (const auto& row : M) flat.insert(flat.end(), row.begin(), row.end());
    return {M.size(), M.empty() ? 0 : M[0].size(), std::move(flat)};
}

inline lrbench::RowVector to_row(const std::vector<double>& v) { return lrbench::RowVector(v); }

}  // namespace testutil
