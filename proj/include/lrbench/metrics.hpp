#pragma once

#include <chrono>
#include <cstddef>
#include <utility>

#include "lrbench/matrix.hpp"
#include "lrbench/model.hpp"

namespace lrbench {

struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
};

// Counts with label 1 as the positive class; inputs must be binary vectors
// of equal length.
Confusion confusion(const RowVector& y_true, const RowVector& y_pred);

// 2tp / (2tp + fp + fn); 0 when the denominator is 0.
double f1_score(std::size_t tp, std::size_t fp, std::size_t fn);

double precision_score(std::size_t tp, std::size_t fp);
double recall_score(std::size_t tp, std::size_t fn);

struct EvalReport {
    Confusion counts;
    double f1 = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double wall_time = 0.0;
    TrainConfig config_echo;
};

EvalReport evaluate(const RowVector& y_true, const RowVector& y_pred, double wall_time,
                    const TrainConfig& config);

// Wall-clock duration of f() on the monotonic clock, paired with its result.
template <typename F>
auto timed(F&& f) -> std::pair<decltype(f()), double> {
    const auto start = std::chrono::steady_clock::now();
    auto result = f();
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(result), elapsed};
}

}  // namespace lrbench
