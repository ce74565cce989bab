#include "lrbench/metrics.hpp"

#include <stdexcept>
#include <string>

namespace lrbench {

namespace {

bool is_binary(double v) { return v == 0.0 || v == 1.0; }

}  // namespace

Confusion confusion(const RowVector& y_true, const RowVector& y_pred) {
    if (y_true.len() != y_pred.len()) {
        throw ShapeError("confusion: y_true.len=" + std::to_string(y_true.len()) +
                         " does not match y_pred.len=" + std::to_string(y_pred.len()));
    }
    Confusion c;
    for (std::size_t i = 0; i < y_true.len(); ++i) {
        if (!is_binary(y_true[i]) || !is_binary(y_pred[i])) {
            throw std::invalid_argument("confusion: entry at index " + std::to_string(i) +
                                        " is not 0 or 1");
        }
        if (y_true[i] == 1.0) {
            y_pred[i] == 1.0 ? ++c.tp : ++c.fn;
        } else {
            y_pred[i] == 1.0 ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

double f1_score(std::size_t tp, std::size_t fp, std::size_t fn) {
    const std::size_t denom = 2 * tp + fp + fn;
    if (denom == 0) return 0.0;
    return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double precision_score(std::size_t tp, std::size_t fp) {
    const std::size_t denom = tp + fp;
    if (denom == 0) return 0.0;
    return static_cast<double>(tp) / static_cast<double>(denom);
}

double recall_score(std::size_t tp, std::size_t fn) {
    const std::size_t denom = tp + fn;
    if (denom == 0) return 0.0;
    return static_cast<double>(tp) / static_cast<double>(denom);
}

EvalReport evaluate(const RowVector& y_true, const RowVector& y_pred, double wall_time,
                    const TrainConfig& config) {
    EvalReport report;
    report.counts = confusion(y_true, y_pred);
    report.f1 = f1_score(report.counts.tp, report.counts.fp, report.counts.fn);
    report.precision = precision_score(report.counts.tp, report.counts.fp);
    report.recall = recall_score(report.counts.tp, report.counts.fn);
    report.wall_time = wall_time;
    report.config_echo = config;
    return report;
}

}  // namespace lrbench
