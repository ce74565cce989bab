#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lrbench/kernels.hpp"
#include "lrbench/matrix.hpp"

namespace lrbench {

enum class Backend { sequential, parallel };

// Training hyperparameters plus execution knobs. threads and reduction only
// affect the parallel backend.
struct TrainConfig {
    double alpha = 0.1;
    double epsilon = 0.01;
    std::size_t max_iters = 10000;
    Backend backend = Backend::sequential;
    std::optional<RowVector> init;  // absent = zero initialization
    bool fit_intercept = true;
    unsigned threads = 0;  // 0 = hardware concurrency
    ReductionMode reduction = ReductionMode::deterministic;

    void validate() const;  // throws std::invalid_argument
};

struct FitResult {
    RowVector weights;  // includes the intercept as the last component when fitted
    std::size_t iterations = 0;
    double final_grad_norm = 0.0;
    std::vector<double> loss_trace;  // NLL at the weights entering each update
    double wall_time = 0.0;          // seconds, covers the whole fit call
    bool converged = false;
};

// Feature matrix with binary targets. Construction checks X.rows == Y.len and
// that every label is exactly 0 or 1. Zero-row datasets are representable
// (empty test partitions); fitting requires at least one row.
struct LabeledDataset {
    DenseMatrix X;
    RowVector Y;

    LabeledDataset(DenseMatrix x, RowVector y);

    std::size_t size() const { return X.rows(); }
    std::size_t features() const { return X.cols(); }
};

// Raised when training produces a non-finite loss or weight; the iteration
// number points at the step where it happened.
class DivergedError : public std::runtime_error {
public:
    DivergedError(std::size_t iteration, const std::string& message);
    std::size_t iteration() const { return iteration_; }

private:
    std::size_t iteration_;
};

// Returns a copy of X with a constant-1 column appended, so a bias term can be
// trained as an ordinary weight.
DenseMatrix augment_with_intercept(const DenseMatrix& X);

// Element i is sigmoid(<w, X row i>), strictly inside (0,1).
// Requires w.len == X.cols; intercepts must already be folded into X.
RowVector predict_proba(const RowVector& w, const DenseMatrix& X);

// Hard labels: 1 where the probability is >= threshold (boundary counts as 1).
// threshold must lie strictly inside (0,1).
RowVector predict_label(const RowVector& w, const DenseMatrix& X, double threshold = 0.5);

// Total negative log-likelihood, computed in logit space so confident
// predictions cannot overflow. Always >= 0.
double negative_log_likelihood(const RowVector& w, const LabeledDataset& dataset);

// (1/m) * (y_pred - Y) * X: the gradient of negative_log_likelihood/m in w.
RowVector gradient(const RowVector& w, const LabeledDataset& dataset);

// Called after each weight update with the 1-based iteration index and the
// current weights. Used for trajectory inspection; pass {} to disable.
using IterationObserver = std::function<void(std::size_t, const RowVector&)>;

// Plain full-batch gradient descent: w <- w - alpha * gradient(w) until the
// gradient norm is <= epsilon (checked before each update) or max_iters
// updates have been applied.
FitResult fit_sequential(const LabeledDataset& dataset, const TrainConfig& config,
                         const IterationObserver& observer = {});

// Same mathematical contract as fit_sequential, realized through the
// data-parallel kernels. With deterministic reductions the weight trajectory
// matches fit_sequential bit for bit.
FitResult fit_parallel(const LabeledDataset& dataset, const TrainConfig& config,
                       const IterationObserver& observer = {});

// Dispatches on config.backend.
FitResult fit(const LabeledDataset& dataset, const TrainConfig& config,
              const IterationObserver& observer = {});

}  // namespace lrbench
