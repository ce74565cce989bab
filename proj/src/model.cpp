#include "lrbench/model.hpp"

#include <chrono>
#include <cmath>
#include <cstring>
#include <string>

#include "lrbench/numeric.hpp"

namespace lrbench {

namespace {

using steady_clock = std::chrono::steady_clock;

double seconds_since(steady_clock::time_point start) {
    return std::chrono::duration<double>(steady_clock::now() - start).count();
}

// z[i] = <w, row i of X>, inner sum in ascending feature order. This matches
// the accumulation order of the kernel pipeline (vector_matrix_mul on X^T
// followed by matrix_col_sum), which keeps both backends bit-comparable.
void compute_logits(const DenseMatrix& X, const RowVector& w, RowVector& z) {
    const std::size_t n = X.cols();
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double* row = X.row_ptr(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += w[j] * row[j];
        z[i] = acc;
    }
}

double nll_from_logits(const RowVector& z, const RowVector& y) {
    double total = 0.0;
    for (std::size_t i = 0; i < z.len(); ++i) total += nll_term(z[i], y[i]);
    return total;
}

// g[j] = sum_i err[i] * X[i][j], each output accumulated in ascending row
// order (same order as matrix_col_sum in deterministic mode).
void accumulate_gradient_raw(const DenseMatrix& X, const RowVector& err, RowVector& g) {
    const std::size_t n = X.cols();
    g.fill(0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double* row = X.row_ptr(i);
        const double e = err[i];
        for (std::size_t j = 0; j < n; ++j) g[j] += e * row[j];
    }
}

RowVector initial_weights(const TrainConfig& config, std::size_t expected_len) {
    if (config.init) {
        if (config.init->len() != expected_len) {
            throw ShapeError("init vector length " + std::to_string(config.init->len()) +
                             " does not match trained feature count " +
                             std::to_string(expected_len));
        }
        return *config.init;
    }
    return RowVector(expected_len);
}

void check_fit_inputs(const LabeledDataset& dataset, const TrainConfig& config) {
    config.validate();
    if (dataset.size() == 0) {
        throw std::invalid_argument("cannot fit an empty dataset");
    }
}

void check_weights_finite(const RowVector& w, std::size_t iteration) {
    for (std::size_t j = 0; j < w.len(); ++j) {
        if (!std::isfinite(w[j])) {
            throw DivergedError(iteration, "non-finite weight at iteration " +
                                               std::to_string(iteration) +
                                               " (learning rate may be too large)");
        }
    }
}

}  // namespace

void TrainConfig::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("alpha must be a positive finite number");
    }
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("epsilon must be a positive finite number");
    }
    if (max_iters < 1) {
        throw std::invalid_argument("max_iters must be at least 1");
    }
}

LabeledDataset::LabeledDataset(DenseMatrix x, RowVector y) : X(std::move(x)), Y(std::move(y)) {
    if (X.rows() != Y.len()) {
        throw ShapeError("LabeledDataset: X.rows=" + std::to_string(X.rows()) +
                         " does not match Y.len=" + std::to_string(Y.len()));
    }
    for (std::size_t i = 0; i < Y.len(); ++i) {
        if (Y[i] != 0.0 && Y[i] != 1.0) {
            throw std::invalid_argument("LabeledDataset: label at row " + std::to_string(i) +
                                        " is not 0 or 1");
        }
    }
}

DivergedError::DivergedError(std::size_t iteration, const std::string& message)
    : std::runtime_error(message), iteration_(iteration) {}

DenseMatrix augment_with_intercept(const DenseMatrix& X) {
    DenseMatrix out(X.rows(), X.cols() + 1);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const double* src = X.row_ptr(i);
        double* dst = out.row_ptr(i);
        std::memcpy(dst, src, X.cols() * sizeof(double));
        dst[X.cols()] = 1.0;
    }
    return out;
}

RowVector predict_proba(const RowVector& w, const DenseMatrix& X) {
    if (w.len() != X.cols()) {
        throw ShapeError("predict_proba: w.len=" + std::to_string(w.len()) +
                         " does not match X.cols=" + std::to_string(X.cols()));
    }
    RowVector z(X.rows());
    compute_logits(X, w, z);
    for (std::size_t i = 0; i < z.len(); ++i) z[i] = stable_sigmoid(z[i]);
    return z;
}

RowVector predict_label(const RowVector& w, const DenseMatrix& X, double threshold) {
    if (!(threshold > 0.0) || !(threshold < 1.0)) {
        throw std::invalid_argument("threshold must lie strictly inside (0,1), got " +
                                    std::to_string(threshold));
    }
    RowVector proba = predict_proba(w, X);
    for (std::size_t i = 0; i < proba.len(); ++i) {
        proba[i] = proba[i] >= threshold ? 1.0 : 0.0;
    }
    return proba;
}

double negative_log_likelihood(const RowVector& w, const LabeledDataset& dataset) {
    if (w.len() != dataset.X.cols()) {
        throw ShapeError("negative_log_likelihood: w.len=" + std::to_string(w.len()) +
                         " does not match X.cols=" + std::to_string(dataset.X.cols()));
    }
    RowVector z(dataset.size());
    compute_logits(dataset.X, w, z);
    return nll_from_logits(z, dataset.Y);
}

RowVector gradient(const RowVector& w, const LabeledDataset& dataset) {
    if (w.len() != dataset.X.cols()) {
        throw ShapeError("gradient: w.len=" + std::to_string(w.len()) +
                         " does not match X.cols=" + std::to_string(dataset.X.cols()));
    }
    const std::size_t m = dataset.size();
    RowVector z(m);
    compute_logits(dataset.X, w, z);
    RowVector err(m);
    for (std::size_t i = 0; i < m; ++i) err[i] = stable_sigmoid(z[i]) - dataset.Y[i];
    RowVector g(dataset.X.cols());
    accumulate_gradient_raw(dataset.X, err, g);
    const double md = static_cast<double>(m);
    for (std::size_t j = 0; j < g.len(); ++j) g[j] /= md;
    return g;
}

FitResult fit_sequential(const LabeledDataset& dataset, const TrainConfig& config,
                         const IterationObserver& observer) {
    const auto start = steady_clock::now();
    check_fit_inputs(dataset, config);

    const DenseMatrix* X = &dataset.X;
    DenseMatrix augmented;
    if (config.fit_intercept) {
        augmented = augment_with_intercept(dataset.X);
        X = &augmented;
    }
    const RowVector& Y = dataset.Y;
    const std::size_t m = X->rows();
    const std::size_t n = X->cols();
    const double md = static_cast<double>(m);

    RowVector w = initial_weights(config, n);
    RowVector z(m), err(m), g(n);

    FitResult result;
    std::size_t iters = 0;
    for (;;) {
        compute_logits(*X, w, z);
        const double nll = nll_from_logits(z, Y);
        for (std::size_t i = 0; i < m; ++i) err[i] = stable_sigmoid(z[i]) - Y[i];
        accumulate_gradient_raw(*X, err, g);
        for (std::size_t j = 0; j < n; ++j) g[j] /= md;
        double grad_norm_sq = 0.0;
        for (std::size_t j = 0; j < n; ++j) grad_norm_sq += g[j] * g[j];
        const double grad_norm = std::sqrt(grad_norm_sq);

        if (!std::isfinite(nll)) {
            throw DivergedError(iters, "non-finite loss at iteration " + std::to_string(iters) +
                                           " (learning rate may be too large)");
        }
        if (!std::isfinite(grad_norm)) {
            throw DivergedError(iters, "non-finite gradient norm at iteration " +
                                           std::to_string(iters) +
                                           " (learning rate may be too large)");
        }
        result.final_grad_norm = grad_norm;
        if (grad_norm <= config.epsilon) {
            result.converged = true;
            break;
        }
        if (iters >= config.max_iters) {
            result.converged = false;
            break;
        }
        for (std::size_t j = 0; j < n; ++j) w[j] -= config.alpha * g[j];
        ++iters;
        check_weights_finite(w, iters);
        result.loss_trace.push_back(nll);
        if (observer) observer(iters, w);
    }

    result.weights = std::move(w);
    result.iterations = iters;
    result.wall_time = seconds_since(start);
    return result;
}

FitResult fit_parallel(const LabeledDataset& dataset, const TrainConfig& config,
                       const IterationObserver& observer) {
    const auto start = steady_clock::now();
    check_fit_inputs(dataset, config);

    const DenseMatrix* X = &dataset.X;
    DenseMatrix augmented;
    if (config.fit_intercept) {
        augmented = augment_with_intercept(dataset.X);
        X = &augmented;
    }
    const RowVector& Y = dataset.Y;
    const std::size_t m = X->rows();
    const std::size_t n = X->cols();
    const double md = static_cast<double>(m);

    ThreadPool pool(config.threads);
    const ReductionMode mode = config.reduction;

    // vector_matrix_mul destroys its matrix argument, so each iteration works
    // on scratch copies; the pristine X and X^T survive across iterations.
    const DenseMatrix Xt = X->transposed();
    DenseMatrix xt_scratch(Xt.rows(), Xt.cols());
    DenseMatrix x_scratch(X->rows(), X->cols());
    RowVector w = initial_weights(config, n);
    RowVector res(m), grad(n), step(n);

    FitResult result;
    std::size_t iters = 0;
    for (;;) {
        std::memcpy(xt_scratch.data().data(), Xt.data().data(), Xt.data().size() * sizeof(double));
        vector_matrix_mul(w, xt_scratch, pool);
        matrix_col_sum(xt_scratch, res, pool, mode);  // res = logits
        const double nll = nll_from_logits(res, Y);
        sigmoid_map(res, res, pool);  // res = y_pred
        subtract(Y, res, pool);       // res = y_pred - Y
        std::memcpy(x_scratch.data().data(), X->data().data(), X->data().size() * sizeof(double));
        vector_matrix_mul(res, x_scratch, pool);
        matrix_col_sum(x_scratch, grad, pool, mode);
        for (std::size_t j = 0; j < n; ++j) grad[j] /= md;
        const double grad_norm = std::sqrt(norm2(grad, 0.0, pool, mode));

        if (!std::isfinite(nll)) {
            throw DivergedError(iters, "non-finite loss at iteration " + std::to_string(iters) +
                                           " (learning rate may be too large)");
        }
        if (!std::isfinite(grad_norm)) {
            throw DivergedError(iters, "non-finite gradient norm at iteration " +
                                           std::to_string(iters) +
                                           " (learning rate may be too large)");
        }
        result.final_grad_norm = grad_norm;
        if (grad_norm <= config.epsilon) {
            result.converged = true;
            break;
        }
        if (iters >= config.max_iters) {
            result.converged = false;
            break;
        }
        for (std::size_t j = 0; j < n; ++j) step[j] = config.alpha * grad[j];
        subtract(step, w, pool);
        ++iters;
        check_weights_finite(w, iters);
        result.loss_trace.push_back(nll);
        if (observer) observer(iters, w);
    }

    result.weights = std::move(w);
    result.iterations = iters;
    result.wall_time = seconds_since(start);
    return result;
}

FitResult fit(const LabeledDataset& dataset, const TrainConfig& config,
              const IterationObserver& observer) {
    return config.backend == Backend::sequential ? fit_sequential(dataset, config, observer)
                                                 : fit_parallel(dataset, config, observer);
}

}  // namespace lrbench
