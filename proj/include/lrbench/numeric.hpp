#pragma once

#include <cmath>
#include <limits>

namespace lrbench {

// Logistic function with the overflow-safe branch form. The result is clamped
// to stay strictly inside (0,1): the tails of the exact function round to 0.0
// and 1.0 in double precision, which would break log-based consumers.
inline double stable_sigmoid(double x) {
    double s;
    if (x >= 0.0) {
        s = 1.0 / (1.0 + std::exp(-x));
    } else {
        const double t = std::exp(x);
        s = t / (1.0 + t);
    }
    if (s <= 0.0) return std::numeric_limits<double>::denorm_min();
    if (s >= 1.0) return 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
    return s;
}

// log(1 + e^x) without overflow for large |x|.
inline double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// Per-sample negative log-likelihood expressed in terms of the logit:
// -[y log p + (1-y) log(1-p)] = softplus(z) - y*z  for p = sigmoid(z).
inline double nll_term(double logit, double label) {
    return softplus(logit) - label * logit;
}

}  // namespace lrbench
