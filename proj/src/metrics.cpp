#include "dpad/metrics.hpp"

#include <cmath>

#include "dpad/error.hpp"
#include "dpad/ops.hpp"

namespace dpad {

double l1_loss(std::span<const double> pred, std::span<const double> truth) {
    if (pred.size() != truth.size() || pred.empty()) {
        throw ValidationError("l1_loss: prediction and truth must have equal non-zero length");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) s += std::fabs(truth[i] - pred[i]);
    return s / static_cast<double>(pred.size());
}

namespace nn {
Var l1_loss(const Var& pred, std::span<const double> truth) {
    if (pred.value().size() != truth.size() || truth.empty()) {
        throw ValidationError("l1_loss: prediction and truth must have equal non-zero length");
    }
    const Var target = Var::constant(Matrix(pred.rows(), pred.cols(),
                                            std::vector<double>(truth.begin(), truth.end())));
    return mean_all(abs(sub(target, pred)));
}
}  // namespace nn

ErrorMetrics evaluate(const std::vector<std::vector<double>>& predictions,
                      const std::vector<std::vector<double>>& truths) {
    if (predictions.empty()) throw ValidationError("evaluate: empty prediction set");
    if (predictions.size() != truths.size()) {
        throw ValidationError("evaluate: prediction and truth sets differ in size");
    }
    double se = 0.0;
    double ae = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i].size() != truths[i].size() || predictions[i].empty()) {
            throw ValidationError("evaluate: misaligned forecast at index " + std::to_string(i));
        }
        for (std::size_t t = 0; t < predictions[i].size(); ++t) {
            const double d = truths[i][t] - predictions[i][t];
            se += d * d;
            ae += std::fabs(d);
        }
        n += predictions[i].size();
    }
    return {se / static_cast<double>(n), ae / static_cast<double>(n)};
}

}  // namespace dpad
