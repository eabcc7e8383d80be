#pragma once

#include <span>
#include <vector>

#include "dpad/autodiff.hpp"

namespace dpad {

/// Mean absolute error over one horizon. Throws ValidationError on length mismatch.
double l1_loss(std::span<const double> pred, std::span<const double> truth);

namespace nn {
/// Differentiable mean |truth - pred|; truth is a constant.
Var l1_loss(const Var& pred, std::span<const double> truth);
}  // namespace nn

struct ErrorMetrics {
    double mse = 0.0;
    double mae = 0.0;
};

/// Averages squared and absolute errors over every forecast (window x
/// channel) and every step. Throws ValidationError on empty or misaligned input.
ErrorMetrics evaluate(const std::vector<std::vector<double>>& predictions,
                      const std::vector<std::vector<double>>& truths);

}  // namespace dpad
