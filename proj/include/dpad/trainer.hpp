#pragma once

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "dpad/dataset.hpp"
#include "dpad/metrics.hpp"
#include "dpad/model.hpp"
#include "json.hpp"

namespace dpad {

/// Adam with bias-corrected first and second moment estimates.
class AdamOptimizer {
public:
    AdamOptimizer(nn::ParameterSet& params, double lr, double beta1 = 0.9, double beta2 = 0.999,
                  double eps = 1e-8);
    void step();
    void zero_grad() { params_.zero_grad(); }
    std::size_t steps() const { return t_; }

private:
    nn::ParameterSet& params_;
    double lr_, beta1_, beta2_, eps_;
    std::size_t t_ = 0;
    std::vector<Matrix> m_;
    std::vector<Matrix> v_;
};

/// Rescales all gradients so their global L2 norm is at most max_norm.
/// Returns the norm before clipping.
double clip_grad_norm(nn::ParameterSet& params, double max_norm);

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_mse = 0.0;
    double val_mae = 0.0;
    double seconds = 0.0;
};

struct TrainingHistory {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;
    double best_val_mse = 0.0;
    bool early_stopped = false;

    nlohmann::json to_json() const;
};

struct TrainOptions {
    /// Called after every epoch; a no-op by default.
    std::function<void(const EpochRecord&)> on_epoch;
};

/// Mean L1 loss per minibatch, Adam updates, validation MSE after every
/// epoch, early stopping after `patience` epochs without improvement. The
/// best-validation parameters are restored before returning. Throws
/// TrainingDiverged on a non-finite loss.
TrainingHistory train(DPadModel& model, const WindowSet& train_set, const WindowSet& val_set,
                      const TrainOptions& options = {});

/// MSE/MAE over every window and channel, comparing the first `steps`
/// forecast steps (all of them when 0).
ErrorMetrics evaluate_model(const DPadModel& model, const WindowSet& windows,
                            std::size_t steps = 0);

/// Same metrics for the last-value persistence forecast.
ErrorMetrics evaluate_persistence(const WindowSet& windows);

}  // namespace dpad
