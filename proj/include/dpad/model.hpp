#pragma once

#include <span>
#include <vector>

#include "dpad/config.hpp"
#include "dpad/drd.hpp"
#include "dpad/ifm.hpp"
#include "dpad/params.hpp"
#include "dpad/revin.hpp"

namespace dpad {

enum class InitMode { Random, Zero };

/// The assembled forecaster: RevIN -> D-R-D tree -> IF module -> MLP head
/// -> inverse RevIN. Univariate; multivariate data is fed channel by channel
/// through the same parameters.
class DPadModel {
public:
    /// Validates `cfg` and registers all parameters. Zero init sets every
    /// learned weight to zero except the RevIN scale, which starts at one.
    explicit DPadModel(const ModelConfig& cfg, InitMode mode = InitMode::Random);

    DPadModel(const DPadModel&) = delete;
    DPadModel& operator=(const DPadModel&) = delete;
    DPadModel(DPadModel&&) = default;
    DPadModel& operator=(DPadModel&&) = default;

    /// `window` is lookback x 1; returns horizon x 1 in the input's scale.
    nn::Var forward(const nn::Var& window) const;
    /// Inference without graph recording.
    std::vector<double> predict(std::span<const double> window) const;
    /// The T x N matrix entering the IF module for a (raw) window.
    Matrix disentangle(std::span<const double> window) const;

    const ModelConfig& config() const { return cfg_; }
    nn::ParameterSet& parameters() { return params_; }
    const nn::ParameterSet& parameters() const { return params_; }
    const DrdTree& tree() const { return tree_; }

    /// Copies parameter values from `values` (same names and shapes).
    void load_values(const std::vector<std::pair<std::string, Matrix>>& values);
    std::vector<std::pair<std::string, Matrix>> snapshot() const;

private:
    ModelConfig cfg_;
    nn::ParameterSet params_;
    RevinAffine revin_;
    DrdTree tree_;
    IfmParams ifm_;
    nn::MlpParams head_;  // d_out -> d_out -> H
};

}  // namespace dpad
