#include "dpad/model.hpp"

#include "dpad/error.hpp"
#include "dpad/ops.hpp"

namespace dpad {

DPadModel::DPadModel(const ModelConfig& cfg, InitMode mode) : cfg_(cfg) {
    cfg_.validate();
    nn::Initializer init(cfg_.seed, mode == InitMode::Zero);
    if (cfg_.revin_affine) {
        revin_.scale = params_.add("revin.scale", Matrix(1, 1, 1.0));
        revin_.shift = params_.add("revin.shift", Matrix(1, 1, 0.0));
    }
    tree_ = DrdTree(params_, cfg_.drd_shape(), init);
    ifm_ = make_ifm(params_, "ifm", cfg_.ifm_shape(), init);
    head_ = nn::make_mlp(params_, "head", {cfg_.out_dim, cfg_.out_dim, cfg_.horizon}, init);
}

nn::Var DPadModel::forward(const nn::Var& window) const {
    if (window.rows() != cfg_.lookback || window.cols() != 1) {
        throw ValidationError("forward: window must be " + std::to_string(cfg_.lookback) + " x 1");
    }
    const RevinState st = revin_statistics(window.value().data());
    const nn::Var normalized = nn::revin_normalize(window, st, revin_);
    const nn::Var components = tree_.forward(normalized);
    const IfmOptions opts{cfg_.adjacency_axis, cfg_.disable_if_module};
    const nn::Var fused = interaction_fusion(components, ifm_, opts);
    const nn::Var forecast = nn::mlp(fused, head_);
    return nn::revin_denormalize(forecast, st, revin_);
}

std::vector<double> DPadModel::predict(std::span<const double> window) const {
    nn::NoGradGuard no_grad;
    return forward(nn::Var::constant(Matrix::column(window))).value().storage();
}

Matrix DPadModel::disentangle(std::span<const double> window) const {
    nn::NoGradGuard no_grad;
    const auto x = nn::Var::constant(Matrix::column(window));
    if (x.rows() != cfg_.lookback) throw ValidationError("disentangle: window length mismatch");
    const RevinState st = revin_statistics(window);
    return tree_.forward(nn::revin_normalize(x, st, revin_)).value();
}

void DPadModel::load_values(const std::vector<std::pair<std::string, Matrix>>& values) {
    if (values.size() != params_.size()) {
        throw ConfigError("parameter count mismatch: expected " + std::to_string(params_.size()) +
                          ", got " + std::to_string(values.size()));
    }
    for (const auto& [name, m] : values) {
        nn::Var v = params_.get(name);
        if (!v.value().same_shape(m)) throw ConfigError("parameter shape mismatch: " + name);
        v.mutable_value() = m;
    }
}

std::vector<std::pair<std::string, Matrix>> DPadModel::snapshot() const {
    std::vector<std::pair<std::string, Matrix>> out;
    out.reserve(params_.size());
    for (const auto& [name, v] : params_.entries()) out.emplace_back(name, v.value());
    return out;
}

}  // namespace dpad
