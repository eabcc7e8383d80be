#pragma once

#include <cstdint>
#include <string>

#include "dpad/drd.hpp"
#include "dpad/ifm.hpp"
#include "dpad/memd.hpp"
#include "json.hpp"

namespace dpad {

/// Every hyperparameter of the model, the optimiser and the data split.
/// JSON config files use these field names as keys.
struct ModelConfig {
    // Shapes.
    std::size_t lookback = 336;  // T
    std::size_t horizon = 96;    // H
    std::size_t components = 6;  // K per decomposition
    std::size_t levels = 2;      // L
    std::size_t se_half_width = 1;  // C; SE length is 2C + 1
    std::size_t mask_span = 3;      // O
    std::size_t proj_hidden = 336;  // d
    std::size_t embed_dim = 336;    // d_em
    std::size_t gnn_in_dim = 336;   // d_in
    std::size_t gnn_mid_dim = 336;  // d_mid
    std::size_t out_dim = 336;      // d_out
    std::size_t graphs = 1;         // M

    // Decomposition.
    double rt_threshold = 0.2;
    int max_sift = 10;
    bool memd_stop_gradient = false;

    // Heads.
    bool disable_if_module = false;
    bool revin_affine = true;
    AdjacencyAxis adjacency_axis = AdjacencyAxis::Rows;

    // Optimisation.
    double learning_rate = 1e-4;
    std::size_t batch_size = 32;
    std::size_t patience = 5;
    std::size_t max_epochs = 100;
    double grad_clip_norm = 0.0;  // 0 disables clipping
    std::uint64_t seed = 2024;

    // Data.
    double train_ratio = 0.6;
    double val_ratio = 0.2;
    double test_ratio = 0.2;
    std::size_t stride = 1;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;

    SiftConfig sift() const;
    DrdShape drd_shape() const;
    IfmShape ifm_shape() const;
};

nlohmann::json to_json(const ModelConfig& cfg);
/// Overlays the keys present in `j` onto `base`; unknown keys raise ConfigError.
ModelConfig config_from_json(const nlohmann::json& j, ModelConfig base = {});
ModelConfig load_config(const std::string& path);

}  // namespace dpad
