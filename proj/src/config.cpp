#include "dpad/config.hpp"

#include <cmath>
#include <fstream>

#include "dpad/error.hpp"

namespace dpad {
namespace {

std::string axis_name(AdjacencyAxis a) { return a == AdjacencyAxis::Rows ? "rows" : "cols"; }

AdjacencyAxis parse_axis(const std::string& s) {
    if (s == "rows") return AdjacencyAxis::Rows;
    if (s == "cols" || s == "columns") return AdjacencyAxis::Cols;
    throw ConfigError("adjacency_axis must be \"rows\" or \"cols\", got \"" + s + "\"");
}

}  // namespace

void ModelConfig::validate() const {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(lookback >= 2 * se_half_width + 1, "lookback must be at least the SE length 2C+1");
    require(horizon >= 1, "horizon must be at least 1");
    require(components >= 2, "components must be at least 2");
    require(levels >= 1 && levels <= 6, "levels must be in [1, 6]");
    require(mask_span % 2 == 1, "mask_span must be odd");
    require(proj_hidden > 0 && embed_dim > 0 && gnn_in_dim > 0 && gnn_mid_dim > 0 && out_dim > 0,
            "all widths must be positive");
    require(graphs >= 1, "graphs must be at least 1");
    require(graphs * gnn_mid_dim == gnn_in_dim, "graphs * gnn_mid_dim must equal gnn_in_dim");
    require(rt_threshold > 0.0, "rt_threshold must be positive");
    require(max_sift >= 1, "max_sift must be at least 1");
    require(learning_rate > 0.0, "learning_rate must be positive");
    require(batch_size >= 1, "batch_size must be at least 1");
    require(max_epochs >= 1, "max_epochs must be at least 1");
    require(grad_clip_norm >= 0.0, "grad_clip_norm must be non-negative");
    require(train_ratio > 0 && val_ratio > 0 && test_ratio > 0, "split ratios must be positive");
    require(std::fabs(train_ratio + val_ratio + test_ratio - 1.0) <= 1e-9,
            "split ratios must sum to 1");
    require(stride >= 1, "stride must be at least 1");
}

SiftConfig ModelConfig::sift() const {
    return SiftConfig{SEKernel::zero(se_half_width), rt_threshold, max_sift};
}

DrdShape ModelConfig::drd_shape() const {
    return DrdShape{lookback, components, levels, proj_hidden, mask_span, sift(),
                    memd_stop_gradient};
}

IfmShape ModelConfig::ifm_shape() const {
    return IfmShape{lookback, embed_dim, gnn_in_dim, gnn_mid_dim, out_dim, graphs};
}

nlohmann::json to_json(const ModelConfig& c) {
    return {
        {"lookback", c.lookback},
        {"horizon", c.horizon},
        {"components", c.components},
        {"levels", c.levels},
        {"se_half_width", c.se_half_width},
        {"mask_span", c.mask_span},
        {"proj_hidden", c.proj_hidden},
        {"embed_dim", c.embed_dim},
        {"gnn_in_dim", c.gnn_in_dim},
        {"gnn_mid_dim", c.gnn_mid_dim},
        {"out_dim", c.out_dim},
        {"graphs", c.graphs},
        {"rt_threshold", c.rt_threshold},
        {"max_sift", c.max_sift},
        {"memd_stop_gradient", c.memd_stop_gradient},
        {"disable_if_module", c.disable_if_module},
        {"revin_affine", c.revin_affine},
        {"adjacency_axis", axis_name(c.adjacency_axis)},
        {"learning_rate", c.learning_rate},
        {"batch_size", c.batch_size},
        {"patience", c.patience},
        {"max_epochs", c.max_epochs},
        {"grad_clip_norm", c.grad_clip_norm},
        {"seed", c.seed},
        {"train_ratio", c.train_ratio},
        {"val_ratio", c.val_ratio},
        {"test_ratio", c.test_ratio},
        {"stride", c.stride},
    };
}

ModelConfig config_from_json(const nlohmann::json& j, ModelConfig c) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "lookback") c.lookback = value.get<std::size_t>();
            else if (key == "horizon") c.horizon = value.get<std::size_t>();
            else if (key == "components") c.components = value.get<std::size_t>();
            else if (key == "levels") c.levels = value.get<std::size_t>();
            else if (key == "se_half_width") c.se_half_width = value.get<std::size_t>();
            else if (key == "mask_span") c.mask_span = value.get<std::size_t>();
            else if (key == "proj_hidden") c.proj_hidden = value.get<std::size_t>();
            else if (key == "embed_dim") c.embed_dim = value.get<std::size_t>();
            else if (key == "gnn_in_dim") c.gnn_in_dim = value.get<std::size_t>();
            else if (key == "gnn_mid_dim") c.gnn_mid_dim = value.get<std::size_t>();
            else if (key == "out_dim") c.out_dim = value.get<std::size_t>();
            else if (key == "graphs") c.graphs = value.get<std::size_t>();
            else if (key == "rt_threshold") c.rt_threshold = value.get<double>();
            else if (key == "max_sift") c.max_sift = value.get<int>();
            else if (key == "memd_stop_gradient") c.memd_stop_gradient = value.get<bool>();
            else if (key == "disable_if_module") c.disable_if_module = value.get<bool>();
            else if (key == "revin_affine") c.revin_affine = value.get<bool>();
            else if (key == "adjacency_axis") c.adjacency_axis = parse_axis(value.get<std::string>());
            else if (key == "learning_rate") c.learning_rate = value.get<double>();
            else if (key == "batch_size") c.batch_size = value.get<std::size_t>();
            else if (key == "patience") c.patience = value.get<std::size_t>();
            else if (key == "max_epochs") c.max_epochs = value.get<std::size_t>();
            else if (key == "grad_clip_norm") c.grad_clip_norm = value.get<double>();
            else if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "train_ratio") c.train_ratio = value.get<double>();
            else if (key == "val_ratio") c.val_ratio = value.get<double>();
            else if (key == "test_ratio") c.test_ratio = value.get<double>();
            else if (key == "stride") c.stride = value.get<std::size_t>();
            else throw ConfigError("unknown config key: " + key);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config key " + key + ": " + e.what());
        }
    }
    return c;
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace dpad
